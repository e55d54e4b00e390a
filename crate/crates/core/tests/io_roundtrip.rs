mod common;

use common::{max_abs_diff, random_image, random_rgb, rng};
use girre::{load_image, read_image, save_image, BitDepth, Error, PlanarImage};
use image::{ImageBuffer, Luma, Rgba};

#[test]
fn round_trip_is_within_half_a_step() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = rng(11);
    let gray = random_image(&mut rng, 17, 9);
    let rgb = random_rgb(&mut rng, 8, 13);
    for (depth, half) in [
        (BitDepth::Eight, 1.0 / 510.0),
        (BitDepth::Sixteen, 1.0 / 131070.0),
    ] {
        for (img, ext) in [(&gray, "png"), (&gray, "pgm"), (&rgb, "png"), (&rgb, "ppm")] {
            let path = dir.path().join(format!("img{}.{ext}", depth.bits()));
            save_image(img, &path, depth).unwrap();
            let (back, stored) = read_image(&path).unwrap();
            assert_eq!(stored, depth);
            assert_eq!(
                (back.width(), back.height(), back.channels()),
                (img.width(), img.height(), img.channels())
            );
            let err = max_abs_diff(back.data(), img.data());
            assert!(err <= half + 1e-15, "{ext} {depth:?}: {err}");
        }
    }
}

#[test]
fn sixteen_bit_codes_map_to_unit_interval() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mid.png");
    ImageBuffer::<Luma<u16>, _>::from_raw(2, 1, vec![32768u16, 65535])
        .unwrap()
        .save(&path)
        .unwrap();
    let img = load_image(&path).unwrap();
    assert_eq!(img.data(), &[32768.0 / 65535.0, 1.0]);
}

#[test]
fn quantized_values_survive_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("codes.png");
    let img = PlanarImage::new(4, 1, 1, vec![0.0, 1.0 / 65535.0, 40000.0 / 65535.0, 1.0]).unwrap();
    save_image(&img, &path, BitDepth::Sixteen).unwrap();
    assert_eq!(load_image(&path).unwrap(), img);
}

#[test]
fn rejects_alpha_and_unknown_formats() {
    let dir = tempfile::tempdir().unwrap();
    let rgba = dir.path().join("a.png");
    ImageBuffer::<Rgba<u8>, _>::from_raw(1, 1, vec![1, 2, 3, 4])
        .unwrap()
        .save(&rgba)
        .unwrap();
    assert!(matches!(
        load_image(&rgba),
        Err(Error::UnsupportedFormat { .. })
    ));

    let txt = dir.path().join("b.txt");
    std::fs::write(&txt, "not an image").unwrap();
    assert!(load_image(&txt).is_err());

    let img = PlanarImage::constant(2, 2, 1, 0.5).unwrap();
    assert!(matches!(
        save_image(&img, dir.path().join("c.jpg"), BitDepth::Eight),
        Err(Error::UnsupportedFormat { .. })
    ));
    assert!(load_image(dir.path().join("missing.png")).is_err());
}
