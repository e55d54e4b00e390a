mod common;

use common::max_abs_diff;
use girre::{
    clamp, compute_coefficients, downscale, guided_transfer_unclamped, psnr, ssim, to_gray,
    upscale_bicubic, FilterParams, PlanarImage, ScaleFactor,
};
use proptest::prelude::*;

fn image(w: usize, h: usize, lo: f64, hi: f64) -> impl Strategy<Value = PlanarImage> {
    prop::collection::vec(lo..hi, w * h).prop_map(move |d| PlanarImage::new(w, h, 1, d).unwrap())
}

fn sized_image(max: usize) -> impl Strategy<Value = PlanarImage> {
    (2..=max, 2..=max).prop_flat_map(|(w, h)| image(w, h, 0.0, 1.0))
}

fn pair(w: usize, h: usize) -> impl Strategy<Value = (PlanarImage, PlanarImage)> {
    (image(w, h, 0.0, 1.0), image(w, h, 0.0, 1.0))
}

fn mean(img: &PlanarImage) -> f64 {
    img.data().iter().sum::<f64>() / img.len() as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slope_shrinks_as_epsilon_grows(
        (g, x) in pair(18, 15),
        r in 0usize..5,
        e1 in 1e-6f64..1e-2,
        factor in 1.0f64..100.0,
    ) {
        let small = compute_coefficients(&g, &x, FilterParams::new(r, e1).unwrap()).unwrap();
        let large = compute_coefficients(&g, &x, FilterParams::new(r, e1 * factor).unwrap()).unwrap();
        for (a, b) in small.a().iter().zip(large.a()) {
            prop_assert!(b.abs() <= a.abs() + 1e-15);
        }
    }

    #[test]
    fn affine_guide_with_scaled_epsilon_is_exact(
        (g, x) in pair(20, 17),
        r in 1usize..5,
        alpha in 0.5f64..2.0,
        beta in -0.5f64..0.5,
    ) {
        let eps = 1e-4;
        let g2 = PlanarImage::new_unclamped(
            g.width(), g.height(), 1,
            g.data().iter().map(|v| alpha * v + beta).collect(),
        ).unwrap();
        let out = guided_transfer_unclamped(&x, &g, FilterParams::new(r, eps).unwrap()).unwrap();
        let scaled = guided_transfer_unclamped(&x, &g2, FilterParams::new(r, eps * alpha * alpha).unwrap()).unwrap();
        prop_assert!(max_abs_diff(out.data(), scaled.data()) <= 1e-8);
    }

    #[test]
    fn affine_guide_with_fixed_epsilon_is_close(
        noise in prop::collection::vec(-0.1f64..0.1, 20 * 17),
        x in image(20, 17, 0.0, 1.0),
        r in 1usize..5,
        alpha in 0.5f64..2.0,
        beta in -0.5f64..0.5,
    ) {
        // a checkerboard base keeps every window's variance far above epsilon
        let g = PlanarImage::new(20, 17, 1, noise.iter().enumerate().map(|(i, n)| {
            let (px, py) = (i % 20, i / 20);
            0.5 + if (px + py) % 2 == 0 { 0.3 } else { -0.3 } + n
        }).collect()).unwrap();
        let g2 = PlanarImage::new_unclamped(
            20, 17, 1, g.data().iter().map(|v| alpha * v + beta).collect(),
        ).unwrap();
        let params = FilterParams::new(r, 1e-4).unwrap();
        let out = guided_transfer_unclamped(&x, &g, params).unwrap();
        let moved = guided_transfer_unclamped(&x, &g2, params).unwrap();
        prop_assert!(max_abs_diff(out.data(), moved.data()) <= 1e-3);
    }

    #[test]
    fn gray_stays_within_channel_range(
        px in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0), 1..40)
    ) {
        let n = px.len();
        let data: Vec<f64> = px.iter().map(|p| p.0)
            .chain(px.iter().map(|p| p.1))
            .chain(px.iter().map(|p| p.2))
            .collect();
        let gray = to_gray(&PlanarImage::new(n, 1, 3, data).unwrap()).unwrap();
        for (y, p) in gray.data().iter().zip(&px) {
            prop_assert!(*y >= p.0.min(p.1).min(p.2) && *y <= p.0.max(p.1).max(p.2));
        }
    }

    #[test]
    fn clamp_is_idempotent(d in prop::collection::vec(-2.0f64..3.0, 12)) {
        let img = PlanarImage::new_unclamped(4, 3, 1, d).unwrap();
        let once = clamp(&img);
        prop_assert!(once.is_normalized());
        prop_assert_eq!(clamp(&once), once);
    }

    #[test]
    fn downscale_keeps_global_mean(img in sized_image(9), s in 2usize..5) {
        let w = img.width() * s;
        let h = img.height() * s;
        let big = PlanarImage::new(w, h, 1, (0..w * h).map(|i| img.data()[(i * 7919) % img.len()]).collect()).unwrap();
        let small = downscale(&big, ScaleFactor::uniform(s).unwrap()).unwrap();
        prop_assert!((mean(&big) - mean(&small)).abs() <= 1e-12);
    }

    #[test]
    fn bicubic_reproduces_ramps_away_from_borders(
        c0 in 0.1f64..0.3, c1 in 0.0f64..0.04, n in 8usize..16, s in 2usize..5,
    ) {
        let lr = PlanarImage::from_fn(n, 3, |x, _| c0 + c1 * x as f64).unwrap();
        let up = upscale_bicubic(&lr, ScaleFactor::uniform(s).unwrap());
        for o in 0..up.width() {
            let src = (o as f64 + 0.5) / s as f64 - 0.5;
            // the cubic kernel reaches two samples each way
            if src >= 1.0 && src <= n as f64 - 3.0 {
                prop_assert!((up.get(o, 4, 0) - (c0 + c1 * src)).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn psnr_is_symmetric_and_falls_with_error(
        base in image(8, 8, 0.3, 0.7), d1 in 0.001f64..0.1, extra in 0.001f64..0.1, sign in prop::bool::ANY,
    ) {
        let shift = |d: f64| {
            let d = if sign { d } else { -d };
            PlanarImage::new(8, 8, 1, base.data().iter().map(|v| v + d).collect()).unwrap()
        };
        let (near, far) = (shift(d1), shift(d1 + extra));
        prop_assert_eq!(psnr(&base, &near).unwrap(), psnr(&near, &base).unwrap());
        prop_assert!(psnr(&base, &near).unwrap() > psnr(&base, &far).unwrap());
    }

    #[test]
    fn ssim_is_symmetric((a, b) in pair(16, 14)) {
        prop_assert!((ssim(&a, &b).unwrap() - ssim(&b, &a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn ssim_ignores_a_common_offset(
        a in image(24, 20, 0.3, 0.6), amp in 0.0f64..0.1, c in -0.2f64..0.3,
    ) {
        // a checkerboard perturbation has (numerically) zero local mean, so
        // only the offset-invariant structure terms differ between a and b
        let b = PlanarImage::new(24, 20, 1,
            a.data().iter().enumerate().map(|(i, v)| {
                let (x, y) = (i % 24, i / 24);
                v + if (x + y) % 2 == 0 { amp } else { -amp }
            }).collect()).unwrap();
        let lift = |img: &PlanarImage| PlanarImage::new(24, 20, 1, img.data().iter().map(|v| v + c).collect()).unwrap();
        let before = ssim(&a, &b).unwrap();
        let after = ssim(&lift(&a), &lift(&b)).unwrap();
        prop_assert!((before - after).abs() <= 1e-6, "{before} vs {after}");
    }
}
