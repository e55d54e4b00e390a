//! Agreement with the reference implementations in `common`.

mod common;

use common::*;
use girre::{
    average_coefficients, box_mean, compute_coefficients, guided_transfer_unclamped, psnr, ssim,
    CoefficientField, FilterParams, PlanarImage,
};

#[test]
fn box_mean_matches_naive_sum() {
    let mut rng = rng(1);
    for &r in &[1, 3, 6, 15] {
        for &(w, h) in &[(40, 33), (31, 31), (64, 50)] {
            let img = random_image(&mut rng, w, h);
            let fast = box_mean(&img, r).unwrap();
            let slow = naive_box_mean(img.data(), w, h, r);
            let err = max_abs_diff(fast.data(), &slow);
            assert!(err <= 1e-10, "r={r} {w}x{h}: {err:e}");
        }
    }
}

#[test]
fn coefficients_match_ridge_normal_equations() {
    let mut rng = rng(2);
    for &r in &[0, 1, 3, 6] {
        for &eps in &[1e-6, 1e-4, 1e-2] {
            let g = random_image(&mut rng, 29, 23);
            let x = random_image(&mut rng, 29, 23);
            let c = compute_coefficients(&g, &x, FilterParams::new(r, eps).unwrap()).unwrap();
            let (a, b) = naive_coefficients(&g, &x, r, eps);
            let ea = max_abs_diff(c.a(), &a);
            let eb = max_abs_diff(c.b(), &b);
            assert!(
                ea <= 1e-8 && eb <= 1e-8,
                "r={r} eps={eps}: a {ea:e}, b {eb:e}"
            );
        }
    }
}

#[test]
fn averaging_matches_overlapping_window_sum() {
    let mut rng = rng(3);
    for &r in &[0, 1, 2, 5, 9] {
        let (w, h) = (27, 21);
        let a: Vec<f64> = random_image(&mut rng, w, h)
            .into_data()
            .iter()
            .map(|v| 4.0 * v - 2.0)
            .collect();
        let b = random_image(&mut rng, w, h).into_data();
        let field = CoefficientField::new(w, h, a.clone(), b.clone()).unwrap();
        let avg = average_coefficients(&field, r).unwrap();
        assert!(max_abs_diff(avg.a(), &brute_force_average(&a, w, h, r)) <= 1e-12);
        assert!(max_abs_diff(avg.b(), &brute_force_average(&b, w, h, r)) <= 1e-12);
    }
}

#[test]
fn transfer_matches_naive_pipeline() {
    let mut rng = rng(4);
    for &(r, eps) in &[(1, 1e-4), (3, 1e-2), (6, 1e-6), (15, 1e-4)] {
        let g = random_image(&mut rng, 40, 36);
        let x = random_image(&mut rng, 40, 36);
        let out = guided_transfer_unclamped(&x, &g, FilterParams::new(r, eps).unwrap()).unwrap();
        let err = max_abs_diff(out.data(), &naive_transfer(&x, &g, r, eps));
        assert!(err <= 1e-8, "r={r} eps={eps}: {err:e}");
    }
}

#[test]
fn per_window_model_transfers_edges() {
    // inside one window the fitted model maps guide differences to output
    // differences scaled by that window's slope
    let mut rng = rng(5);
    let g = random_image(&mut rng, 20, 20);
    let x = random_image(&mut rng, 20, 20);
    let c = compute_coefficients(&g, &x, FilterParams::new(2, 1e-3).unwrap()).unwrap();
    for &(kx, ky) in &[(0, 0), (7, 9), (19, 4)] {
        let px = window(kx, ky, 2, 20, 20);
        let a = c.a_at(kx, ky);
        for &(xi, yi) in &px {
            for &(xj, yj) in &px {
                let (gi, gj) = (g.get(xi, yi, 0), g.get(xj, yj, 0));
                let d = c.predict(kx, ky, gi) - c.predict(kx, ky, gj);
                assert!((d - a * (gi - gj)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn psnr_of_constant_pair() {
    let a = PlanarImage::constant(16, 16, 1, 0.5).unwrap();
    let b = PlanarImage::constant(16, 16, 1, 0.75).unwrap();
    assert!((psnr(&a, &b).unwrap() - 12.0412).abs() <= 1e-4);
    assert_eq!(psnr(&a, &a).unwrap(), f64::INFINITY);
}

#[test]
fn metrics_match_naive_versions() {
    let mut rng = rng(6);
    for _ in 0..3 {
        let a = random_image(&mut rng, 64, 64);
        let b = random_image(&mut rng, 64, 64);
        let p = psnr(&a, &b).unwrap();
        assert!((p - naive_psnr(a.data(), b.data())).abs() <= 1e-9);
        let s = ssim(&a, &b).unwrap();
        assert!(
            (s - naive_ssim(&a, &b)).abs() <= 1e-9,
            "{s} vs {}",
            naive_ssim(&a, &b)
        );
        assert!((ssim(&a, &a).unwrap() - 1.0).abs() <= 1e-12);
    }
}
