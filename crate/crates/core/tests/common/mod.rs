//! Independent reference implementations used by the integration tests.
//! Everything here is written for clarity, not speed.

#![allow(dead_code)]

use girre::PlanarImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> PlanarImage {
    let data = (0..w * h).map(|_| rng.random::<f64>()).collect();
    PlanarImage::new(w, h, 1, data).unwrap()
}

pub fn random_rgb(rng: &mut ChaCha8Rng, w: usize, h: usize) -> PlanarImage {
    let data = (0..3 * w * h).map(|_| rng.random::<f64>()).collect();
    PlanarImage::new(w, h, 3, data).unwrap()
}

/// Inclusive-exclusive pixel range of the window of radius `r` around `k`,
/// truncated at the border.
pub fn span(k: usize, r: usize, n: usize) -> std::ops::Range<usize> {
    k.saturating_sub(r)..(k + r + 1).min(n)
}

/// Every pixel of the truncated window around `(kx, ky)`.
pub fn window(kx: usize, ky: usize, r: usize, w: usize, h: usize) -> Vec<(usize, usize)> {
    span(ky, r, h)
        .flat_map(|y| span(kx, r, w).map(move |x| (x, y)))
        .collect()
}

/// Box mean by explicit summation over each window.
pub fn naive_box_mean(data: &[f64], w: usize, h: usize, r: usize) -> Vec<f64> {
    let mut out = vec![0.0; w * h];
    for ky in 0..h {
        for kx in 0..w {
            let px = window(kx, ky, r, w, h);
            out[ky * w + kx] =
                px.iter().map(|&(x, y)| data[y * w + x]).sum::<f64>() / px.len() as f64;
        }
    }
    out
}

/// Per-window ridge fit of `x ~ a g + b` with penalty `eps * a^2`, found by
/// solving the 2x2 normal equations
///
/// ```text
/// [ sum g^2 + n eps   sum g ] [a]   [ sum g x ]
/// [ sum g             n     ] [b] = [ sum x   ]
/// ```
///
/// with Cramer's rule. Windows with a flat guide get slope 0.
pub fn ridge_window(g: &[f64], x: &[f64], eps: f64) -> (f64, f64) {
    let n = g.len() as f64;
    let sg: f64 = g.iter().sum();
    let sx: f64 = x.iter().sum();
    let sgg: f64 = g.iter().map(|v| v * v).sum();
    let sgx: f64 = g.iter().zip(x).map(|(p, q)| p * q).sum();
    let g0 = g[0];
    if g.iter().all(|&v| v == g0) {
        return (0.0, sx / n);
    }
    let det = (sgg + n * eps) * n - sg * sg;
    let a = (sgx * n - sg * sx) / det;
    let b = ((sgg + n * eps) * sx - sg * sgx) / det;
    (a, b)
}

/// Window coefficients for every pixel, by explicit ridge fits.
pub fn naive_coefficients(
    guide: &PlanarImage,
    approx: &PlanarImage,
    r: usize,
    eps: f64,
) -> (Vec<f64>, Vec<f64>) {
    let (w, h) = (guide.width(), guide.height());
    let mut a = vec![0.0; w * h];
    let mut b = vec![0.0; w * h];
    for ky in 0..h {
        for kx in 0..w {
            let px = window(kx, ky, r, w, h);
            let gs: Vec<f64> = px.iter().map(|&(x, y)| guide.get(x, y, 0)).collect();
            let xs: Vec<f64> = px.iter().map(|&(x, y)| approx.get(x, y, 0)).collect();
            let (ak, bk) = ridge_window(&gs, &xs, eps);
            a[ky * w + kx] = ak;
            b[ky * w + kx] = bk;
        }
    }
    (a, b)
}

/// For each pixel, the mean over every window that contains it, found by
/// scanning all window centers.
pub fn brute_force_average(field: &[f64], w: usize, h: usize, r: usize) -> Vec<f64> {
    let mut sum = vec![0.0; w * h];
    let mut count = vec![0usize; w * h];
    for ky in 0..h {
        for kx in 0..w {
            for (x, y) in window(kx, ky, r, w, h) {
                sum[y * w + x] += field[ky * w + kx];
                count[y * w + x] += 1;
            }
        }
    }
    sum.iter().zip(&count).map(|(s, &c)| s / c as f64).collect()
}

/// The unclamped transfer: per-window fits, overlap averaging, then
/// `a_bar * G + b_bar`.
pub fn naive_transfer(approx: &PlanarImage, guide: &PlanarImage, r: usize, eps: f64) -> Vec<f64> {
    let (w, h) = (guide.width(), guide.height());
    let (a, b) = naive_coefficients(guide, approx, r, eps);
    let a_bar = brute_force_average(&a, w, h, r);
    let b_bar = brute_force_average(&b, w, h, r);
    (0..w * h)
        .map(|i| a_bar[i] * guide.data()[i] + b_bar[i])
        .collect()
}

pub fn naive_psnr(a: &[f64], b: &[f64]) -> f64 {
    let mse = a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>() / a.len() as f64;
    10.0 * (1.0 / mse).log10()
}

/// SSIM with an explicit 2-D Gaussian window at every valid position.
pub fn naive_ssim(a: &PlanarImage, b: &PlanarImage) -> f64 {
    let (w, h) = (a.width(), a.height());
    let size = 11;
    let sigma: f64 = 1.5;
    let mut kernel = vec![0.0; size * size];
    for j in 0..size {
        for i in 0..size {
            let (dx, dy) = (i as f64 - 5.0, j as f64 - 5.0);
            kernel[j * size + i] = (-(dx * dx + dy * dy) / (2.0 * sigma * sigma)).exp();
        }
    }
    let total: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|k| *k /= total);

    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut acc = 0.0;
    let mut n = 0;
    for y0 in 0..=h - size {
        for x0 in 0..=w - size {
            let (mut mx, mut my) = (0.0, 0.0);
            for j in 0..size {
                for i in 0..size {
                    let k = kernel[j * size + i];
                    mx += k * a.get(x0 + i, y0 + j, 0);
                    my += k * b.get(x0 + i, y0 + j, 0);
                }
            }
            let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
            for j in 0..size {
                for i in 0..size {
                    let k = kernel[j * size + i];
                    let p = a.get(x0 + i, y0 + j, 0) - mx;
                    let q = b.get(x0 + i, y0 + j, 0) - my;
                    vx += k * p * p;
                    vy += k * q * q;
                    cxy += k * p * q;
                }
            }
            acc += ((2.0 * mx * my + c1) * (2.0 * cxy + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            n += 1;
        }
    }
    acc / n as f64
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}
