use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};

/// Camera-like degradation applied to synthetic fixtures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Degradation {
    /// Gaussian blur standard deviation, pixels.
    pub gaussian_blur_sigma: f64,
    /// Additive Gaussian noise standard deviation, intensity units.
    pub noise_sigma: f64,
    /// Side of the square output after area-average downscaling.
    pub target_size: Option<usize>,
    pub seed: u64,
}

/// Blur, then add clipped noise, then downscale. Deterministic for a given
/// seed; all-zero parameters return the input unchanged.
pub fn degrade(img: &GrayImage, d: &Degradation) -> Result<GrayImage> {
    if !(d.gaussian_blur_sigma >= 0.0) || !(d.noise_sigma >= 0.0) {
        return Err(Error::InvalidParameter(
            "blur and noise sigmas must be non-negative".into(),
        ));
    }
    if let Some(t) = d.target_size {
        if t == 0 || t > img.width() || t > img.height() {
            return Err(Error::BadTarget {
                target: t,
                width: img.width(),
                height: img.height(),
            });
        }
    }
    let mut out = if d.gaussian_blur_sigma > 0.0 {
        gaussian_blur(img, d.gaussian_blur_sigma)?
    } else {
        img.clone()
    };
    if d.noise_sigma > 0.0 {
        out = add_noise(&out, d.noise_sigma, d.seed)?;
    }
    if let Some(t) = d.target_size {
        if t != out.width() || t != out.height() {
            out = area_downscale(&out, t, t)?;
        }
    }
    Ok(out)
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

/// Separable Gaussian blur, kernel truncated at 3 sigma, edges clamped.
fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (w, h) = (img.width(), img.height());
    let mut tmp = vec![0.0; w * h];
    for row in 0..h {
        for x in 0..w {
            tmp[row * w + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * img.get_clamped(x as isize + i as isize - radius, row as isize))
                .sum();
        }
    }
    GrayImage::from_fn(w, h, |x, row| {
        kernel
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let r = (row as isize + i as isize - radius).clamp(0, h as isize - 1) as usize;
                k * tmp[r * w + x]
            })
            .sum()
    })
}

fn add_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("noise sigma: {e}")))?;
    let pixels = img
        .pixels()
        .iter()
        .map(|&v| (v + normal.sample(&mut rng)).clamp(0.0, 1.0))
        .collect();
    GrayImage::new(img.width(), img.height(), pixels)
}

/// Weights of the source cells overlapping output cell `i` when `src` cells
/// are split into `dst` equal parts.
fn overlaps(i: usize, src: usize, dst: usize) -> Vec<(usize, f64)> {
    let scale = src as f64 / dst as f64;
    let (lo, hi) = (i as f64 * scale, (i + 1) as f64 * scale);
    (lo.floor() as usize..(hi.ceil() as usize).min(src))
        .filter_map(|j| {
            let w = hi.min(j as f64 + 1.0) - lo.max(j as f64);
            (w > 0.0).then_some((j, w))
        })
        .collect()
}

/// Area-average resampling to a smaller grid. Preserves the image mean.
fn area_downscale(img: &GrayImage, width: usize, height: usize) -> Result<GrayImage> {
    let cols: Vec<_> = (0..width)
        .map(|i| overlaps(i, img.width(), width))
        .collect();
    let rows: Vec<_> = (0..height)
        .map(|i| overlaps(i, img.height(), height))
        .collect();
    let area = (img.width() as f64 / width as f64) * (img.height() as f64 / height as f64);
    GrayImage::from_fn(width, height, |x, row| {
        let mut acc = 0.0;
        for &(r, wy) in &rows[row] {
            for &(c, wx) in &cols[x] {
                acc += img.get(c, r) * wx * wy;
            }
        }
        acc / area
    })
}
