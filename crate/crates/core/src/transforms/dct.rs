use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::canvas_len;
use super::fft::fft_in_place;
use crate::error::Result;
use crate::image::GrayImage;

/// Orthonormal DCT-II, computed through one complex FFT of the same length
/// (even samples ascending, odd samples descending).
pub fn dct_ii(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n.div_ceil(2) {
        v[k].re = x[2 * k];
    }
    for k in 0..n / 2 {
        v[n - 1 - k].re = x[2 * k + 1];
    }
    fft_in_place(&mut v, false);
    let (a0, ak) = ((1.0 / n as f64).sqrt(), (2.0 / n as f64).sqrt());
    v.iter()
        .enumerate()
        .map(|(k, vk)| {
            let tw = Complex64::from_polar(1.0, -PI * k as f64 / (2.0 * n as f64));
            (tw * vk).re * if k == 0 { a0 } else { ak }
        })
        .collect()
}

/// Orthonormal DCT-III, the exact inverse of [`dct_ii`].
pub fn dct_iii(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    if n == 0 {
        return Vec::new();
    }
    // back to the unnormalized DCT-II values X[k]
    let nf = n as f64;
    let big_x = |k: usize| -> f64 {
        match k {
            0 => c[0] * nf.sqrt(),
            k if k < n => c[k] * (nf / 2.0).sqrt(),
            _ => 0.0,
        }
    };
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| {
            let tw = Complex64::from_polar(1.0, PI * k as f64 / (2.0 * nf));
            tw * Complex64::new(big_x(k), -big_x(n - k))
        })
        .collect();
    fft_in_place(&mut v, true);
    let mut x = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        x[2 * k] = v[k].re / nf;
    }
    for k in 0..n / 2 {
        x[2 * k + 1] = v[n - 1 - k].re / nf;
    }
    x
}

/// Orthonormal 2D DCT-II coefficients, `(0, 0)` at the low-frequency corner.
#[derive(Debug, Clone)]
pub struct DctSpectrum2D {
    width: usize,
    height: usize,
    coeffs: Vec<f64>,
    image_width: usize,
    image_height: usize,
}

impl DctSpectrum2D {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn image_size(&self) -> (usize, usize) {
        (self.image_width, self.image_height)
    }

    /// Row-major coefficients, `ky` major.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, kx: usize, ky: usize) -> f64 {
        self.coeffs[ky * self.width + kx]
    }

    /// Inverse transform back to the (padded, y-up) canvas, row-major with
    /// the bottom image row first.
    pub fn inverse(&self) -> Vec<f64> {
        separable(&self.coeffs, self.width, self.height, dct_iii)
    }
}

fn separable(data: &[f64], w: usize, h: usize, f: fn(&[f64]) -> Vec<f64>) -> Vec<f64> {
    let mut out: Vec<f64> = data.chunks_exact(w).flat_map(f).collect();
    let mut column = vec![0.0; h];
    for x in 0..w {
        for (y, c) in column.iter_mut().enumerate() {
            *c = out[y * w + x];
        }
        for (y, v) in f(&column).into_iter().enumerate() {
            out[y * w + x] = v;
        }
    }
    out
}

/// 2D DCT-II of `img`. The image sits at the canvas corner in the y-up frame
/// (its bottom-left pixel at index `(0, 0)`); the rest of a
/// `pad_factor * next_power_of_two` canvas is zero. Zero rather than
/// replicated edges, so projections read back from the spectrum carry the
/// image's mass and nothing else.
pub fn dct2(img: &GrayImage, pad_factor: usize) -> Result<DctSpectrum2D> {
    dct2_from_fn(img.width(), img.height(), pad_factor, |x, y| img.y_up(x, y))
}

/// [`dct2`] of an arbitrary real field given as `f(x, y)` in the y-up frame.
pub(crate) fn dct2_from_fn(
    w: usize,
    h: usize,
    pad_factor: usize,
    f: impl Fn(usize, usize) -> f64,
) -> Result<DctSpectrum2D> {
    let cw = canvas_len(w, pad_factor)?;
    let ch = canvas_len(h, pad_factor)?;
    let mut canvas = vec![0.0; cw * ch];
    for y in 0..h {
        for x in 0..w {
            canvas[y * cw + x] = f(x, y);
        }
    }
    Ok(DctSpectrum2D {
        width: cw,
        height: ch,
        coeffs: separable(&canvas, cw, ch, dct_ii),
        image_width: w,
        image_height: h,
    })
}
