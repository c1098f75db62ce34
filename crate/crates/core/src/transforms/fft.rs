use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::canvas_len;
use crate::error::Result;
use crate::image::GrayImage;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place unnormalized FFT (`inverse` flips the exponent sign only).
pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let plan = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(buf.len())
        } else {
            p.plan_fft_forward(buf.len())
        }
    });
    plan.process(buf);
}

/// Swaps halves so index 0 moves to `n / 2`.
pub(crate) fn fftshift<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    (0..n).map(|i| v[(i + n - n / 2) % n]).collect()
}

/// Inverse of [`fftshift`].
pub(crate) fn ifftshift<T: Copy>(v: &[T]) -> Vec<T> {
    let n = v.len();
    (0..n).map(|i| v[(i + n / 2) % n]).collect()
}

/// Centered 2D spectrum of a real image.
#[derive(Debug, Clone)]
pub struct ComplexSpectrum2D {
    width: usize,
    height: usize,
    bins: Vec<Complex64>,
    image_width: usize,
    image_height: usize,
}

impl ComplexSpectrum2D {
    /// Bin count along x (the padded canvas width).
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Size of the image the spectrum was computed from.
    pub fn image_size(&self) -> (usize, usize) {
        (self.image_width, self.image_height)
    }

    /// Row-major bins, `ky` major, centered.
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    /// Bin at signed frequency `(kx, ky)`, wrapping periodically.
    pub fn bin(&self, kx: isize, ky: isize) -> Complex64 {
        let (w, h) = (self.width as isize, self.height as isize);
        let ix = (kx + w / 2).rem_euclid(w) as usize;
        let iy = (ky + h / 2).rem_euclid(h) as usize;
        self.bins[iy * self.width + ix]
    }

    /// The zero-frequency bin, equal to the pixel sum.
    pub fn dc(&self) -> Complex64 {
        self.bin(0, 0)
    }
}

/// Forward 2D DFT of `img`, zero-padded so each side becomes
/// `pad_factor` times its next power of two.
pub fn dft2(img: &GrayImage, pad_factor: usize) -> Result<ComplexSpectrum2D> {
    dft2_from_fn(img.width(), img.height(), pad_factor, |x, y| img.y_up(x, y))
}

/// [`dft2`] of an arbitrary real field given as `f(x, y)` in the y-up frame.
pub(crate) fn dft2_from_fn(
    w: usize,
    h: usize,
    pad_factor: usize,
    f: impl Fn(usize, usize) -> f64,
) -> Result<ComplexSpectrum2D> {
    let cw = canvas_len(w, pad_factor)?;
    let ch = canvas_len(h, pad_factor)?;
    let mut canvas = vec![Complex64::new(0.0, 0.0); cw * ch];
    // the center pixel lands on canvas (0, 0) so phases are measured from it
    for y in 0..h {
        let cy = (y + ch - h / 2) % ch;
        for x in 0..w {
            let cx = (x + cw - w / 2) % cw;
            canvas[cy * cw + cx] = Complex64::new(f(x, y), 0.0);
        }
    }
    for row in canvas.chunks_exact_mut(cw) {
        fft_in_place(row, false);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); ch];
    for x in 0..cw {
        for (y, c) in column.iter_mut().enumerate() {
            *c = canvas[y * cw + x];
        }
        fft_in_place(&mut column, false);
        for (y, c) in column.iter().enumerate() {
            canvas[y * cw + x] = *c;
        }
    }
    let mut bins = vec![Complex64::new(0.0, 0.0); cw * ch];
    for y in 0..ch {
        let sy = (y + ch / 2) % ch;
        for x in 0..cw {
            let sx = (x + cw / 2) % cw;
            bins[sy * cw + sx] = canvas[y * cw + x];
        }
    }
    Ok(ComplexSpectrum2D {
        width: cw,
        height: ch,
        bins,
        image_width: w,
        image_height: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft2(img: &GrayImage, kx: isize, ky: isize) -> Complex64 {
        let (w, h) = (img.width(), img.height());
        let mut acc = Complex64::new(0.0, 0.0);
        for y in 0..h {
            for x in 0..w {
                let dx = x as f64 - (w / 2) as f64;
                let dy = y as f64 - (h / 2) as f64;
                let phase = -2.0
                    * std::f64::consts::PI
                    * (kx as f64 * dx / w as f64 + ky as f64 * dy / h as f64);
                acc += Complex64::from_polar(img.y_up(x, y), phase);
            }
        }
        acc
    }

    #[test]
    fn shifts_round_trip() {
        let v: Vec<i32> = (0..7).collect();
        assert_eq!(ifftshift(&fftshift(&v)), v);
        assert_eq!(fftshift(&[0, 1, 2, 3]), vec![2, 3, 0, 1]);
    }

    #[test]
    fn constant_image() {
        let img = GrayImage::filled(8, 8, 0.25).unwrap();
        let s = dft2(&img, 1).unwrap();
        assert!((s.dc().re - 0.25 * 64.0).abs() < 1e-9);
        let others = s
            .bins()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 4 * 8 + 4)
            .map(|(_, b)| b.norm())
            .fold(0.0, f64::max);
        assert!(others < 1e-9);
    }

    #[test]
    fn delta_has_flat_magnitude() {
        let mut px = vec![0.0; 16];
        px[0] = 1.0;
        let img = GrayImage::new(4, 4, px).unwrap();
        let s = dft2(&img, 1).unwrap();
        assert!(s.bins().iter().all(|b| (b.norm() - 1.0).abs() < 1e-9));
    }

    #[test]
    fn two_by_two_dc_is_sum() {
        let img = GrayImage::new(2, 2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let s = dft2(&img, 1).unwrap();
        assert!((s.dc().re - 1.0).abs() < 1e-12);
        assert!(s.dc().im.abs() < 1e-12);
    }

    #[test]
    fn matches_naive_definition() {
        let img = GrayImage::from_fn(8, 8, |x, r| ((x * 5 + r * 3) % 7) as f64 / 7.0).unwrap();
        let s = dft2(&img, 1).unwrap();
        for ky in -4..4 {
            for kx in -4..4 {
                assert!((s.bin(kx, ky) - naive_dft2(&img, kx, ky)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn padding_sizes() {
        let img = GrayImage::filled(20, 12, 0.5).unwrap();
        let s = dft2(&img, 2).unwrap();
        assert_eq!((s.width(), s.height()), (64, 32));
        assert_eq!(s.image_size(), (20, 12));
        assert!((s.dc().re - 120.0).abs() < 1e-9);
    }

    #[test]
    fn hermitian_for_real_input() {
        let img = GrayImage::from_fn(8, 8, |x, r| ((x * 3 + r * r) % 5) as f64 / 5.0).unwrap();
        let s = dft2(&img, 2).unwrap();
        for ky in -7..8 {
            for kx in -7..8 {
                assert!((s.bin(kx, ky) - s.bin(-kx, -ky).conj()).norm() < 1e-9);
            }
        }
    }
}
