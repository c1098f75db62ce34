//! Spectral machinery and the direct projection oracle.
//!
//! Conventions shared by everything in here:
//!
//! * Images are read in a y-up frame (see [`GrayImage::y_up`]). An angle
//!   `phi` names the direction `(cos phi, sin phi)` in that frame.
//! * A projection at `phi` integrates along lines perpendicular to that
//!   direction; its abscissa is the signed distance `R` along it.
//! * The forward DFT is unnormalized and its inverse carries `1 / N`. The
//!   spectrum is stored centered: bin `(kx, ky)` with `kx, ky` in
//!   `[-N/2, N/2)` sits at `(kx + N/2, ky + N/2)`. The phase origin is the
//!   center pixel `(w/2, h/2)` (integer division), so the bin at the origin
//!   is the pixel sum and axis-aligned slices are exact column/row sums.
//! * The DCT is the orthonormal DCT-II, inverted by the matching DCT-III.
//!   Coefficient `(0, 0)` sits at the low-frequency corner.
//!
//! [`GrayImage::y_up`]: crate::image::GrayImage::y_up

mod dct;
mod fft;
mod radon;
mod slice;

pub(crate) use dct::dct2_from_fn;
pub use dct::{dct2, dct_ii, dct_iii, DctSpectrum2D};
pub(crate) use fft::dft2_from_fn;
pub use fft::{dft2, ComplexSpectrum2D};
pub use radon::{radon_direct, sinogram_direct};
pub use slice::{
    extract_slice, inverse_slice, ramp_filter, Backend, Interpolation, SliceGeometry, SliceInverse,
    SliceSource, SliceValues, SpectrumSlice,
};

pub use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};

/// Zero-padding factor used when a caller does not choose one.
pub const DEFAULT_PAD_FACTOR: usize = 2;

pub(crate) fn check_angle(angle: f64) -> Result<()> {
    if (0.0..180.0).contains(&angle) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange(angle))
    }
}

/// `(cos, sin)` of an angle in degrees, exact at multiples of 90.
pub(crate) fn direction(angle: f64) -> (f64, f64) {
    if angle.rem_euclid(90.0) == 0.0 {
        match (angle.rem_euclid(360.0) / 90.0) as u8 {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        let (s, c) = angle.to_radians().sin_cos();
        (c, s)
    }
}

pub(crate) fn canvas_len(len: usize, pad_factor: usize) -> Result<usize> {
    if pad_factor == 0 {
        return Err(Error::InvalidParameter(
            "pad_factor must be at least 1".into(),
        ));
    }
    Ok(pad_factor * len.next_power_of_two())
}

/// Half the length of the image's shadow on the `angle` axis, pixels.
pub fn half_extent(width: usize, height: usize, angle: f64) -> f64 {
    let (c, s) = direction(angle);
    0.5 * (width as f64 * c.abs() + height as f64 * s.abs())
}

/// Signed distance of the center pixel from the geometric image center,
/// measured along `angle`. Zero for odd dimensions.
pub fn center_pixel_offset(width: usize, height: usize, angle: f64) -> f64 {
    let (c, s) = direction(angle);
    let dx = (width / 2) as f64 + 0.5 - width as f64 / 2.0;
    let dy = (height / 2) as f64 + 0.5 - height as f64 / 2.0;
    dx * c + dy * s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_axis_directions() {
        assert_eq!(direction(0.0), (1.0, 0.0));
        assert_eq!(direction(90.0), (0.0, 1.0));
        let (c, s) = direction(45.0);
        assert!((c - s).abs() < 1e-15);
    }

    #[test]
    fn angle_range() {
        assert!(check_angle(0.0).is_ok());
        assert!(check_angle(179.9).is_ok());
        assert!(check_angle(180.0).is_err());
        assert!(check_angle(-1.0).is_err());
        assert!(check_angle(f64::NAN).is_err());
    }

    #[test]
    fn extents() {
        assert_eq!(half_extent(20, 10, 0.0), 10.0);
        assert_eq!(half_extent(20, 10, 90.0), 5.0);
        assert!((half_extent(20, 20, 45.0) - 20.0 * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(center_pixel_offset(4, 4, 0.0), 0.5);
        assert_eq!(center_pixel_offset(5, 5, 30.0), 0.0);
    }
}
