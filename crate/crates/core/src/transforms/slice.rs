use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{fft_in_place, fftshift, ifftshift};
use super::{
    center_pixel_offset, check_angle, dct_iii, direction, ComplexSpectrum2D, DctSpectrum2D,
};
use crate::error::{Error, Result};

/// Which spectral transform a slice (and the profile built from it) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dft,
    #[default]
    Dct,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Dft => "dft",
            Backend::Dct => "dct",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dft" | "fft" => Ok(Backend::Dft),
            "dct" => Ok(Backend::Dct),
            _ => Err(Error::InvalidParameter(format!("unknown backend {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interpolation {
    Nearest,
    #[default]
    Bilinear,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SliceValues {
    Complex(Vec<Complex64>),
    Real(Vec<f64>),
}

impl SliceValues {
    pub fn len(&self) -> usize {
        match self {
            SliceValues::Complex(v) => v.len(),
            SliceValues::Real(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Sizes of the spectrum a slice came from and of the original image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SliceGeometry {
    pub canvas_width: usize,
    pub canvas_height: usize,
    pub image_width: usize,
    pub image_height: usize,
}

/// One line of samples through the spectral origin.
///
/// DFT slices hold `L` complex samples at signed frequencies
/// `k = i - L/2`, so the origin is the middle sample. DCT slices hold `L`
/// real samples at `k = i` running outward from the corner; the implied even
/// reflection about the corner is what makes the DCT-III their inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub angle: f64,
    pub backend: Backend,
    pub values: SliceValues,
    /// Cycles per slice length advanced by one sample.
    pub sample_spacing: f64,
    pub geometry: SliceGeometry,
}

impl SpectrumSlice {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the spectral origin (the DC sample).
    pub fn dc_index(&self) -> usize {
        match self.backend {
            Backend::Dft => self.len() / 2,
            Backend::Dct => 0,
        }
    }

    /// Fractional index in the [`inverse_slice`] output where the line
    /// through the geometric image center falls. Samples are one pixel apart
    /// and the signed distance grows with the index.
    pub fn origin(&self) -> f64 {
        let g = &self.geometry;
        match self.backend {
            Backend::Dft => {
                (self.len() / 2) as f64
                    - center_pixel_offset(g.image_width, g.image_height, self.angle)
            }
            Backend::Dct => {
                // DCT-III sample n sits at n + 0.5 from the canvas corner
                let (c, s) = direction(self.angle);
                0.5 * (g.image_width as f64 * c.abs() + g.image_height as f64 * s) - 0.5
            }
        }
    }

    /// CSV dump, `index,re,im` for DFT slices and `index,value` for DCT.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.values {
            SliceValues::Complex(v) => {
                out.push_str("index,re,im\n");
                for (i, z) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i},{},{}", z.re, z.im);
                }
            }
            SliceValues::Real(v) => {
                out.push_str("index,value\n");
                for (i, x) in v.iter().enumerate() {
                    let _ = writeln!(out, "{i},{x}");
                }
            }
        }
        out
    }
}

/// A spectrum that central slices can be cut from.
pub trait SliceSource {
    fn slice(&self, angle: f64, interp: Interpolation) -> Result<SpectrumSlice>;
}

/// Samples `spec` along the line through its origin in direction `angle`.
pub fn extract_slice<S: SliceSource + ?Sized>(
    spec: &S,
    angle: f64,
    interp: Interpolation,
) -> Result<SpectrumSlice> {
    spec.slice(angle, interp)
}

impl SliceSource for ComplexSpectrum2D {
    fn slice(&self, angle: f64, interp: Interpolation) -> Result<SpectrumSlice> {
        check_angle(angle)?;
        let (cw, ch) = (self.width(), self.height());
        let len = cw.max(ch);
        let (c, s) = direction(angle);
        let (sx, sy) = (c * cw as f64 / len as f64, s * ch as f64 / len as f64);
        let values = (0..len)
            .map(|i| {
                let k = i as f64 - (len / 2) as f64;
                let (fx, fy) = (k * sx, k * sy);
                match interp {
                    Interpolation::Nearest => self.bin(fx.round() as isize, fy.round() as isize),
                    Interpolation::Bilinear => {
                        let (x0, y0) = (fx.floor(), fy.floor());
                        let (tx, ty) = (fx - x0, fy - y0);
                        let (x0, y0) = (x0 as isize, y0 as isize);
                        self.bin(x0, y0) * ((1.0 - tx) * (1.0 - ty))
                            + self.bin(x0 + 1, y0) * (tx * (1.0 - ty))
                            + self.bin(x0, y0 + 1) * ((1.0 - tx) * ty)
                            + self.bin(x0 + 1, y0 + 1) * (tx * ty)
                    }
                }
            })
            .collect();
        let (iw, ih) = self.image_size();
        Ok(SpectrumSlice {
            angle,
            backend: Backend::Dft,
            values: SliceValues::Complex(values),
            sample_spacing: 1.0,
            geometry: SliceGeometry {
                canvas_width: cw,
                canvas_height: ch,
                image_width: iw,
                image_height: ih,
            },
        })
    }
}

impl SliceSource for DctSpectrum2D {
    fn slice(&self, angle: f64, interp: Interpolation) -> Result<SpectrumSlice> {
        check_angle(angle)?;
        let (cw, ch) = (self.width(), self.height());
        let len = cw.max(ch);
        let (c, s) = direction(angle);
        // directions past 90 degrees read the mirrored quadrant; the DCT is
        // even in each axis
        let (sx, sy) = (c.abs() * cw as f64 / len as f64, s * ch as f64 / len as f64);
        // makes the length-`len` DCT-III of the slice the projection itself
        let gain = (cw as f64 * ch as f64 / len as f64).sqrt();
        let at = |x: isize, y: isize| -> f64 {
            if x < 0 || y < 0 || x as usize >= cw || y as usize >= ch {
                0.0
            } else {
                self.coeff(x as usize, y as usize)
            }
        };
        let values = (0..len)
            .map(|k| {
                let (fx, fy) = (k as f64 * sx, k as f64 * sy);
                let v = match interp {
                    Interpolation::Nearest => at(fx.round() as isize, fy.round() as isize),
                    Interpolation::Bilinear => {
                        let (x0, y0) = (fx.floor(), fy.floor());
                        let (tx, ty) = (fx - x0, fy - y0);
                        let (x0, y0) = (x0 as isize, y0 as isize);
                        at(x0, y0) * (1.0 - tx) * (1.0 - ty)
                            + at(x0 + 1, y0) * tx * (1.0 - ty)
                            + at(x0, y0 + 1) * (1.0 - tx) * ty
                            + at(x0 + 1, y0 + 1) * tx * ty
                    }
                };
                v * gain
            })
            .collect();
        let (iw, ih) = self.image_size();
        Ok(SpectrumSlice {
            angle,
            backend: Backend::Dct,
            values: SliceValues::Real(values),
            sample_spacing: 0.5,
            geometry: SliceGeometry {
                canvas_width: cw,
                canvas_height: ch,
                image_width: iw,
                image_height: ih,
            },
        })
    }
}

/// Multiplies every sample by its absolute frequency, scaled so the largest
/// weight is 1. The DC sample becomes exactly zero.
pub fn ramp_filter(slice: &SpectrumSlice) -> SpectrumSlice {
    let len = slice.len();
    let mut out = slice.clone();
    match &mut out.values {
        SliceValues::Complex(v) => {
            let half = (len / 2) as f64;
            for (i, z) in v.iter_mut().enumerate() {
                let k = (i as f64 - half).abs();
                *z = if k == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    *z * (k / half)
                };
            }
        }
        SliceValues::Real(v) => {
            let top = len.saturating_sub(1).max(1) as f64;
            for (i, x) in v.iter_mut().enumerate() {
                *x = if i == 0 { 0.0 } else { *x * (i as f64 / top) };
            }
        }
    }
    out
}

/// Spatial samples recovered from a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceInverse {
    pub values: Vec<f64>,
    /// Largest discarded imaginary part (DFT backend); 0 for DCT.
    pub max_imaginary: f64,
}

/// 1D inverse transform of a slice: inverse DFT with `1 / L` for DFT slices
/// (output reordered so the center pixel lands at index `L / 2`), DCT-III for
/// DCT slices.
pub fn inverse_slice(slice: &SpectrumSlice) -> SliceInverse {
    match &slice.values {
        SliceValues::Complex(v) => {
            if v.is_empty() {
                return SliceInverse {
                    values: Vec::new(),
                    max_imaginary: 0.0,
                };
            }
            let mut buf = ifftshift(v);
            fft_in_place(&mut buf, true);
            let n = buf.len() as f64;
            let buf = fftshift(&buf);
            SliceInverse {
                values: buf.iter().map(|z| z.re / n).collect(),
                max_imaginary: buf.iter().map(|z| (z.im / n).abs()).fold(0.0, f64::max),
            }
        }
        SliceValues::Real(v) => SliceInverse {
            values: dct_iii(v),
            max_imaginary: 0.0,
        },
    }
}
