//! Grayscale rasters, PGM I/O, synthetic sign rendering and degradations.
//!
//! Pixel `(0, 0)` is the top-left corner and rows run downwards, the usual
//! raster convention. Everything that reasons about angles (stripes,
//! projections, spectra) works in a y-up frame instead; the flip happens in
//! exactly one place, [`GrayImage::y_up`], which the transforms call when
//! they read an image.

mod degrade;
mod pgm;
mod synth;

pub use degrade::{degrade, Degradation};
pub use pgm::{load_pgm, read_pgm, save_pgm, write_pgm};
pub use synth::{render, synth_sign, Shape, SignSpec};

use crate::error::{Error, Result};

/// A normalized grayscale raster. Intensities live in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    /// Builds an image from row-major intensities, top row first.
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        if let Some((i, v)) = pixels
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::InvalidImage(format!(
                "pixel {i} has intensity {v}, outside [0, 1]"
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// A uniform image. `value` is clamped into `[0, 1]`.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value.clamp(0.0, 1.0); width * height])
    }

    /// Builds an image by evaluating `f(x, row)` for every pixel; results are
    /// clamped into `[0, 1]`.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for x in 0..width {
                pixels.push(f(x, row).clamp(0.0, 1.0));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    /// Intensity at column `x`, row `row` (top-left origin).
    #[inline]
    pub fn get(&self, x: usize, row: usize) -> f64 {
        self.pixels[row * self.width + x]
    }

    /// Intensity with coordinates clamped to the image border.
    #[inline]
    pub fn get_clamped(&self, x: isize, row: isize) -> f64 {
        let x = x.clamp(0, self.width as isize - 1) as usize;
        let row = row.clamp(0, self.height as isize - 1) as usize;
        self.get(x, row)
    }

    /// Intensity at column `x` and height `y` above the bottom row.
    #[inline]
    pub fn y_up(&self, x: usize, y: usize) -> f64 {
        self.get(x, self.height - 1 - y)
    }

    pub fn sum(&self) -> f64 {
        self.pixels.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.pixels.len() as f64
    }

    /// Applies `a * v + b` to every pixel. Fails if any result leaves `[0, 1]`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Self::new(
            self.width,
            self.height,
            self.pixels.iter().map(|v| a * v + b).collect(),
        )
    }

    /// Copies the `width x height` window whose top-left pixel is
    /// `(x0, row0)`. Pixels outside the source replicate the nearest edge.
    pub fn crop_clamped(
        &self,
        x0: isize,
        row0: isize,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        Self::from_fn(width, height, |x, row| {
            self.get_clamped(x0 + x as isize, row0 + row as isize)
        })
    }
}
