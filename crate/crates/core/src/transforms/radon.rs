use super::{check_angle, direction};
use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Brute-force projection: every pixel adds its intensity to the bin nearest
/// its signed distance from the line through the center pixel.
///
/// Bin `b` collects distances `R` with `b - num_bins/2 - 0.5 <= R < b - num_bins/2 + 0.5`;
/// pixels falling outside `0..num_bins` are dropped. At 0 degrees with
/// `num_bins == width` the bins are exactly the column sums.
pub fn radon_direct(img: &GrayImage, angle: f64, num_bins: usize) -> Result<Vec<f64>> {
    check_angle(angle)?;
    if num_bins == 0 {
        return Err(Error::InvalidParameter(
            "num_bins must be at least 1".into(),
        ));
    }
    let (w, h) = (img.width(), img.height());
    let (c, s) = direction(angle);
    let (cx, cy) = ((w / 2) as f64, (h / 2) as f64);
    let shift = (num_bins / 2) as f64 + 0.5;
    let mut bins = vec![0.0; num_bins];
    for y in 0..h {
        let ry = (y as f64 - cy) * s;
        for x in 0..w {
            let r = (x as f64 - cx) * c + ry;
            let b = (r + shift).floor();
            if b >= 0.0 && (b as usize) < num_bins {
                bins[b as usize] += img.y_up(x, y);
            }
        }
    }
    Ok(bins)
}

/// [`radon_direct`] at each of `angles`.
pub fn sinogram_direct(img: &GrayImage, angles: &[f64], num_bins: usize) -> Result<Vec<Vec<f64>>> {
    angles
        .iter()
        .map(|&a| radon_direct(img, a, num_bins))
        .collect()
}
