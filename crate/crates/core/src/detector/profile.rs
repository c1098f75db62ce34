use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::image::GrayImage;
use crate::transforms::{
    center_pixel_offset, dct2_from_fn, dft2_from_fn, extract_slice, half_extent, inverse_slice,
    radon_direct, ramp_filter, Backend, Interpolation, SpectrumSlice, DEFAULT_PAD_FACTOR,
};

/// How a profile was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileBackend {
    Dft,
    Dct,
    Direct,
}

impl From<Backend> for ProfileBackend {
    fn from(b: Backend) -> Self {
        match b {
            Backend::Dft => ProfileBackend::Dft,
            Backend::Dct => ProfileBackend::Dct,
        }
    }
}

/// Projected intensity mass as a function of signed distance from the
/// image center. Sample `i` lies at distance `i - origin` pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionProfile {
    pub values: Vec<f64>,
    pub angle: f64,
    pub backend: ProfileBackend,
    pub filtered: bool,
    pub normalized: bool,
    /// Fractional index of distance zero.
    pub origin: f64,
    /// Largest distance at which the image still casts a shadow.
    pub half_extent: f64,
}

impl ProjectionProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Signed distance of sample `i` from the image center, pixels.
    pub fn distance(&self, i: usize) -> f64 {
        i as f64 - self.origin
    }

    /// `index,value` CSV with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{i},{v}");
        }
        out
    }
}

/// Knobs of the spectral projection that rarely need changing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectOptions {
    pub pad_factor: usize,
    pub interpolation: Interpolation,
}

impl Default for ProjectOptions {
    fn default() -> Self {
        Self {
            pad_factor: DEFAULT_PAD_FACTOR,
            interpolation: Interpolation::Bilinear,
        }
    }
}

/// Projection at `angle` through a central slice of the image spectrum,
/// zero-padded by 2 and sampled bilinearly. Not normalized.
pub fn project_cst(
    img: &GrayImage,
    angle: f64,
    backend: Backend,
    apply_ramp: bool,
) -> Result<ProjectionProfile> {
    project_cst_with(img, angle, backend, apply_ramp, &ProjectOptions::default())
}

pub fn project_cst_with(
    img: &GrayImage,
    angle: f64,
    backend: Backend,
    apply_ramp: bool,
    opts: &ProjectOptions,
) -> Result<ProjectionProfile> {
    project_field(
        img.width(),
        img.height(),
        |x, y| img.y_up(x, y),
        angle,
        backend,
        apply_ramp,
        opts,
    )
}

/// [`project_cst_with`] for any real field `f(x, y)` (y-up), not only
/// images; the detector projects mean-subtracted fields through this.
pub(crate) fn project_field(
    w: usize,
    h: usize,
    f: impl Fn(usize, usize) -> f64,
    angle: f64,
    backend: Backend,
    apply_ramp: bool,
    opts: &ProjectOptions,
) -> Result<ProjectionProfile> {
    crate::transforms::check_angle(angle)?;
    let slice = match backend {
        Backend::Dft => extract_slice(
            &dft2_from_fn(w, h, opts.pad_factor, f)?,
            angle,
            opts.interpolation,
        )?,
        Backend::Dct => extract_slice(
            &dct2_from_fn(w, h, opts.pad_factor, f)?,
            angle,
            opts.interpolation,
        )?,
    };
    Ok(profile_from_slice(&slice, apply_ramp))
}

/// Inverts a slice (optionally ramp-filtered first) into a profile.
pub fn profile_from_slice(slice: &SpectrumSlice, apply_ramp: bool) -> ProjectionProfile {
    let values = if apply_ramp {
        inverse_slice(&ramp_filter(slice)).values
    } else {
        inverse_slice(slice).values
    };
    let g = slice.geometry;
    ProjectionProfile {
        values,
        angle: slice.angle,
        backend: slice.backend.into(),
        filtered: apply_ramp,
        normalized: false,
        origin: slice.origin(),
        half_extent: half_extent(g.image_width, g.image_height, slice.angle),
    }
}

/// [`radon_direct`] wrapped as a profile.
pub fn project_direct(img: &GrayImage, angle: f64, num_bins: usize) -> Result<ProjectionProfile> {
    let values = radon_direct(img, angle, num_bins)?;
    Ok(ProjectionProfile {
        values,
        angle,
        backend: ProfileBackend::Direct,
        filtered: false,
        normalized: false,
        origin: (num_bins / 2) as f64 - center_pixel_offset(img.width(), img.height(), angle),
        half_extent: half_extent(img.width(), img.height(), angle),
    })
}

/// Min-max rescale to `[0, 1]`. A profile whose spread is negligible next to
/// its magnitude (or empty) becomes all 0.5.
pub fn normalize_profile(p: &ProjectionProfile) -> ProjectionProfile {
    let lo = p.values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = p.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = hi - lo;
    let scale = lo.abs().max(hi.abs());
    let values = if !(spread > 1e-12 * scale) || spread == 0.0 {
        vec![0.5; p.values.len()]
    } else {
        p.values.iter().map(|v| (v - lo) / spread).collect()
    };
    ProjectionProfile {
        values,
        normalized: true,
        ..p.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(values: Vec<f64>) -> ProjectionProfile {
        ProjectionProfile {
            values,
            angle: 0.0,
            backend: ProfileBackend::Direct,
            filtered: false,
            normalized: false,
            origin: 0.0,
            half_extent: 1.0,
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(
            normalize_profile(&raw(vec![2.0, 4.0, 6.0])).values,
            vec![0.0, 0.5, 1.0]
        );
        assert_eq!(normalize_profile(&raw(vec![5.0; 3])).values, vec![0.5; 3]);
        assert_eq!(normalize_profile(&raw(vec![0.0; 3])).values, vec![0.5; 3]);
        let once = normalize_profile(&raw(vec![3.0, -1.0, 0.25, 7.0]));
        assert!(once.normalized);
        assert_eq!(normalize_profile(&once), once);
    }

    #[test]
    fn rounding_noise_counts_as_constant() {
        let p = raw(vec![100.0, 100.0 + 1e-13, 100.0]);
        assert_eq!(normalize_profile(&p).values, vec![0.5; 3]);
    }

    #[test]
    fn uniform_matches_direct_column_sums() {
        let img = GrayImage::filled(12, 12, 0.4).unwrap();
        let direct = radon_direct(&img, 0.0, 12).unwrap();
        for backend in [Backend::Dft, Backend::Dct] {
            let p = project_cst(&img, 0.0, backend, false).unwrap();
            // column x sits at distance x + 0.5 - 6 from the center
            for (x, d) in direct.iter().enumerate() {
                let i = p.origin + x as f64 + 0.5 - 6.0;
                assert_eq!(i.fract(), 0.0);
                assert!((p.values[i as usize] - d).abs() < 1e-6, "{backend}");
            }
        }
    }

    #[test]
    fn direct_origin_tracks_center() {
        let img = GrayImage::filled(8, 8, 1.0).unwrap();
        let p = project_direct(&img, 0.0, 8).unwrap();
        assert_eq!(p.origin, 3.5);
        assert_eq!(p.half_extent, 4.0);
    }

    #[test]
    fn csv_has_header() {
        assert_eq!(raw(vec![0.5, 1.0]).to_csv(), "index,value\n0,0.5\n1,1\n");
    }
}
