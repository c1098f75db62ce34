use serde::{Deserialize, Serialize};

use super::extrema::{find_extrema, Extremum, ExtremumKind};
use super::hough::{locate_circle, Circle};
use super::profile::{normalize_profile, project_field, ProjectOptions, ProjectionProfile};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::transforms::{Backend, Interpolation, DEFAULT_PAD_FACTOR};

/// Smallest image side the detector accepts.
pub const MIN_SIDE: usize = 8;

/// Frames at least this large get rim localization in [`CropMode::Auto`].
pub const AUTO_HOUGH_SIDE: usize = 48;

/// Region of the frame the 45 degree projection looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CropMode {
    /// The whole frame.
    None,
    /// A centered disk; everything outside it is flattened to the disk mean.
    Inscribed,
    /// Locate the sign rim, crop to it, then mask a disk inside it. Falls
    /// back to `Inscribed` when no rim is found.
    Hough,
    /// `Hough` for frames of side 48 and up, `Inscribed` for smaller
    /// (pre-cropped) ones.
    #[default]
    Auto,
}

/// Every knob of [`detect_end_of_restriction`] in one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorSettings {
    /// Prominence a right-side minimum needs on the normalized profile.
    pub min_prominence: f64,
    pub backend: Backend,
    pub apply_ramp: bool,
    /// Share of the profile, counted from its positive end, searched for the
    /// characteristic minimum. 0.5 is exactly the positive half.
    pub right_fraction: f64,
    pub crop: CropMode,
    /// Disk radius as a fraction of the half side of the (cropped) frame.
    pub mask_fraction: f64,
    /// Energy of the projection relative to what uncorrelated pixels of the
    /// same variance would give. Noise sits near 1; stripes parallel to the
    /// projection lines push it far higher.
    pub min_coherence: f64,
    /// Projection direction, degrees.
    pub angle: f64,
    pub pad_factor: usize,
}

impl Default for DetectorSettings {
    fn default() -> Self {
        Self {
            min_prominence: 0.15,
            backend: Backend::Dct,
            apply_ramp: true,
            right_fraction: 0.5,
            crop: CropMode::Auto,
            mask_fraction: 0.7,
            min_coherence: 3.0,
            angle: 45.0,
            pad_factor: DEFAULT_PAD_FACTOR,
        }
    }
}

impl DetectorSettings {
    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.min_prominence > 0.0 && self.min_prominence <= 1.0) {
            return bad(format!(
                "min_prominence {} not in (0, 1]",
                self.min_prominence
            ));
        }
        if !(self.right_fraction > 0.0 && self.right_fraction <= 1.0) {
            return bad(format!(
                "right_fraction {} not in (0, 1]",
                self.right_fraction
            ));
        }
        if !(self.min_coherence >= 0.0) {
            return bad(format!(
                "min_coherence {} must be non-negative",
                self.min_coherence
            ));
        }
        if !(self.mask_fraction > 0.0 && self.mask_fraction <= 1.0) {
            return bad(format!(
                "mask_fraction {} not in (0, 1]",
                self.mask_fraction
            ));
        }
        Ok(())
    }
}

/// Verdict plus the evidence behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub positive: bool,
    /// The normalized profile the decision was taken on.
    pub profile: ProjectionProfile,
    /// Minima of that profile at or above the prominence threshold.
    pub minima: Vec<Extremum>,
    pub circle: Option<Circle>,
    /// Largest prominence among minima in the right-hand tail, 0 if none
    /// or if the coherence gate failed.
    pub decision_score: f64,
    /// See [`DetectorSettings::min_coherence`].
    pub coherence: f64,
    pub backend: Backend,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimumSummary {
    pub index: usize,
    pub prominence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSummary {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

/// The JSON shape of a [`DetectionResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionSummary {
    pub positive: bool,
    pub score: f64,
    pub minima: Vec<MinimumSummary>,
    pub circle: Option<CircleSummary>,
    pub backend: Backend,
}

impl DetectionResult {
    pub fn summary(&self) -> DetectionSummary {
        DetectionSummary {
            positive: self.positive,
            score: self.decision_score,
            minima: self
                .minima
                .iter()
                .map(|m| MinimumSummary {
                    index: m.index,
                    prominence: m.prominence,
                })
                .collect(),
            circle: self.circle.map(|c| CircleSummary {
                cx: c.cx,
                cy: c.cy,
                r: c.radius,
            }),
            backend: self.backend,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.summary()).expect("summary serializes")
    }
}

/// Radii searched for the sign rim: from a fifth to half the short side.
fn radius_range(img: &GrayImage) -> (usize, usize) {
    let side = img.width().min(img.height());
    ((side / 5).max(3).min(side / 2), side / 2)
}

/// Square window centered on the circle, one pixel wider than its rim.
fn crop_to(img: &GrayImage, c: &Circle) -> Result<GrayImage> {
    let half = c.radius.ceil() as isize + 1;
    let side = (2 * half + 1) as usize;
    img.crop_clamped(c.cx as isize - half, c.cy as isize - half, side, side)
}

/// Is `(x, row)` inside the disk of `radius` around the frame center?
fn in_disk(w: usize, h: usize, radius: f64, x: usize, row: usize) -> bool {
    let dx = x as f64 + 0.5 - w as f64 / 2.0;
    let dy = row as f64 + 0.5 - h as f64 / 2.0;
    dx.hypot(dy) < radius
}

/// Projects the content of the central disk (or of the whole frame when
/// `disk` is false) minus its mean, so that only structure inside the sign
/// contributes and any affine brightness change cancels after
/// normalization. Also returns the coherence of the unfiltered projection.
fn masked_profile(
    img: &GrayImage,
    disk: bool,
    s: &DetectorSettings,
    opts: &ProjectOptions,
) -> Result<(ProjectionProfile, f64)> {
    let (w, h) = (img.width(), img.height());
    let radius = s.mask_fraction * w.min(h) as f64 / 2.0;
    let inside: Vec<bool> = (0..h)
        .flat_map(|row| (0..w).map(move |x| !disk || in_disk(w, h, radius, x, row)))
        .collect();
    let values: Vec<f64> = img
        .pixels()
        .iter()
        .zip(&inside)
        .filter(|(_, &m)| m)
        .map(|(v, _)| *v)
        .collect();
    let n = values.len().max(1) as f64;
    let fill = values.iter().sum::<f64>() / n;
    let energy: f64 = values.iter().map(|v| (v - fill).powi(2)).sum();
    // a flat disk has no structure; keep rounding dust out of the profile
    let flat = values.iter().all(|v| (v - fill).abs() <= 1e-9);
    let field = |x: usize, y: usize| {
        let row = h - 1 - y;
        if flat || !inside[row * w + x] {
            0.0
        } else {
            img.get(x, row) - fill
        }
    };
    let profile = project_field(w, h, field, s.angle, s.backend, s.apply_ramp, opts)?;
    let coherence = if flat {
        0.0
    } else {
        let plain = if s.apply_ramp {
            project_field(w, h, field, s.angle, s.backend, false, opts)?
        } else {
            profile.clone()
        };
        plain.values.iter().map(|v| v * v).sum::<f64>() / energy
    };
    Ok((profile, coherence))
}

/// Decides whether `img` shows a round sign crossed by stripes along the
/// settings' angle (45 degrees by default).
///
/// Pipeline: optional rim localization and crop, projection through a
/// central spectral slice, min-max normalization, then a search for a
/// prominent minimum in the positive-distance tail of the profile.
pub fn detect_end_of_restriction(img: &GrayImage, s: &DetectorSettings) -> Result<DetectionResult> {
    if img.width() < MIN_SIDE || img.height() < MIN_SIDE {
        return Err(Error::ImageTooSmall {
            width: img.width(),
            height: img.height(),
            min: MIN_SIDE,
        });
    }
    s.validate()?;
    let opts = ProjectOptions {
        pad_factor: s.pad_factor,
        interpolation: Interpolation::Bilinear,
    };

    let crop = match s.crop {
        CropMode::Auto if img.width().min(img.height()) >= AUTO_HOUGH_SIDE => CropMode::Hough,
        CropMode::Auto => CropMode::Inscribed,
        c => c,
    };
    let mut circle = None;
    let (raw, coherence) = match crop {
        CropMode::None => masked_profile(img, false, s, &opts)?,
        CropMode::Hough => {
            let (r_min, r_max) = radius_range(img);
            circle = locate_circle(img, r_min, r_max)?;
            match &circle {
                Some(c) => masked_profile(&crop_to(img, c)?, true, s, &opts)?,
                None => masked_profile(img, true, s, &opts)?,
            }
        }
        _ => masked_profile(img, true, s, &opts)?,
    };
    let profile = normalize_profile(&raw);
    let minima: Vec<Extremum> = find_extrema(&profile, s.min_prominence)?
        .into_iter()
        .filter(|e| e.kind == ExtremumKind::Min)
        .collect();

    let e = profile.half_extent;
    let lo = (1.0 - 2.0 * s.right_fraction) * e;
    let decision_score = if coherence < s.min_coherence {
        0.0
    } else {
        minima
            .iter()
            .filter(|m| {
                let r = profile.distance(m.index);
                r >= lo && r <= e
            })
            .map(|m| m.prominence)
            .fold(0.0, f64::max)
    };
    Ok(DetectionResult {
        positive: decision_score > 0.0,
        profile,
        minima,
        circle,
        decision_score,
        coherence,
        backend: s.backend,
    })
}
