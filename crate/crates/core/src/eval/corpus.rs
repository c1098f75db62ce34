use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{
    degrade, render, synth_sign, write_pgm, Degradation, GrayImage, Shape, SignSpec,
};

/// Classes of the synthetic corpus. Only `EndRestriction` is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    EndRestriction,
    SpeedLimit,
    OtherNegative,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 3] = [
        ClassLabel::EndRestriction,
        ClassLabel::SpeedLimit,
        ClassLabel::OtherNegative,
    ];

    pub fn is_positive(self) -> bool {
        self == ClassLabel::EndRestriction
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::EndRestriction => "end_restriction",
            ClassLabel::SpeedLimit => "speed_limit",
            ClassLabel::OtherNegative => "other_negative",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Manifest(format!("unknown class label {s:?}")))
    }
}

/// Size and degradation envelope of a generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub positives: usize,
    pub speed_limit: usize,
    pub other_negative: usize,
    /// Templates are drawn at this size and then degraded.
    pub render_size: usize,
    /// Final side length; `None` keeps the render size.
    pub target_size: Option<usize>,
    /// Blur sigma is drawn uniformly from `[0, max_blur]`.
    pub max_blur: f64,
    /// Noise sigma is drawn uniformly from `[0, max_noise]`.
    pub max_noise: f64,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            positives: 200,
            speed_limit: 600,
            other_negative: 400,
            render_size: 64,
            target_size: Some(20),
            max_blur: 1.0,
            max_noise: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub file_name: String,
    pub label: ClassLabel,
    pub image: GrayImage,
}

/// Strokes of the digits on a speed-limit plate, in units of the image
/// side, center-relative, y-up.
type Strokes = &'static [((f64, f64), (f64, f64))];

const DIGIT_3: Strokes = &[
    ((-0.30, 0.20), (-0.10, 0.20)),
    ((-0.10, 0.20), (-0.25, 0.00)),
    ((-0.25, 0.00), (-0.10, -0.20)),
    ((-0.10, -0.20), (-0.30, -0.20)),
];
const DIGIT_6: Strokes = &[
    ((-0.30, 0.20), (-0.30, -0.20)),
    ((-0.30, 0.20), (-0.10, 0.20)),
    ((-0.30, -0.20), (-0.10, -0.20)),
    ((-0.10, -0.20), (-0.10, 0.00)),
    ((-0.30, 0.00), (-0.10, 0.00)),
];
const DIGIT_0_RIGHT: Strokes = &[
    ((0.10, 0.20), (0.10, -0.20)),
    ((0.10, 0.20), (0.30, 0.20)),
    ((0.10, -0.20), (0.30, -0.20)),
    ((0.30, 0.20), (0.30, -0.20)),
];
const DIGITS_100: Strokes = &[
    ((-0.35, 0.20), (-0.35, -0.20)),
    ((-0.20, 0.20), (-0.20, -0.20)),
    ((-0.20, 0.20), (-0.05, 0.20)),
    ((-0.20, -0.20), (-0.05, -0.20)),
    ((-0.05, 0.20), (-0.05, -0.20)),
    ((0.10, 0.20), (0.10, -0.20)),
    ((0.10, 0.20), (0.25, 0.20)),
    ((0.10, -0.20), (0.25, -0.20)),
    ((0.25, 0.20), (0.25, -0.20)),
];

/// Independent generator for one sample: the corpus seed picks the key, the
/// class and index pick the stream, so samples do not depend on each other
/// or on generation order.
fn sample_rng(seed: u64, label: ClassLabel, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((label as u64) << 32) | index as u64);
    rng
}

fn contrast_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    (rng.random_range(0.05..0.35), rng.random_range(0.65..0.95))
}

fn rim(size: usize, value: f64) -> (Shape, f64) {
    (
        Shape::Ring {
            radius: size as f64 / 2.0 - 2.0,
            half_width: 1.0,
        },
        value,
    )
}

fn speed_limit(size: usize, index: usize, rng: &mut ChaCha8Rng) -> Result<GrayImage> {
    let (fg, bg) = contrast_pair(rng);
    let rim_value = rng.random_range(0.05..0.5);
    // cycle 30, 60, 100 so every plate shape is equally represented
    let digits: Vec<_> = match index % 3 {
        0 => DIGIT_3.iter().chain(DIGIT_0_RIGHT).collect(),
        1 => DIGIT_6.iter().chain(DIGIT_0_RIGHT).collect(),
        _ => DIGITS_100.iter().collect(),
    };
    let s = size as f64;
    let half_width = if index % 3 == 2 { 0.035 } else { 0.04 } * s;
    let mut shapes: Vec<(Shape, f64)> = digits
        .into_iter()
        .map(|&((x0, y0), (x1, y1))| {
            (
                Shape::Stroke {
                    from: (x0 * s, y0 * s),
                    to: (x1 * s, y1 * s),
                    half_width,
                },
                fg,
            )
        })
        .collect();
    shapes.push(rim(size, rim_value));
    render(size, size, bg, &shapes)
}

fn other_negative(size: usize, index: usize, rng: &mut ChaCha8Rng) -> Result<GrayImage> {
    let level = rng.random_range(0.05..0.95);
    if index.is_multiple_of(2) {
        GrayImage::filled(size, size, level)
    } else {
        // coarse random texture around a mid level
        let level = level.clamp(0.2, 0.8);
        let spread = rng.random_range(0.05..0.2);
        let cells: Vec<f64> = (0..size * size)
            .map(|_| (level + rng.random_range(-spread..spread)).clamp(0.0, 1.0))
            .collect();
        GrayImage::new(size, size, cells)
    }
}

fn end_restriction(size: usize, rng: &mut ChaCha8Rng) -> Result<GrayImage> {
    let (fg, bg) = contrast_pair(rng);
    synth_sign(&SignSpec {
        foreground: fg,
        background: bg,
        stripe_angle: 45.0 + rng.random_range(-3.0..3.0),
        ..SignSpec::end_of_restriction(size)
    })
}

/// Renders and degrades sample `index` of class `label`.
pub fn generate_sample(spec: &CorpusSpec, label: ClassLabel, index: usize) -> Result<Sample> {
    let mut rng = sample_rng(spec.seed, label, index);
    let size = spec.render_size;
    let template = match label {
        ClassLabel::EndRestriction => end_restriction(size, &mut rng)?,
        ClassLabel::SpeedLimit => speed_limit(size, index, &mut rng)?,
        ClassLabel::OtherNegative => other_negative(size, index, &mut rng)?,
    };
    let d = Degradation {
        gaussian_blur_sigma: rng.random_range(0.0..=spec.max_blur),
        noise_sigma: rng.random_range(0.0..=spec.max_noise),
        target_size: spec.target_size,
        seed: rng.random(),
    };
    Ok(Sample {
        file_name: format!("{label}_{index:04}.pgm"),
        label,
        image: degrade(&template, &d)?,
    })
}

/// All samples of `spec`, positives first, in a fixed order.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<Sample>> {
    let jobs: Vec<(ClassLabel, usize)> = [
        (ClassLabel::EndRestriction, spec.positives),
        (ClassLabel::SpeedLimit, spec.speed_limit),
        (ClassLabel::OtherNegative, spec.other_negative),
    ]
    .into_iter()
    .flat_map(|(label, n)| (0..n).map(move |i| (label, i)))
    .collect();
    jobs.into_par_iter()
        .map(|(label, i)| generate_sample(spec, label, i))
        .collect()
}

pub const MANIFEST: &str = "labels.csv";

/// Writes every sample as binary PGM plus a `labels.csv` manifest with
/// `filename,class_label` lines.
pub fn write_corpus(dir: impl AsRef<Path>, samples: &[Sample]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut manifest = String::from("filename,class_label\n");
    for s in samples {
        write_pgm(dir.join(&s.file_name), &s.image, true)?;
        manifest.push_str(&format!("{},{}\n", s.file_name, s.label));
    }
    fs::write(dir.join(MANIFEST), manifest)?;
    Ok(())
}

/// Parses `labels.csv`. A header line is optional; blank lines are skipped.
pub fn read_manifest(dir: impl AsRef<Path>) -> Result<Vec<(String, ClassLabel)>> {
    let path = dir.as_ref().join(MANIFEST);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (n == 0 && line == "filename,class_label") {
            continue;
        }
        let (file, label) = line.split_once(',').ok_or_else(|| {
            Error::Manifest(format!("line {}: expected filename,class_label", n + 1))
        })?;
        out.push((file.trim().to_string(), label.trim().parse()?));
    }
    Ok(out)
}
