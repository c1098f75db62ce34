use std::io;

/// Every failure the toolkit reports.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("not a PGM file: expected magic P2 or P5")]
    BadMagic,
    #[error("malformed PGM header: {0}")]
    BadHeader(String),
    #[error("PGM raster truncated: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("PGM sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
    #[error("invalid sign spec: {0}")]
    InvalidSpec(String),
    #[error("{stripes} stripes with period {period:.2} px do not fit inside a disk of diameter {diameter:.2} px")]
    SpecTooDense {
        stripes: usize,
        period: f64,
        diameter: f64,
    },
    #[error("downscale target {target} exceeds source size {width}x{height}")]
    BadTarget {
        target: usize,
        width: usize,
        height: usize,
    },
    #[error("angle {0} is outside [0, 180)")]
    AngleOutOfRange(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("profile has {0} samples, at least 3 are needed")]
    ProfileTooShort(usize),
    #[error("radius range [{r_min}, {r_max}] is invalid for a {width}x{height} image")]
    BadRadiusRange {
        r_min: usize,
        r_max: usize,
        width: usize,
        height: usize,
    },
    #[error("image is {width}x{height}, detection needs at least {min}x{min}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        min: usize,
    },
    #[error("corpus at {0} contains no images")]
    EmptyCorpus(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
