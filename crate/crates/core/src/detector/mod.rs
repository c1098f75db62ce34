//! Projection profiles, extrema, circle localization and the 45 degree
//! stripe detector built from them.

mod detect;
mod extrema;
mod hough;
mod profile;

pub use detect::{
    detect_end_of_restriction, CircleSummary, CropMode, DetectionResult, DetectionSummary,
    DetectorSettings, MinimumSummary, AUTO_HOUGH_SIDE, MIN_SIDE,
};
pub use extrema::{find_extrema, find_extrema_in, Extremum, ExtremumKind};
pub use hough::{locate_circle, Circle};
pub use profile::{
    normalize_profile, profile_from_slice, project_cst, project_cst_with, project_direct,
    ProfileBackend, ProjectOptions, ProjectionProfile,
};
