use serde::{Deserialize, Serialize};

use super::ProjectionProfile;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub index: usize,
    pub value: f64,
    pub kind: ExtremumKind,
    pub prominence: f64,
}

/// Local maxima of `x` as plateau-center indices. Endpoints never count.
fn local_maxima(x: &[f64]) -> Vec<usize> {
    let n = x.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if x[i - 1] < x[i] {
            let mut ahead = i + 1;
            while ahead + 1 < n && x[ahead] == x[i] {
                ahead += 1;
            }
            if x[ahead] < x[i] {
                peaks.push((i + ahead - 1) / 2);
                i = ahead;
                continue;
            }
        }
        i += 1;
    }
    peaks
}

/// Height of the peak above the higher of the two lowest points reached
/// before the signal climbs above it on either side.
fn prominence(x: &[f64], peak: usize) -> f64 {
    let top = x[peak];
    let left = x[..=peak]
        .iter()
        .rev()
        .take_while(|&&v| v <= top)
        .copied()
        .fold(top, f64::min);
    let right = x[peak..]
        .iter()
        .take_while(|&&v| v <= top)
        .copied()
        .fold(top, f64::min);
    top - left.max(right)
}

/// Extrema of a raw signal with prominence at least `min_prominence`.
pub fn find_extrema_in(values: &[f64], min_prominence: f64) -> Result<Vec<Extremum>> {
    if values.len() < 3 {
        return Err(Error::ProfileTooShort(values.len()));
    }
    if !(min_prominence > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "min_prominence must be positive, got {min_prominence}"
        )));
    }
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    let mut out = Vec::new();
    for (signal, kind) in [
        (values, ExtremumKind::Max),
        (&negated[..], ExtremumKind::Min),
    ] {
        for p in local_maxima(signal) {
            let prominence = prominence(signal, p);
            if prominence >= min_prominence {
                out.push(Extremum {
                    index: p,
                    value: values[p],
                    kind,
                    prominence,
                });
            }
        }
    }
    out.sort_by_key(|e| e.index);
    Ok(out)
}

/// Extrema of a (normalized) profile with prominence at least
/// `min_prominence`, sorted by index. Plateaus report their center.
pub fn find_extrema(p: &ProjectionProfile, min_prominence: f64) -> Result<Vec<Extremum>> {
    if !(min_prominence > 0.0 && min_prominence <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "min_prominence must lie in (0, 1], got {min_prominence}"
        )));
    }
    find_extrema_in(&p.values, min_prominence)
}
