use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detector::profile_from_slice;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::transforms::{
    center_pixel_offset, dct2, dft2, extract_slice, radon_direct, Backend, Interpolation,
    DEFAULT_PAD_FACTOR,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub num_angles: usize,
    pub direct_seconds: f64,
    pub cst_seconds: f64,
    /// Worst relative L2 difference between the two sinograms, over angles.
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub backend: Backend,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:>6} {:>7} {:>12} {:>12} {:>12}\n",
            "N", "angles", "direct [s]", "cst [s]", "max rel err"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6} {:>7} {:>12.6} {:>12.6} {:>12.3e}\n",
                r.n, r.num_angles, r.direct_seconds, r.cst_seconds, r.max_rel_error
            ));
        }
        out
    }
}

/// `n` angles evenly spaced over `[0, 180)`.
pub fn even_angles(n: usize) -> Vec<f64> {
    (0..n).map(|i| 180.0 * i as f64 / n as f64).collect()
}

/// Seeded random image with dyadic intensities, so sums are exact.
pub fn random_image(n: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..n * n)
        .map(|_| rng.random_range(0..=256u32) as f64 / 256.0)
        .collect();
    GrayImage::new(n, n, pixels).expect("valid random image")
}

/// Relative L2 distance between the direct projection (bins `0..L`) and a
/// CST profile read at the same signed distances.
fn relative_error(direct: &[f64], cst: &[f64], origin: f64, offset: f64) -> f64 {
    let half = (direct.len() / 2) as f64;
    let at = |pos: f64| -> f64 {
        let i0 = pos.floor();
        let t = pos - i0;
        let get = |i: f64| {
            if i < 0.0 || i as usize >= cst.len() {
                0.0
            } else {
                cst[i as usize]
            }
        };
        if t == 0.0 {
            get(i0)
        } else {
            get(i0) * (1.0 - t) + get(i0 + 1.0) * t
        }
    };
    let (mut num, mut den) = (0.0, 0.0);
    for (b, d) in direct.iter().enumerate() {
        // distance of bin b from the geometric center
        let r = b as f64 - half + offset;
        let c = at(origin + r);
        num += (c - d) * (c - d);
        den += d * d;
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Times full sinograms of a seeded `n x n` image computed directly and
/// through central slices, single-threaded.
pub fn bench_size(n: usize, angles: &[f64], backend: Backend, seed: u64) -> Result<BenchRow> {
    if !n.is_power_of_two() || !(32..=1024).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "bench sizes must be powers of two in [32, 1024], got {n}"
        )));
    }
    if angles.is_empty() {
        return Err(Error::InvalidParameter("need at least one angle".into()));
    }
    let img = random_image(n, seed);
    let bins = DEFAULT_PAD_FACTOR * n;

    let start = Instant::now();
    let direct = angles
        .iter()
        .map(|&a| radon_direct(&img, a, bins))
        .collect::<Result<Vec<_>>>()?;
    let direct_seconds = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let profiles = match backend {
        Backend::Dft => {
            let spec = dft2(&img, DEFAULT_PAD_FACTOR)?;
            angles
                .iter()
                .map(|&a| {
                    Ok(profile_from_slice(
                        &extract_slice(&spec, a, Interpolation::Bilinear)?,
                        false,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        }
        Backend::Dct => {
            let spec = dct2(&img, DEFAULT_PAD_FACTOR)?;
            angles
                .iter()
                .map(|&a| {
                    Ok(profile_from_slice(
                        &extract_slice(&spec, a, Interpolation::Bilinear)?,
                        false,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let cst_seconds = start.elapsed().as_secs_f64();

    let max_rel_error = angles
        .iter()
        .zip(direct.iter().zip(&profiles))
        .map(|(&a, (d, p))| relative_error(d, &p.values, p.origin, center_pixel_offset(n, n, a)))
        .fold(0.0, f64::max);
    Ok(BenchRow {
        n,
        num_angles: angles.len(),
        direct_seconds: direct_seconds.max(f64::MIN_POSITIVE),
        cst_seconds: cst_seconds.max(f64::MIN_POSITIVE),
        max_rel_error,
    })
}

pub fn run_bench(
    sizes: &[usize],
    angles: &[f64],
    backend: Backend,
    seed: u64,
) -> Result<BenchReport> {
    let rows = sizes
        .iter()
        .map(|&n| bench_size(n, angles, backend, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport { backend, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_aligned_errors_vanish() {
        for backend in [Backend::Dft, Backend::Dct] {
            let row = bench_size(32, &[0.0, 90.0], backend, 1).unwrap();
            assert!(
                row.max_rel_error <= 1e-9,
                "{backend}: {}",
                row.max_rel_error
            );
            assert_eq!(row.num_angles, 2);
        }
    }

    #[test]
    fn shape_of_report() {
        let r = run_bench(&[64], &even_angles(4), Backend::Dft, 3).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert!(r.rows[0].max_rel_error.is_finite());
        assert!(r.rows[0].direct_seconds > 0.0 && r.rows[0].cst_seconds > 0.0);
        let back: BenchReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.table().lines().count() == 2);
    }

    #[test]
    fn rejects_odd_sizes() {
        assert!(bench_size(48, &[0.0], Backend::Dft, 0).is_err());
        assert!(bench_size(2048, &[0.0], Backend::Dft, 0).is_err());
        assert_eq!(even_angles(4), vec![0.0, 45.0, 90.0, 135.0]);
    }
}
