use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::{read_manifest, ClassLabel, Sample};
use crate::detector::{detect_end_of_restriction, DetectorSettings};
use crate::error::{Error, Result};
use crate::image::read_pgm;

/// Per-class detection counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub class_label: ClassLabel,
    /// Images of this class the detector called positive.
    pub positives_detected: usize,
    pub total: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub rows: Vec<ClassRow>,
    /// Positive verdicts over all images of negative classes.
    pub false_positive_rate: f64,
    pub wall_time: f64,
    pub config: DetectorSettings,
    /// Files listed in the manifest that could not be evaluated.
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl CorpusReport {
    pub fn row(&self, label: ClassLabel) -> Option<&ClassRow> {
        self.rows.iter().find(|r| r.class_label == label)
    }

    /// Plain-text table: class, number of examples, detected as positive,
    /// rate, and the overall false-positive rate.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<18} {:>9} {:>9} {:>8}",
            "class", "examples", "positive", "rate"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<18} {:>9} {:>9} {:>7.1}%",
                r.class_label.as_str(),
                r.total,
                r.positives_detected,
                100.0 * r.rate
            );
        }
        let _ = writeln!(
            out,
            "false positive rate: {:.2}%",
            100.0 * self.false_positive_rate
        );
        let _ = writeln!(out, "wall time: {:.2} s", self.wall_time);
        if !self.warnings.is_empty() {
            let _ = writeln!(out, "{} file(s) skipped", self.warnings.len());
        }
        out
    }
}

fn aggregate(
    verdicts: &[(ClassLabel, bool)],
    config: DetectorSettings,
    wall_time: f64,
    warnings: Vec<String>,
) -> CorpusReport {
    let mut counts: BTreeMap<ClassLabel, (usize, usize)> = BTreeMap::new();
    for &(label, positive) in verdicts {
        let c = counts.entry(label).or_default();
        c.0 += positive as usize;
        c.1 += 1;
    }
    let rows = counts
        .into_iter()
        .map(|(class_label, (positives_detected, total))| ClassRow {
            class_label,
            positives_detected,
            total,
            rate: positives_detected as f64 / total as f64,
        })
        .collect::<Vec<_>>();
    let (fp, neg) = rows
        .iter()
        .filter(|r| !r.class_label.is_positive())
        .fold((0, 0), |(f, n), r| (f + r.positives_detected, n + r.total));
    CorpusReport {
        rows,
        false_positive_rate: if neg == 0 {
            0.0
        } else {
            fp as f64 / neg as f64
        },
        wall_time,
        config,
        warnings,
    }
}

/// Runs `f` on a pool of `jobs` threads, or on rayon's global pool.
fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Detects every in-memory sample. The result does not depend on `jobs`.
pub fn evaluate_samples(
    samples: &[Sample],
    settings: &DetectorSettings,
    jobs: Option<usize>,
) -> Result<CorpusReport> {
    if samples.is_empty() {
        return Err(Error::EmptyCorpus("<memory>".into()));
    }
    let start = Instant::now();
    let results: Vec<Result<bool>> = with_jobs(jobs, || {
        samples
            .par_iter()
            .map(|s| detect_end_of_restriction(&s.image, settings).map(|r| r.positive))
            .collect()
    })?;
    let mut verdicts = Vec::with_capacity(samples.len());
    let mut warnings = Vec::new();
    for (s, r) in samples.iter().zip(results) {
        match r {
            Ok(v) => verdicts.push((s.label, v)),
            Err(e) => warnings.push(format!("{}: {e}", s.file_name)),
        }
    }
    Ok(aggregate(
        &verdicts,
        *settings,
        start.elapsed().as_secs_f64(),
        warnings,
    ))
}

/// Reads `labels.csv` in `dir` and detects every listed image. Missing or
/// unreadable files are skipped and listed in `warnings`.
pub fn evaluate_dir(
    dir: impl AsRef<Path>,
    settings: &DetectorSettings,
    jobs: Option<usize>,
) -> Result<CorpusReport> {
    let dir = dir.as_ref();
    let manifest = match read_manifest(dir) {
        Ok(m) => m,
        Err(Error::Manifest(_)) if !dir.join(super::corpus::MANIFEST).exists() => {
            return Err(Error::EmptyCorpus(dir.display().to_string()))
        }
        Err(e) => return Err(e),
    };
    if manifest.is_empty() {
        return Err(Error::EmptyCorpus(dir.display().to_string()));
    }
    let start = Instant::now();
    let results: Vec<Result<bool>> = with_jobs(jobs, || {
        manifest
            .par_iter()
            .map(|(file, _)| {
                let img = read_pgm(dir.join(file))?;
                detect_end_of_restriction(&img, settings).map(|r| r.positive)
            })
            .collect()
    })?;
    let mut verdicts = Vec::with_capacity(manifest.len());
    let mut warnings = Vec::new();
    for ((file, label), r) in manifest.iter().zip(results) {
        match r {
            Ok(v) => verdicts.push((*label, v)),
            Err(e) => warnings.push(format!("{file}: {e}")),
        }
    }
    if verdicts.is_empty() {
        return Err(Error::EmptyCorpus(dir.display().to_string()));
    }
    Ok(aggregate(
        &verdicts,
        *settings,
        start.elapsed().as_secs_f64(),
        warnings,
    ))
}
