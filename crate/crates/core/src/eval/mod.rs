//! Synthetic corpus, batch evaluation and the projection benchmark.

mod bench;
mod corpus;
mod report;

pub use bench::{bench_size, even_angles, random_image, run_bench, BenchReport, BenchRow};
pub use corpus::{
    generate_corpus, generate_sample, read_manifest, write_corpus, ClassLabel, CorpusSpec, Sample,
    MANIFEST,
};
pub use report::{evaluate_dir, evaluate_samples, ClassRow, CorpusReport};
