//! `slice-radon`: synthesize sign corpora, project images, detect
//! end-of-restriction signs, evaluate a corpus and benchmark the projection
//! paths.
//!
//! `detect` exits 0 for a negative verdict, 10 for a positive one and 1 on
//! any error, so shell pipelines can branch on it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slice_radon::detector::{
    detect_end_of_restriction, normalize_profile, project_cst, CropMode, DetectorSettings,
};
use slice_radon::eval::{
    evaluate_dir, even_angles, generate_corpus, run_bench, write_corpus, ClassLabel, CorpusSpec,
};
use slice_radon::image::{read_pgm, GrayImage};
use slice_radon::transforms::{dct2, dft2, extract_slice, ramp_filter, Backend, Interpolation};
use slice_radon::Error;

const EXIT_POSITIVE: u8 = 10;

#[derive(Parser)]
#[command(
    name = "slice-radon",
    version,
    about = "Projections through the central slice theorem and a 45 degree stripe detector"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labelled synthetic corpus (PGM files + labels.csv).
    Synth(SynthArgs),
    /// Write the normalized projection profile of an image as CSV.
    Project(ProjectArgs),
    /// Run the detector on one image; prints JSON, exits 0/10/1.
    Detect(DetectArgs),
    /// Detect every image of a corpus and report per-class rates.
    Eval(EvalArgs),
    /// Time full sinograms, direct summation against the slice path.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Dft,
    Dct,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Dft => Backend::Dft,
            BackendArg::Dct => Backend::Dct,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CropArg {
    None,
    Inscribed,
    Hough,
    Auto,
}

impl From<CropArg> for CropMode {
    fn from(c: CropArg) -> Self {
        match c {
            CropArg::None => CropMode::None,
            CropArg::Inscribed => CropMode::Inscribed,
            CropArg::Hough => CropMode::Hough,
            CropArg::Auto => CropMode::Auto,
        }
    }
}

#[derive(Args)]
struct RampArgs {
    /// Ramp-filter the slice before inverting it.
    #[arg(long, overrides_with = "no_ramp")]
    ramp: bool,
    #[arg(long, overrides_with = "ramp")]
    no_ramp: bool,
}

impl RampArgs {
    fn resolve(&self, default: bool) -> bool {
        if self.ramp {
            true
        } else if self.no_ramp {
            false
        } else {
            default
        }
    }
}

#[derive(Args)]
struct SeedArg {
    #[arg(long, env = "SLICE_RADON_SEED", default_value_t = 0)]
    seed: u64,
}

/// Detector knobs shared by `detect` and `eval`. Unset flags keep the
/// library defaults.
#[derive(Args)]
struct DetectorArgs {
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    #[command(flatten)]
    ramp: RampArgs,
    /// Projection angle in degrees, [0, 180).
    #[arg(long, allow_negative_numbers = true)]
    angle: Option<f64>,
    /// Minimum prominence of the characteristic dip, (0, 1].
    #[arg(long)]
    prominence: Option<f64>,
    #[arg(long, value_enum)]
    crop: Option<CropArg>,
    /// Minimum projection coherence; 0 disables the gate.
    #[arg(long)]
    min_coherence: Option<f64>,
}

impl DetectorArgs {
    fn settings(&self) -> DetectorSettings {
        let d = DetectorSettings::default();
        DetectorSettings {
            backend: self.backend.map_or(d.backend, Into::into),
            apply_ramp: self.ramp.resolve(d.apply_ramp),
            angle: self.angle.unwrap_or(d.angle),
            min_prominence: self.prominence.unwrap_or(d.min_prominence),
            crop: self.crop.map_or(d.crop, Into::into),
            min_coherence: self.min_coherence.unwrap_or(d.min_coherence),
            ..d
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Images per selected class. Without it the default mix is
    /// 200 end_restriction, 600 speed_limit, 400 other_negative.
    #[arg(long)]
    count: Option<usize>,
    /// Restrict to these classes (repeatable).
    #[arg(long = "class", value_parser = parse_label)]
    classes: Vec<ClassLabel>,
    #[command(flatten)]
    seed: SeedArg,
    /// Final image side; 0 keeps the render size.
    #[arg(long, default_value_t = 20)]
    size: usize,
    #[arg(long, default_value_t = 64)]
    render_size: usize,
    #[arg(long, default_value_t = 1.0)]
    max_blur: f64,
    #[arg(long, default_value_t = 0.1)]
    max_noise: f64,
}

#[derive(Args)]
struct ProjectArgs {
    image: PathBuf,
    #[arg(long, allow_negative_numbers = true, default_value_t = 45.0)]
    angle: f64,
    #[arg(long, value_enum, default_value = "dct")]
    backend: BackendArg,
    /// Default: no ramp, i.e. the plain projection.
    #[command(flatten)]
    ramp: RampArgs,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump the (ramp-filtered, if requested) spectrum slice as CSV.
    #[arg(long)]
    slice_out: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    image: PathBuf,
    #[command(flatten)]
    detector: DetectorArgs,
}

#[derive(Args)]
struct EvalArgs {
    corpus: PathBuf,
    #[command(flatten)]
    detector: DetectorArgs,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the JSON report here and print the table on stdout. Without
    /// it the JSON goes to stdout and the table to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Image sides, powers of two in [32, 1024].
    #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256])]
    sizes: Vec<usize>,
    /// Number of evenly spaced angles in [0, 180).
    #[arg(long, default_value_t = 180)]
    angles: usize,
    /// Explicit angle set (repeatable); overrides `--angles`.
    #[arg(long = "angle", allow_negative_numbers = true)]
    angle_set: Vec<f64>,
    #[arg(long, value_enum, default_value = "dct")]
    backend: BackendArg,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_label(s: &str) -> Result<ClassLabel, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::Synth(a) => synth(a),
        Command::Project(a) => project(a),
        Command::Detect(a) => detect(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench(a),
    }
}

fn synth(a: SynthArgs) -> Result<ExitCode, Error> {
    let mut spec = CorpusSpec {
        seed: a.seed.seed,
        render_size: a.render_size,
        target_size: (a.size > 0).then_some(a.size),
        max_blur: a.max_blur,
        max_noise: a.max_noise,
        ..Default::default()
    };
    let picked = |c| a.classes.is_empty() || a.classes.contains(&c);
    for (label, slot) in [
        (ClassLabel::EndRestriction, &mut spec.positives),
        (ClassLabel::SpeedLimit, &mut spec.speed_limit),
        (ClassLabel::OtherNegative, &mut spec.other_negative),
    ] {
        *slot = if !picked(label) {
            0
        } else {
            a.count.unwrap_or(*slot)
        };
    }
    let samples = generate_corpus(&spec)?;
    if samples.is_empty() {
        eprintln!("warning: no images requested; writing an empty manifest");
    }
    write_corpus(&a.out, &samples)?;
    eprintln!("wrote {} images to {}", samples.len(), a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn project(a: ProjectArgs) -> Result<ExitCode, Error> {
    let img = load(&a.image)?;
    let backend = a.backend.into();
    let ramp = a.ramp.resolve(false);
    let profile = normalize_profile(&project_cst(&img, a.angle, backend, ramp)?);
    if let Some(path) = &a.slice_out {
        let mut slice = match backend {
            Backend::Dft => extract_slice(&dft2(&img, 2)?, a.angle, Interpolation::Bilinear)?,
            Backend::Dct => extract_slice(&dct2(&img, 2)?, a.angle, Interpolation::Bilinear)?,
        };
        if ramp {
            slice = ramp_filter(&slice);
        }
        fs::write(path, slice.to_csv())?;
    }
    emit(a.out.as_deref(), &profile.to_csv())?;
    Ok(ExitCode::SUCCESS)
}

fn detect(a: DetectArgs) -> Result<ExitCode, Error> {
    let img = load(&a.image)?;
    let result = detect_end_of_restriction(&img, &a.detector.settings())?;
    println!("{}", result.to_json());
    Ok(if result.positive {
        ExitCode::from(EXIT_POSITIVE)
    } else {
        ExitCode::SUCCESS
    })
}

fn eval(a: EvalArgs) -> Result<ExitCode, Error> {
    let report = evaluate_dir(&a.corpus, &a.detector.settings(), a.jobs)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let json = serde_json::to_string_pretty(&report)?;
    match &a.out {
        Some(path) => {
            fs::write(path, json + "\n")?;
            print!("{}", report.table());
        }
        None => {
            eprint!("{}", report.table());
            println!("{json}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench(a: BenchArgs) -> Result<ExitCode, Error> {
    let angles = if a.angle_set.is_empty() {
        even_angles(a.angles)
    } else {
        a.angle_set.clone()
    };
    let report = run_bench(&a.sizes, &angles, a.backend.into(), a.seed.seed)?;
    let json = serde_json::to_string_pretty(&report)?;
    match &a.out {
        Some(path) => {
            fs::write(path, json + "\n")?;
            print!("{}", report.table());
        }
        None => {
            eprint!("{}", report.table());
            println!("{json}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load(path: &Path) -> Result<GrayImage, Error> {
    read_pgm(path).map_err(|e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        e => e,
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
