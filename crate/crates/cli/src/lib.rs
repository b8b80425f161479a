//! Command-line front end: `helixkit analyze` and `helixkit synthesize`.
//!
//! Exit codes: 0 success (whatever the verdicts), 1 usage or unreadable
//! input, 2 the curve itself is degenerate or invalid, 3 anything else.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use helixkit::classify::{HelixKind, Tolerances};
use helixkit::expr::{CurveSource, CurveSpec};
use helixkit::frenet::FrenetConfig;
use helixkit::io::{read_input, write_apparatus_csv, write_profile_csv};
use helixkit::report::{analyze, AnalysisConfig, DEFAULT_GRID};
use helixkit::synthesize::{integrate_frenet, CurvaturePrescription};
use helixkit::Error;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CURVE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "helixkit", version, about = "Frenet apparatus and helix classification for curves in E^n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze curve files and write reports.
    Analyze(AnalyzeArgs),
    /// Integrate a curvature prescription into a sampled curve.
    Synthesize(SynthesizeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Curve files: curve grammar, `.csv` samples or `.json` prescriptions.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,

    /// Grid size N.
    #[arg(long, env = "HELIXKIT_GRID", default_value_t = DEFAULT_GRID)]
    pub grid: usize,

    /// Constancy tolerance.
    #[arg(long, env = "HELIXKIT_TOL_CONST", default_value_t = 1e-6)]
    pub tol_const: f64,

    /// Nonzero tolerance.
    #[arg(long, env = "HELIXKIT_TOL_ZERO", default_value_t = 1e-8)]
    pub tol_zero: f64,

    /// Angle tolerance: |cos φ| below this counts as a right angle.
    #[arg(long, env = "HELIXKIT_TOL_ANGLE", default_value_t = 1e-6)]
    pub tol_angle: f64,

    /// Cap on the coordinate jet order of analytic curves (default 2n + 4).
    #[arg(long, env = "HELIXKIT_MAX_ORDER")]
    pub max_order: Option<usize>,

    /// Classifiers to run.
    #[arg(long, env = "HELIXKIT_KINDS", value_delimiter = ',', value_parser = parse_kind,
          default_value = "inclined,v2,vn")]
    pub kinds: Vec<HelixKind>,

    /// Cross-check every verdict with the brute-force axis search at this
    /// sphere resolution.
    #[arg(long, env = "HELIXKIT_ORACLE", num_args = 0..=1, default_missing_value = "64")]
    pub oracle: Option<usize>,

    #[arg(long, env = "HELIXKIT_FORMAT", value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Output directory.
    #[arg(long, env = "HELIXKIT_OUT", default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthesizeArgs {
    /// Prescription JSON.
    pub prescription: PathBuf,
    /// Output CSV: frame, curvatures and the sampled curve.
    pub out: PathBuf,
    /// Override the number of output samples.
    #[arg(long, env = "HELIXKIT_SAMPLES")]
    pub samples: Option<usize>,
}

fn parse_kind(s: &str) -> Result<HelixKind, String> {
    HelixKind::from_name(s.trim()).ok_or_else(|| format!("unknown helix kind `{s}` (expected inclined, v2 or vn)"))
}

/// A failed command: exit code plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }

    /// Maps a library error met while reading or analyzing `path`.
    fn from_error(path: &Path, e: &Error) -> Failure {
        let code = if e.is_curve_error() {
            EXIT_CURVE
        } else {
            match e.root() {
                Error::Syntax { .. }
                | Error::UnknownIdentifier { .. }
                | Error::VariableExponent { .. }
                | Error::Arity { .. }
                | Error::DimensionTooSmall(_)
                | Error::DuplicateCoordinate(_)
                | Error::EmptyInterval(..)
                | Error::GridTooSmall { .. }
                | Error::Budget { .. }
                | Error::InvalidArgument(_)
                | Error::Io(_)
                | Error::Csv(_)
                | Error::Json(_) => EXIT_USAGE,
                _ => EXIT_INTERNAL,
            }
        };
        Failure {
            code,
            message: format!("{}: {e}", path.display()),
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(&a),
        Command::Synthesize(s) => cmd_synthesize(&s).map_err(|f| vec![f]),
    };
    match result {
        Ok(()) => 0,
        Err(failures) => {
            for f in &failures {
                eprintln!("helixkit: {}", f.message);
            }
            failures.iter().map(|f| f.code).max().unwrap_or(EXIT_INTERNAL)
        }
    }
}

impl AnalyzeArgs {
    pub fn config(&self) -> Result<AnalysisConfig, Failure> {
        let cfg = AnalysisConfig {
            grid: self.grid,
            frenet: FrenetConfig::default(),
            tolerances: Tolerances {
                constancy: self.tol_const,
                nonzero: self.tol_zero,
                angle: self.tol_angle,
            },
            kinds: self.kinds.clone(),
            oracle: self.oracle,
            ..AnalysisConfig::default()
        };
        cfg.validate().map_err(|e| Failure::usage(e.to_string()))?;
        if self.oracle.is_some_and(|r| r < 2) {
            return Err(Failure::usage("oracle resolution must be at least 2"));
        }
        Ok(cfg)
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: impl FnOnce(&mut dyn Write) -> helixkit::Result<()>) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: &dyn std::fmt::Display| Failure::internal(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        contents(&mut w).map_err(|e| fail(&e))?;
        w.flush().map_err(|e| fail(&e))?;
    }
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "curve".into())
}

fn with_order_cap(spec: CurveSpec, cap: Option<usize>) -> CurveSpec {
    match (cap, spec.source()) {
        (Some(m), CurveSource::Analytic(c)) => CurveSpec::analytic(c.clone().with_max_order(m)),
        _ => spec,
    }
}

/// Analysis of one input. Returns the stdout summary line.
fn analyze_one(path: &Path, args: &AnalyzeArgs, cfg: &AnalysisConfig) -> Result<String, Failure> {
    let spec = read_input(path).map_err(|e| Failure::from_error(path, &e))?;
    let spec = with_order_cap(spec, args.max_order);
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let analysis = analyze(&name, &spec, cfg).map_err(|e| Failure::from_error(path, &e))?;
    let base = args.out.join(stem(path));
    let file = |suffix: &str| PathBuf::from(format!("{}.{suffix}", base.display()));
    if matches!(args.format, Format::Json | Format::Both) {
        let json = analysis.report.to_json();
        write_atomic(&file("report.json"), |w| Ok(w.write_all(json.as_bytes())?))?;
    }
    if matches!(args.format, Format::Csv | Format::Both) {
        write_atomic(&file("frenet.csv"), |w| write_apparatus_csv(&analysis.apparatus, w))?;
        for prof in &analysis.profiles {
            write_atomic(&file(&format!("{}.csv", prof.kind.name())), |w| write_profile_csv(prof, w))?;
        }
    }
    let verdicts: Vec<String> = analysis
        .report
        .axis
        .keys()
        .map(|&k| format!("{}={}", k.name(), analysis.report.is_helix(k).unwrap_or(false)))
        .collect();
    Ok(format!("{}: {}", path.display(), verdicts.join(" ")))
}

/// Runs every input in parallel. Summaries go to stdout in input order;
/// one failing input does not stop the others.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Vec<Failure>> {
    let cfg = args.config().map_err(|f| vec![f])?;
    if !args.out.is_dir() {
        return Err(vec![Failure::usage(format!(
            "output directory {} does not exist",
            args.out.display()
        ))]);
    }
    let results: Vec<Result<String, Failure>> =
        args.inputs.par_iter().map(|p| analyze_one(p, args, &cfg)).collect();
    let mut failures = Vec::new();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in results {
        match r {
            Ok(line) => {
                let _ = writeln!(out, "{line}");
            }
            Err(f) => failures.push(f),
        }
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

pub fn cmd_synthesize(args: &SynthesizeArgs) -> Result<(), Failure> {
    let path = &args.prescription;
    let src = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let mut p = CurvaturePrescription::from_json(&src).map_err(|e| Failure::from_error(path, &e))?;
    if let Some(m) = args.samples {
        p = p.with_samples(m);
    }
    let (_, app) = integrate_frenet(&p).map_err(|e| Failure::from_error(path, &e))?;
    write_atomic(&args.out, |w| write_apparatus_csv(&app, w))
}
