//! Command implementations behind the `cvent` binary.
//!
//! Exit codes: 0 success, 1 semantic failure (unphysical state, failed
//! verification), 2 usage or parse error.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cv_entangle::covariance::{
    log_negativity_numeric, partial_transpose, symplectic_spectrum_numeric, validate,
    CovarianceMatrix, ModePartition,
};
use cv_entangle::entanglement::{equivalent_two_mode, negativity_from_equivalent};
use cv_entangle::ghz::{
    ghz_hierarchy, ghz_limit, scaling_table, sweep_records, GhzSpec, DEFAULT_B_GRID,
};
use cv_entangle::symmetric::{
    build_fully_symmetric, fs_spectrum, OnePlusNState, SymmetricBlockParams,
};
use cv_entangle::verification::{cross_validate_with_tol, DEFAULT_TOL};
use cv_entangle::Error;
use serde::Serialize;

pub mod records;

use records::{HierarchyRow, NegativityRecord};

/// Environment variable overriding the `verify` comparison tolerance.
pub const NEG_TOL_VAR: &str = "NEG_TOL";

#[derive(Debug, Parser)]
#[command(
    name = "cvent",
    version,
    about = "Symmetric Gaussian states and their 1 x K negativities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the uncertainty relation for a covariance matrix file.
    Validate { cm_file: PathBuf },
    /// Symplectic spectrum of a covariance matrix file or a fully symmetric state.
    Spectrum(SpectrumArgs),
    /// Logarithmic negativity of a bipartition.
    Negativity(NegativityArgs),
    /// 1 x K negativities of a GHZ-type state, K = 1..modes-1.
    Hierarchy(HierarchyArgs),
    /// N-scaling of 1 x 1, 1 x (N-1) and 1 x N negativities of GHZ-type states.
    Sweep(SweepArgs),
    /// Cross-check closed forms against the numeric oracle on a random corpus.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// One row per N: b,n,e_1x1,e_1xNm1,e_1xN.
    #[default]
    Wide,
    /// One row per (b, N, K): b,n_total,k,E_N,n_tilde_minus.
    Long,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file, written atomically; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// Inline standard-form parameters of a fully symmetric state.
#[derive(Debug, Args)]
pub struct SymmetricArgs {
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub e2: Option<f64>,
    #[arg(long)]
    pub modes: Option<usize>,
}

impl SymmetricArgs {
    fn params(&self) -> Result<Option<SymmetricBlockParams>, Failure> {
        match (self.b, self.e1, self.e2, self.modes) {
            (None, None, None, None) => Ok(None),
            (Some(b), Some(e1), Some(e2), Some(n)) if n >= 1 => {
                Ok(Some(SymmetricBlockParams::new(b, e1, e2, n)))
            }
            _ => Err(Failure::usage(
                "inline parameters need --b, --e1, --e2 and --modes >= 1",
            )),
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Covariance matrix JSON file.
    #[arg(long, conflicts_with_all = ["b", "e1", "e2", "modes"])]
    pub cm: Option<PathBuf>,
    #[command(flatten)]
    pub params: SymmetricArgs,
    /// Use the numeric oracle for inline parameters.
    #[arg(long)]
    pub numeric: bool,
    /// Partially transpose these modes first (covariance file input only).
    #[arg(long, value_delimiter = ',')]
    pub transpose: Vec<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct NegativityArgs {
    /// Covariance matrix JSON file, evaluated numerically.
    #[arg(long, conflicts_with = "state")]
    pub cm: Option<PathBuf>,
    /// Transposed modes for `--cm`; defaults to mode 0.
    #[arg(long, value_delimiter = ',', requires = "cm")]
    pub transpose: Vec<usize>,
    /// 1 x N state JSON file, evaluated through the equivalent two-mode state.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Also report the value in bits.
    #[arg(long)]
    pub bits: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HierarchyArgs {
    #[arg(long)]
    pub b: f64,
    /// Total number of modes.
    #[arg(long)]
    pub modes: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Squeezing values; defaults to 1.1,1.5,2,5,10.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<f64>,
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, value_enum, default_value_t)]
    pub layout: Layout,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 1000)]
    pub corpus: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Replay file for failing states; `verify-replay-<seed>.jsonl` when absent.
    #[arg(long)]
    pub replay: Option<PathBuf>,
}

/// Error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn semantic(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_)
            | Error::Shape { .. }
            | Error::ModeCount { .. }
            | Error::Asymmetric { .. }
            | Error::ModeOutOfRange { .. }
            | Error::DuplicateMode(_)
            | Error::EmptyModeSet
            | Error::InvalidParameter(_) => Failure::usage(e.to_string()),
            _ => Failure::semantic(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::semantic(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// Runs a parsed command and reports failures on stderr.
pub fn run(cli: Cli) -> ExitCode {
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate { cm_file } => cmd_validate(&cm_file),
        Command::Spectrum(a) => cmd_spectrum(&a).map(|()| 0),
        Command::Negativity(a) => cmd_negativity(&a).map(|()| 0),
        Command::Hierarchy(a) => cmd_hierarchy(&a).map(|()| 0),
        Command::Sweep(a) => cmd_sweep(&a).map(|()| 0),
        Command::Verify(a) => cmd_verify(&a),
    }
}

/// Writes `bytes` to `path` through a sibling temporary file, or to stdout.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> io::Result<()> {
    let Some(path) = path else {
        let mut stdout = io::stdout().lock();
        stdout.write_all(bytes)?;
        return stdout.flush();
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn read_cm(path: &Path) -> Result<CovarianceMatrix, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    CovarianceMatrix::from_json(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ValidateReport {
    n_modes: usize,
    is_physical: bool,
    min_nu: Option<f64>,
}

pub fn cmd_validate(cm_file: &Path) -> Result<u8, Failure> {
    let cm = read_cm(cm_file)?;
    let report = validate(&cm);
    let out = ValidateReport {
        n_modes: cm.n_modes(),
        is_physical: report.is_physical,
        min_nu: report.min_nu,
    };
    write_output(None, &json_bytes(&out)?)?;
    Ok(if report.is_physical { 0 } else { 1 })
}

#[derive(Serialize)]
struct SpectrumReport {
    method: &'static str,
    n_modes: usize,
    values: Vec<f64>,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let report = match (&args.cm, args.params.params()?) {
        (Some(path), _) => {
            let mut cm = read_cm(path)?;
            if !args.transpose.is_empty() {
                cm = partial_transpose(&cm, &ModePartition::new(args.transpose.iter().copied())?)?;
            }
            SpectrumReport {
                method: "numeric",
                n_modes: cm.n_modes(),
                values: symplectic_spectrum_numeric(&cm)?.values().to_vec(),
            }
        }
        (None, Some(p)) => {
            if !args.transpose.is_empty() {
                return Err(Failure::usage("--transpose needs --cm"));
            }
            let (method, spectrum) = if args.numeric {
                (
                    "numeric",
                    symplectic_spectrum_numeric(&build_fully_symmetric(&p)?)?,
                )
            } else {
                ("analytic", fs_spectrum(&p)?)
            };
            SpectrumReport {
                method,
                n_modes: p.n_modes,
                values: spectrum.values().to_vec(),
            }
        }
        (None, None) => return Err(Failure::usage("give --cm FILE or --b/--e1/--e2/--modes")),
    };
    let bytes = match args.output.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["i", "nu"])?;
            for (i, v) in report.values.iter().enumerate() {
                w.serialize((i, v))?;
            }
            w.into_inner()
                .map_err(|e| Failure::semantic(e.to_string()))?
        }
    };
    write_output(args.output.out.as_deref(), &bytes)?;
    Ok(())
}

pub fn cmd_negativity(args: &NegativityArgs) -> Result<(), Failure> {
    let mut record = match (&args.cm, &args.state) {
        (Some(path), None) => {
            let cm = read_cm(path)?;
            let part = if args.transpose.is_empty() {
                ModePartition::single(0)
            } else {
                ModePartition::new(args.transpose.iter().copied())?
            };
            let value = log_negativity_numeric(&cm, &part)?;
            let transposed = symplectic_spectrum_numeric(&partial_transpose(&cm, &part)?)?;
            let n_tilde_minus = transposed.min();
            NegativityRecord {
                k: cm.n_modes() - part.modes().count(),
                e_n: value,
                n_tilde_minus,
                entangled: n_tilde_minus < 1.0,
                e_n_bits: None,
            }
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let state: OnePlusNState = serde_json::from_str(&text)?;
            let r = negativity_from_equivalent(&equivalent_two_mode(&state)?)?;
            NegativityRecord {
                k: state.n(),
                e_n: r.value,
                n_tilde_minus: r.n_tilde_minus,
                entangled: r.entangled,
                e_n_bits: None,
            }
        }
        _ => {
            return Err(Failure::usage(
                "give exactly one of --cm FILE or --state FILE",
            ))
        }
    };
    if args.bits {
        record.e_n_bits = Some(record.e_n / std::f64::consts::LN_2);
    }
    write_output(args.out.as_deref(), &json_bytes(&record)?)?;
    Ok(())
}

pub fn hierarchy_rows(b: f64, modes: usize) -> Result<Vec<HierarchyRow>, Failure> {
    let spec = GhzSpec::new(b, modes)?;
    ghz_hierarchy(&spec)?
        .into_iter()
        .map(|(k, r)| {
            Ok(HierarchyRow {
                k,
                e_n: r.value,
                n_tilde_minus: r.n_tilde_minus,
                entangled: r.entangled,
                limit: ghz_limit(k, modes - 1)?,
            })
        })
        .collect()
}

pub fn cmd_hierarchy(args: &HierarchyArgs) -> Result<(), Failure> {
    let rows = hierarchy_rows(args.b, args.modes)?;
    let bytes = match args.output.format {
        Format::Json => json_bytes(&rows)?,
        Format::Csv => records::hierarchy_csv(&rows)?,
    };
    write_output(args.output.out.as_deref(), &bytes)?;
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    if args.n_min > args.n_max {
        return Err(Failure::usage(format!(
            "--n-min {} exceeds --n-max {}",
            args.n_min, args.n_max
        )));
    }
    let bs: Vec<f64> = if args.b.is_empty() {
        DEFAULT_B_GRID.to_vec()
    } else {
        args.b.clone()
    };
    let range = args.n_min..=args.n_max;
    let bytes = match args.layout {
        Layout::Wide => {
            let mut rows = Vec::new();
            for &b in &bs {
                rows.extend(scaling_table(b, range.clone())?);
            }
            match args.output.format {
                Format::Json => json_bytes(&rows)?,
                Format::Csv => records::scaling_csv(&rows)?,
            }
        }
        Layout::Long => {
            let rows = sweep_records(&bs, range)?;
            match args.output.format {
                Format::Json => json_bytes(&rows)?,
                Format::Csv => records::sweep_csv(&rows)?,
            }
        }
    };
    write_output(args.output.out.as_deref(), &bytes)?;
    Ok(())
}

/// Tolerance from `NEG_TOL`, or the default.
pub fn verify_tolerance(value: Option<&str>) -> Result<f64, Failure> {
    match value {
        None => Ok(DEFAULT_TOL),
        Some(s) => match s.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
            _ => Err(Failure::usage(format!(
                "{NEG_TOL_VAR} = {s:?} is not a positive number"
            ))),
        },
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let tol = verify_tolerance(std::env::var(NEG_TOL_VAR).ok().as_deref())?;
    let report = cross_validate_with_tol(args.corpus, args.seed, tol);
    println!("{report}");
    if report.passed() {
        return Ok(0);
    }
    let path = args
        .replay
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("verify-replay-{}.jsonl", args.seed)));
    let mut bytes = Vec::new();
    report.write_replay(&mut bytes)?;
    write_output(Some(&path), &bytes)?;
    println!("replay {}", path.display());
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_parsing() {
        assert_eq!(verify_tolerance(None).unwrap(), DEFAULT_TOL);
        assert_eq!(verify_tolerance(Some("1e-6")).unwrap(), 1e-6);
        assert_eq!(verify_tolerance(Some("-1")).unwrap_err().code, 2);
        assert_eq!(verify_tolerance(Some("abc")).unwrap_err().code, 2);
    }

    #[test]
    fn hierarchy_rows_carry_limits() {
        let rows = hierarchy_rows(1.5, 10).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[8].limit, f64::INFINITY);
        assert!(rows.windows(2).all(|w| w[1].e_n > w[0].e_n));
        assert!(rows.iter().all(|r| r.e_n < r.limit));
    }

    #[test]
    fn error_codes() {
        assert_eq!(Failure::from(Error::InvalidParameter("x".into())).code, 2);
        assert_eq!(Failure::from(Error::Unphysical { min_nu: 0.5 }).code, 1);
        assert_eq!(hierarchy_rows(0.5, 10).unwrap_err().code, 2);
        assert_eq!(hierarchy_rows(1.5, 1).unwrap_err().code, 2);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        fs::write(&path, "old").unwrap();
        write_output(Some(&path), b"new").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "new");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
