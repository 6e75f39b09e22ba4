//! The `bkforms` command-line front end.
//!
//! Exit codes: 0 success (and "equivalent"/"isomorphic" for `classify`),
//! 1 "not equivalent" or a failed self-test, 2 "unknown"/"path degenerate",
//! 3 a mathematical precondition failed (invalid form, not symplectic, not
//! positively oriented, …), 4 unreadable input or bad usage.

pub mod report;
pub mod selftest;
pub mod spec;

use std::ffi::OsString;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::bk_forms::{iota_l, laurent_normal_form, BkSurfaceForm, FormError};
use crate::classify::{
    bk_symplectomorphic, ll_decomposition, poisson_isomorphic_bk_type, ClassifyError,
    PoissonVerdict, SymplectoVerdict,
};
use crate::normalize::{poly_pick, principal_coefficients, NormalizeError, ResidueVector};
use crate::series::DEFAULT_ORDER;
use crate::volume::{
    asymptotic_gap, gaps_nonincreasing, volume_polynomial, VolumeError, DEFAULT_EPS_GRID,
};

use report::{CircleNormalForm, Classification, Normalization, Report};
use spec::{torus_two_circles, FormSpec, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_DOMAIN_ERROR: i32 = 3;
pub const EXIT_INPUT_ERROR: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Spec { path: String, source: SpecError },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Volume(#[from] VolumeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. }
            | CliError::Usage(_)
            | CliError::Spec {
                source: SpecError::Json(_),
                ..
            } => EXIT_INPUT_ERROR,
            _ => EXIT_DOMAIN_ERROR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Symplecto,
    Poisson,
}

#[derive(Debug, Parser)]
#[command(
    name = "bkforms",
    version,
    about = "Laurent normal forms, volume polynomials and classification of b^k-forms on surfaces"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Tolerance for invariant comparisons.
    #[arg(long, default_value_t = 1e-8, global = true)]
    pub tol: f64,
    /// Truncation order of series computations.
    #[arg(long, default_value_t = DEFAULT_ORDER, global = true)]
    pub order: usize,
    /// Cutoff values for the asymptotic gap table, comma separated.
    #[arg(long, value_delimiter = ',', global = true)]
    pub eps_grid: Option<Vec<f64>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laurent normal form, ι_L and residue integrals.
    Decompose(InputArgs),
    /// Volume polynomial, Liouville volume and asymptotic gaps.
    Volume(InputArgs),
    /// Decide equivalence of two forms.
    Classify {
        /// First spec file (`-` for stdin).
        spec0: String,
        /// Second spec file (`-` for stdin).
        spec1: String,
        #[arg(long, value_enum, default_value_t = Mode::Symplecto)]
        mode: Mode,
    },
    /// Normalizing polynomial for a residue vector.
    Normalize {
        /// `a_{−1}, …, a_{−k}`, comma separated, with `a_{−k} > 0`.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        residues: Vec<f64>,
    },
    /// Run the built-in invariant checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Where a form comes from: a spec file, stdin, or the torus generator.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Spec file; `-` or absent reads stdin.
    pub spec: Option<String>,
    /// Generate the torus with two singular circles and this pole order.
    #[arg(long, value_name = "K", conflicts_with = "spec")]
    pub torus: Option<u32>,
    /// Constant coefficients of `A` on `Z1` (generator only).
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    pub z1: Vec<f64>,
    /// Constant coefficients of `A` on `Z2` (generator only).
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    pub z2: Vec<f64>,
    /// Collar half-width (generator only).
    #[arg(long, default_value_t = 0.25)]
    pub half_width: f64,
    /// Bulk integral (generator only).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bulk: f64,
    /// Print the resolved spec instead of running the command.
    #[arg(long)]
    pub emit_spec: bool,
}

/// Output of one command run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

fn read_source(path: &str) -> Result<String, CliError> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(PathBuf::from(path)).map_err(io_err)
    }
}

fn load_form(path: &str) -> Result<BkSurfaceForm, CliError> {
    let text = read_source(path)?;
    FormSpec::load(&text).map_err(|source| CliError::Spec {
        path: path.to_string(),
        source,
    })
}

fn resolve_spec(input: &InputArgs) -> Result<(String, FormSpec), CliError> {
    if let Some(k) = input.torus {
        if k == 0 {
            return Err(CliError::Usage("--torus needs a pole order of at least 1".into()));
        }
        let spec = torus_two_circles(k, &input.z1, &input.z2, input.half_width, input.bulk);
        return Ok(("<torus>".into(), spec));
    }
    let path = input.spec.clone().unwrap_or_else(|| "-".into());
    let text = read_source(&path)?;
    let spec = FormSpec::parse(&text).map_err(|source| CliError::Spec {
        path: path.clone(),
        source,
    })?;
    Ok((path, spec))
}

fn resolve_form(input: &InputArgs) -> Result<BkSurfaceForm, CliError> {
    let (path, spec) = resolve_spec(input)?;
    spec.to_form()
        .map_err(|source| CliError::Spec { path, source })
}

pub fn cmd_decompose(form: &BkSurfaceForm) -> Result<Report, CliError> {
    let lnf = laurent_normal_form(form)?;
    iota_l(form)?;
    let mut report = Report::new("decompose");
    report.descriptor = Some(form.descriptor().to_string());
    report.k = Some(form.pole_order());
    report.normal_form = Some(lnf.circles.iter().map(CircleNormalForm::from_data).collect());
    Ok(report)
}

pub fn cmd_volume(form: &BkSurfaceForm, eps_grid: &[f64]) -> Result<Report, CliError> {
    let poly = volume_polynomial(form)?;
    let mut report = Report::new("volume");
    report.descriptor = Some(form.descriptor().to_string());
    report.k = Some(form.pole_order());
    report.volume_polynomial = Some(poly.coefficients());
    report.liouville_volume = Some(poly.constant_term());
    let min_width = form
        .collars()
        .iter()
        .map(|c| c.half_width())
        .fold(f64::INFINITY, f64::min);
    let grid: Vec<f64> = eps_grid.iter().copied().filter(|&e| e < min_width).collect();
    if grid.len() != eps_grid.len() {
        return Err(VolumeError::EpsilonOutOfRange {
            eps: eps_grid.iter().copied().find(|&e| !(e < min_width)).unwrap_or(f64::NAN),
            max: min_width,
        }
        .into());
    }
    let rows = asymptotic_gap(form, &grid)?;
    report.gaps_nonincreasing = Some(gaps_nonincreasing(&rows));
    report.asymptotic_gaps = Some(rows);
    Ok(report)
}

pub fn cmd_classify(
    f0: &BkSurfaceForm,
    f1: &BkSurfaceForm,
    mode: Mode,
    tol: f64,
) -> Result<Outcome, CliError> {
    let (verdict, exit_code, mode_name) = match mode {
        Mode::Symplecto => {
            let v = bk_symplectomorphic(f0, f1, tol)?;
            let code = match v {
                SymplectoVerdict::Equivalent => EXIT_OK,
                SymplectoVerdict::NotEquivalent => EXIT_NEGATIVE,
                SymplectoVerdict::PathDegenerate => EXIT_UNDECIDED,
            };
            (format!("{v:?}"), code, "symplecto")
        }
        Mode::Poisson => {
            let v = poisson_isomorphic_bk_type(f0, f1, tol)?;
            let code = match v {
                PoissonVerdict::Isomorphic => EXIT_OK,
                PoissonVerdict::Unknown => EXIT_UNDECIDED,
            };
            (format!("{v:?}"), code, "poisson")
        }
    };
    let mut report = Report::new("classify");
    report.k = Some(f0.pole_order());
    report.classification = Some(Classification {
        mode: mode_name.into(),
        tol,
        verdict,
        exit_code,
        invariants: vec![ll_decomposition(f0)?, ll_decomposition(f1)?],
    });
    Ok(Outcome { report, exit_code })
}

pub fn cmd_normalize(residues: &[f64], order: usize) -> Result<Report, CliError> {
    let a = ResidueVector::new(residues.to_vec())?;
    let p = poly_pick(&a, order)?;
    let mut report = Report::new("normalize");
    report.k = Some(a.k());
    report.normalization = Some(Normalization {
        residues: residues.to_vec(),
        order,
        expansion: principal_coefficients(&a, &p)?,
        polynomial: p.coeffs().to_vec(),
    });
    Ok(report)
}

pub fn cmd_selftest(seed: u64) -> Outcome {
    let checks = selftest::run(seed);
    let exit_code = if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let mut report = Report::new("selftest");
    report.selftest = Some(checks);
    Outcome { report, exit_code }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let grid = cli.eps_grid.clone().unwrap_or_else(|| DEFAULT_EPS_GRID.to_vec());
    let plain = |report| Outcome {
        report,
        exit_code: EXIT_OK,
    };
    match &cli.command {
        Command::Decompose(input) => Ok(plain(cmd_decompose(&resolve_form(input)?)?)),
        Command::Volume(input) => Ok(plain(cmd_volume(&resolve_form(input)?, &grid)?)),
        Command::Classify { spec0, spec1, mode } => {
            if spec0 == "-" && spec1 == "-" {
                return Err(CliError::Usage("only one spec can come from stdin".into()));
            }
            cmd_classify(&load_form(spec0)?, &load_form(spec1)?, *mode, cli.tol)
        }
        Command::Normalize { residues } => Ok(plain(cmd_normalize(residues, cli.order)?)),
        Command::Selftest { seed } => Ok(cmd_selftest(*seed)),
    }
}

fn render(cli: &Cli, report: &Report) -> String {
    match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    }
}

/// Full entry point: parses `args`, writes to `out`/`err`, returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    if let Command::Decompose(input) | Command::Volume(input) = &cli.command {
        if input.emit_spec {
            return match resolve_spec(input) {
                Ok((_, spec)) => {
                    let _ = out.write_all(report::to_canonical_json(&spec).as_bytes());
                    EXIT_OK
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    e.exit_code()
                }
            };
        }
    }
    match execute(&cli) {
        Ok(outcome) => {
            let _ = out.write_all(render(&cli, &outcome.report).as_bytes());
            outcome.exit_code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
