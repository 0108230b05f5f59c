//! Command-line runner. Exit codes: 0 success, 1 usage error, 2 input-data
//! error, 3 internal invariant violation.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::fock::{validate, TwoModeBasis};
use crate::formats::{self, fmt_f64};
use crate::multimode::{mode_identity_check, MultiModeBasis};
use crate::optics::{count_distribution, q_distribution, BeamSplitterParams, PhaseConvention};
use crate::states::{self, State, BOUNDARY_MAX, MIXTURE_MODULUS_MAX, PRNG_ID};
use crate::verify::{
    criterion_measured, scan_phase, CriterionForm, CriterionKind, CriterionReport, PhaseScan,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "homdip",
    version,
    about = "Count-based entanglement checks for photon pairs across two ports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an entanglement criterion and print the report as JSON.
    Check(CheckArgs),
    /// Scan a phase on port A and report where the measured criterion fires.
    ScanPhase(ScanArgs),
    /// Criterion sides for random separable states (CSV).
    Scatter(ScatterArgs),
    /// Verify the two-mode creation-operator identity numerically.
    IdentityCheck(IdentityArgs),
    /// Photon-count table of a state, optionally after the splitter (CSV).
    Counts(CountsArgs),
    /// Write a state in the sparse JSON format.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Ideal,
    Measured,
    Asymmetric,
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    PerPhoton,
    PerComponent,
}

impl From<CriterionArg> for CriterionKind {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Ideal => CriterionKind::IdealD,
            CriterionArg::Measured => CriterionKind::Measured,
            CriterionArg::Asymmetric => CriterionKind::Asymmetric,
            CriterionArg::Conservative => CriterionKind::Conservative,
        }
    }
}

impl From<ConventionArg> for PhaseConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::PerPhoton => PhaseConvention::PerPhoton,
            ConventionArg::PerComponent => PhaseConvention::PerFockComponent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Standard,
    PairCorrected,
    WorstCase,
}

impl From<FormArg> for CriterionForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Standard => CriterionForm::Standard,
            FormArg::PairCorrected => CriterionForm::PairCorrected,
            FormArg::WorstCase => CriterionForm::WorstCase,
        }
    }
}

fn parse_reflection(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if r > 0.0 && r < 1.0 {
        Ok(r)
    } else {
        Err(format!("r must lie strictly between 0 and 1, got {r}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateSource {
    /// Named state (hom, rho1, rho2, worst2color, vacuum) or path to a JSON state file.
    #[arg(long)]
    pub state: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Input-port counts CSV (`i,j,p`); use with --q-counts instead of --state.
    #[arg(long, conflicts_with = "state", requires = "q_counts")]
    pub p_counts: Option<PathBuf>,
    /// Splitter-output counts CSV (`i,j,p`).
    #[arg(long, requires = "p_counts")]
    pub q_counts: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "measured")]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value = "standard")]
    pub form: FormArg,
    /// Reflection coefficient for the asymmetric criterion.
    #[arg(long, value_parser = parse_reflection, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    pub r: f64,
    /// Phase applied to port A before measuring.
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, value_enum, default_value = "per-component")]
    pub phase_convention: ConventionArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u32).range(8..))]
    pub points: u32,
    #[arg(long, value_enum, default_value = "per-component")]
    pub phase_convention: ConventionArg,
    /// Curve CSV destination; without it the curve goes to stdout and the
    /// summary to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary JSON destination (default: stdout when --out is given).
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    /// Samples per family.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Debug, Clone, Args)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub modes: u32,
    /// Print `{"deviation": x}` only.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CountsArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Report counts at the splitter outputs.
    #[arg(long)]
    pub after_splitter: bool,
    #[arg(long, value_parser = parse_reflection, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    pub r: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Error carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: EXIT_DATA,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Loads a named state or a JSON file.
pub fn load_state(spec: &str) -> CliResult<State> {
    if states::NAMED_STATES.contains(&spec) {
        return Ok(states::named(spec)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError {
            code: EXIT_DATA,
            message: format!(
                "{}; no file at that path either (named states: {})",
                Error::UnknownState(spec.into()),
                states::NAMED_STATES.join(", ")
            ),
        });
    }
    let text = fs::read_to_string(path)?;
    formats::parse_state_json(&text).map_err(|e| CliError {
        code: EXIT_DATA,
        message: format!("{}: {e}", path.display()),
    })
}

fn require_state(source: &StateSource) -> CliResult<State> {
    let spec = source
        .state
        .as_deref()
        .ok_or_else(|| CliError::usage("a state source is required (--state <id|path>)"))?;
    load_state(spec)
}

pub fn cmd_check(args: &CheckArgs) -> CliResult<CriterionReport> {
    let params = BeamSplitterParams::new(args.r)?;
    let kind = CriterionKind::from(args.criterion);
    let form = CriterionForm::from(args.form);
    if let (Some(pp), Some(qp)) = (&args.p_counts, &args.q_counts) {
        if kind == CriterionKind::IdealD {
            return Err(CliError::usage(
                "the ideal-d criterion needs a full density matrix, not count data",
            ));
        }
        let p = formats::read_counts_csv(fs::File::open(pp)?)?;
        let q = formats::read_counts_csv(fs::File::open(qp)?)?;
        return Ok(states::evaluate_counts(&p, &q, kind, form, &params)?);
    }
    let state = require_state(&args.source)?;
    if let State::Multi(_) = state {
        if kind == CriterionKind::IdealD {
            return Err(CliError::usage(
                "the ideal-d criterion needs a single-mode density matrix",
            ));
        }
        if args.phi != 0.0 {
            return Err(CliError::usage(
                "--phi is only supported for single-mode states",
            ));
        }
    }
    let state = state.phase_shifted(args.phi, args.phase_convention.into())?;
    Ok(states::evaluate(&state, kind, form, &params)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalSummary {
    pub start: f64,
    pub end: f64,
    pub start_over_pi: f64,
    pub end_over_pi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub state: String,
    pub convention: PhaseConvention,
    pub points: usize,
    pub lhs: f64,
    pub max_rhs: f64,
    pub argmax_phi: f64,
    pub intervals: Vec<IntervalSummary>,
}

pub fn cmd_scan_phase(args: &ScanArgs) -> CliResult<(PhaseScan, ScanSummary)> {
    let state = require_state(&args.source)?;
    let State::Single(rho) = &state else {
        return Err(CliError::usage("phase scans need a single-mode state"));
    };
    let scan = scan_phase(rho, args.points as usize, args.phase_convention.into())?;
    let pi = std::f64::consts::PI;
    let summary = ScanSummary {
        state: args.source.state.clone().unwrap_or_default(),
        convention: scan.convention,
        points: scan.points.len(),
        lhs: scan.points.first().map(|p| p.lhs).unwrap_or(0.0),
        max_rhs: scan.points.iter().map(|p| p.rhs).fold(0.0, f64::max),
        argmax_phi: scan.argmax_phi,
        intervals: scan
            .intervals
            .iter()
            .map(|iv| IntervalSummary {
                start: iv.start,
                end: iv.end,
                start_over_pi: iv.start / pi,
                end_over_pi: iv.end / pi,
            })
            .collect(),
    };
    Ok((scan, summary))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Boundary,
    Mixture,
}

impl Family {
    fn as_str(self) -> &'static str {
        match self {
            Family::Boundary => "boundary",
            Family::Mixture => "mixture",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRow {
    pub lhs: f64,
    pub rhs: f64,
    pub family: Family,
}

/// Mixture items use streams offset by this amount so the two families never
/// share a random stream.
const MIXTURE_STREAM_OFFSET: u64 = 1 << 40;

fn scatter_row(family: Family, seed: u64, item: u64) -> crate::Result<ScatterRow> {
    let basis = TwoModeBasis::new(states::DEFAULT_N_MAX)?;
    let rho = match family {
        Family::Boundary => {
            let s = states::random_separable_boundary(basis, &mut states::item_rng(seed, item))?;
            crate::fock::pure_to_density(&s.state)?
        }
        Family::Mixture => {
            let mut rng = states::item_rng(seed, MIXTURE_STREAM_OFFSET + item);
            states::random_separable_mixture(basis, &mut rng)?.state
        }
    };
    validate(&rho).into_result()?;
    let rep = criterion_measured(
        &count_distribution(&rho),
        &q_distribution(&rho, &BeamSplitterParams::balanced())?,
    );
    Ok(ScatterRow {
        lhs: rep.lhs,
        rhs: rep.rhs,
        family,
    })
}

/// Boundary rows first, then mixture rows, each in item order.
pub fn scatter_rows(samples: usize, seed: u64) -> CliResult<Vec<ScatterRow>> {
    let jobs: Vec<(Family, u64)> = [Family::Boundary, Family::Mixture]
        .into_iter()
        .flat_map(|f| (0..samples as u64).map(move |k| (f, k)))
        .collect();
    jobs.into_par_iter()
        .map(|(f, k)| scatter_row(f, seed, k))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(|e| CliError::internal(format!("generated separable state failed: {e}")))
}

pub fn write_scatter_csv<W: Write>(
    rows: &[ScatterRow],
    args: &ScatterArgs,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "# homdip scatter")?;
    writeln!(out, "# prng={PRNG_ID}")?;
    writeln!(out, "# seed={}", args.seed)?;
    writeln!(out, "# samples_per_family={}", args.samples)?;
    writeln!(out, "# boundary: a,b uniform on [0,{BOUNDARY_MAX}]")?;
    writeln!(
        out,
        "# mixture: coefficient modulus uniform on [0,{MIXTURE_MODULUS_MAX}], phase uniform on [0,2pi), weight uniform on [0,1]"
    )?;
    if !args.reproducible {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(out, "# generated_at_unix={secs}")?;
    }
    writeln!(out, "lhs,rhs,family")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(row.lhs),
            fmt_f64(row.rhs),
            row.family.as_str()
        )?;
    }
    Ok(())
}

pub fn cmd_scatter(args: &ScatterArgs) -> CliResult<Vec<ScatterRow>> {
    scatter_rows(args.samples, args.seed)
}

pub fn cmd_identity_check(args: &IdentityArgs) -> CliResult<f64> {
    let basis = MultiModeBasis::new(args.modes as usize, 2)?;
    Ok(mode_identity_check(&basis)?)
}

const IDENTITY_NOTE: &str = "\
Two photons in orthogonal internal modes 1 and 2 of the same port are also an
equal-weight superposition of two photons sharing mode (1+2)/sqrt2 and two photons
sharing mode (1-2)/sqrt2. No local measurement can therefore single out
\"same-mode\" photon pairs; only a fixed-basis dephasing can separate them.";

fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| CliError::internal(e.to_string()))
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Check(args) => {
            let report = cmd_check(&args)?;
            emit(&args.out, to_json(&report)?.as_bytes(), stdout)
        }
        Command::ScanPhase(args) => {
            let (scan, summary) = cmd_scan_phase(&args)?;
            let mut csv = Vec::new();
            formats::write_scan_csv(&scan, &mut csv)?;
            let summary_json = to_json(&summary)?;
            match (&args.out, &args.summary) {
                (Some(path), _) => fs::write(path, &csv)?,
                (None, _) => stdout.write_all(&csv)?,
            }
            match (&args.out, &args.summary) {
                (_, Some(path)) => fs::write(path, summary_json)?,
                (Some(_), None) => stdout.write_all(summary_json.as_bytes())?,
                (None, None) => stderr.write_all(summary_json.as_bytes())?,
            }
            Ok(())
        }
        Command::Scatter(args) => {
            let rows = cmd_scatter(&args)?;
            let mut buf = Vec::new();
            write_scatter_csv(&rows, &args, &mut buf)?;
            emit(&args.out, &buf, stdout)
        }
        Command::IdentityCheck(args) => {
            let deviation = cmd_identity_check(&args)?;
            if args.json {
                writeln!(stdout, "{}", serde_json::json!({ "deviation": deviation }))?;
            } else {
                writeln!(stdout, "modes: {}", args.modes)?;
                writeln!(stdout, "deviation: {deviation:e}")?;
                writeln!(stdout, "{IDENTITY_NOTE}")?;
            }
            if deviation >= 1e-12 {
                return Err(CliError::internal(format!(
                    "identity deviation {deviation:e}"
                )));
            }
            Ok(())
        }
        Command::Counts(args) => {
            let state = require_state(&args.source)?;
            let params = BeamSplitterParams::new(args.r)?;
            let (p, q) = state.counts(&params)?;
            let mut buf = Vec::new();
            formats::write_counts_csv(if args.after_splitter { &q } else { &p }, &mut buf)?;
            emit(&args.out, &buf, stdout)
        }
        Command::Export(args) => {
            let state = require_state(&args.source)?;
            let mut json = formats::state_to_json(&state)?;
            json.push('\n');
            emit(&args.out, json.as_bytes(), stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}
