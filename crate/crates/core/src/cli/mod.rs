//! Command-line front end.
//!
//! ```text
//! tsteer analyze --in state.json --out report.json
//! tsteer sweep   --res N --out sweep.csv
//! tsteer scatter --samples N --seed S --out scatter.csv
//! tsteer bounds  --out bounds.csv [--geometry axes.json ...]
//! tsteer verify  --seed S
//! ```
//!
//! Every subcommand also takes `--config file.toml` whose keys mirror the
//! long flags (`in`, `out`, `seed`, `samples`, `res`, `target_rel_err`,
//! `geometry`); flags given on the command line win. Without `--out`,
//! results go to stdout.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 parse or usage error,
//! 3 input is not a T state, 4 quadrature did not converge, 5 a verification
//! check failed. Failures print one JSON line with a `reason` field to stderr.

mod output;
mod scatter;
mod state_file;
mod sweep;
mod verify;

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{build_grid, Scheme};
use crate::steering::{
    catalog, finite_bound, infinite_bound, singular_spectrum, MeasurementGeometry, SteeringReport,
    ViolationSolver, DEFAULT_TARGET_REL_ERR,
};
use crate::quantum_state::correlation_matrix;

pub use output::{csv_text, format_decimal, sibling, CSV_SIGNIFICANT_DIGITS};
pub use scatter::{
    scatter, ScatterOutcome, ScatterPoint, ScatterSummary, BAND_SLACK, SHARD_SIZE, STEERING_CONCURRENCE,
};
pub use state_file::{FamilySpec, StateSpec};
pub use sweep::{
    bisect_transition, entanglement_boundary, steering_boundary, sweep_grid, sweep_point, sweep_records,
    Phase, SweepRecord, Transition, CONCURRENCE_FLOOR, PHASE_ROUNDOFF,
};
pub use verify::{run_suites, violation_upper_estimate, Fault, SuiteOutcome, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_T_STATE: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;
pub const EXIT_VERIFY_FAILED: i32 = 5;

/// Target used by `scatter` unless overridden.
pub const SCATTER_TARGET_REL_ERR: f64 = 1e-7;
pub const DEFAULT_SAMPLES: usize = 50_000;
pub const DEFAULT_RESOLUTION: usize = 101;
pub const DEFAULT_SEED: u64 = 1;
/// Loosest accepted target.
pub const MAX_TARGET_REL_ERR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Sweep,
    Scatter,
    Bounds,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Analyze => "analyze",
            Command::Sweep => "sweep",
            Command::Scatter => "scatter",
            Command::Bounds => "bounds",
            Command::Verify => "verify",
        })
    }
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub samples: usize,
    pub grid_resolution: usize,
    pub target_rel_err: f64,
    /// Extra geometry files for `bounds`.
    pub geometry_paths: Vec<PathBuf>,
    pub fault: Option<Fault>,
}

impl RunConfig {
    /// Defaults for `command`; `scatter` uses a looser target than single analyses.
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input_path: None,
            output_path: None,
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            grid_resolution: DEFAULT_RESOLUTION,
            target_rel_err: if command == Command::Scatter {
                SCATTER_TARGET_REL_ERR
            } else {
                DEFAULT_TARGET_REL_ERR
            },
            geometry_paths: Vec::new(),
            fault: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 1 {
            return domain("samples must be at least 1");
        }
        if self.grid_resolution < 2 {
            return domain(format!("grid resolution must be at least 2, got {}", self.grid_resolution));
        }
        if !(self.target_rel_err > 0.0 && self.target_rel_err <= MAX_TARGET_REL_ERR) {
            return domain(format!(
                "target_rel_err must lie in (0, {MAX_TARGET_REL_ERR}], got {}",
                self.target_rel_err
            ));
        }
        Ok(())
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(p) = &o.input {
            self.input_path = Some(p.clone());
        }
        if let Some(p) = &o.out {
            self.output_path = Some(p.clone());
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(n) = o.samples {
            self.samples = n;
        }
        if let Some(r) = o.res {
            self.grid_resolution = r;
        }
        if let Some(t) = o.target_rel_err {
            self.target_rel_err = t;
        }
        if !o.geometry.is_empty() {
            self.geometry_paths = o.geometry.clone();
        }
        if o.inject_fault.is_some() {
            self.fault = o.inject_fault;
        }
    }
}

/// Settings shared by the flags and the config file.
#[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// State file (analyze)
    #[arg(long = "in", value_name = "PATH")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    /// Output file; stdout when omitted
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid points per axis (sweep)
    #[arg(long)]
    pub res: Option<usize>,
    /// Relative accuracy of the sphere quadrature
    #[arg(long)]
    pub target_rel_err: Option<f64>,
    /// Extra JSON list of measurement axes (bounds); repeatable
    #[arg(long, value_name = "PATH")]
    #[serde(default)]
    pub geometry: Vec<PathBuf>,
    #[arg(long, hide = true, value_enum)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Args)]
pub struct CommandArgs {
    /// TOML file with the same keys as the flags
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub flags: Overrides,
}

#[derive(Debug, Clone, Subcommand)]
pub enum CliCommand {
    /// Steering report for one state
    Analyze(CommandArgs),
    /// Phase diagram of phase-damped Werner states
    Sweep(CommandArgs),
    /// Concurrence against maximum violation for random Bell-diagonal states
    Scatter(CommandArgs),
    /// Finite-setting bounds C_N
    Bounds(CommandArgs),
    /// Seeded property suites
    Verify(CommandArgs),
}

#[derive(Debug, Clone, Parser)]
#[command(name = "tsteer", version, about = "Steerability of two-qubit T states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

impl Cli {
    /// Merges defaults, the config file and the flags, in that order.
    pub fn resolve(&self) -> Result<RunConfig> {
        let (command, args) = match &self.command {
            CliCommand::Analyze(a) => (Command::Analyze, a),
            CliCommand::Sweep(a) => (Command::Sweep, a),
            CliCommand::Scatter(a) => (Command::Scatter, a),
            CliCommand::Bounds(a) => (Command::Bounds, a),
            CliCommand::Verify(a) => (Command::Verify, a),
        };
        let mut config = RunConfig::new(command);
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path)?;
            let file: Overrides =
                toml::from_str(&text).map_err(|e| Error::Parse(format!("config file: {e}")))?;
            config.apply(&file);
        }
        config.apply(&args.flags);
        config.validate()?;
        Ok(config)
    }
}

/// What `analyze` writes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    #[serde(flatten)]
    pub report: SteeringReport,
    pub singular_values: [f64; 3],
    pub target_rel_err: f64,
}

pub fn analyze_state(spec: &StateSpec, target_rel_err: f64) -> Result<AnalyzeReport> {
    let rho = spec.build()?;
    let report = ViolationSolver::new(target_rel_err)?.verdict(&rho)?;
    Ok(AnalyzeReport {
        report,
        singular_values: singular_spectrum(&correlation_matrix(&rho)).as_array(),
        target_rel_err,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn cmd_analyze(config: &RunConfig) -> Result<AnalyzeReport> {
    let input = config
        .input_path
        .as_deref()
        .ok_or_else(|| Error::Parse("analyze needs --in".into()))?;
    let report = analyze_state(&StateSpec::load(input)?, config.target_rel_err)?;
    output::emit(config.output_path.as_deref(), &to_json(&report))?;
    Ok(report)
}

fn write_plot(csv_path: Option<&Path>, script: impl Fn(&str) -> String) -> Result<()> {
    if let Some(p) = csv_path {
        let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        std::fs::write(sibling(p, "plot.py"), script(&name))?;
    }
    Ok(())
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    csv_text(
        &SweepRecord::HEADER,
        records.iter().map(|r| {
            [
                format_decimal(r.alpha),
                format_decimal(r.eta),
                format_decimal(r.f_value),
                format_decimal(r.concurrence),
                r.phase.to_string(),
            ]
        }),
    )
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Vec<SweepRecord>> {
    let records = sweep_records(config.grid_resolution, config.target_rel_err)?;
    output::emit(config.output_path.as_deref(), &sweep_csv(&records))?;
    write_plot(config.output_path.as_deref(), sweep::plot_script)?;
    Ok(records)
}

pub fn scatter_csv(points: &[ScatterPoint]) -> String {
    csv_text(
        &ScatterPoint::HEADER,
        points.iter().map(|p| [format_decimal(p.concurrence), format_decimal(p.f_value)]),
    )
}

/// Writes the CSV, its plot script and `<out>.summary.json`; the summary also goes to stderr.
pub fn cmd_scatter(config: &RunConfig) -> Result<ScatterSummary> {
    let outcome = scatter(config.samples, config.seed, config.target_rel_err)?;
    output::emit(config.output_path.as_deref(), &scatter_csv(&outcome.points))?;
    write_plot(config.output_path.as_deref(), scatter::plot_script)?;
    let summary_json = serde_json::to_string(&outcome.summary).expect("summary serializes");
    if let Some(p) = &config.output_path {
        std::fs::write(sibling(p, "summary.json"), to_json(&outcome.summary))?;
    }
    eprintln!("{summary_json}");
    Ok(outcome.summary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub geometry: String,
    /// `None` for the infinite-measurement limit.
    pub n: Option<usize>,
    pub c_n: f64,
}

impl BoundRow {
    pub const HEADER: [&'static str; 3] = ["geometry", "n", "c_n"];
}

/// Hemisphere grid order used for the infinite-measurement row.
pub const LIMIT_GRID_ORDER: usize = 64;

pub fn bound_rows(extra: &[MeasurementGeometry]) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::new();
    for g in catalog().iter().chain(extra) {
        rows.push(BoundRow {
            geometry: g.name.clone(),
            n: Some(g.len()),
            c_n: finite_bound(g)?,
        });
    }
    rows.push(BoundRow {
        geometry: "limit".into(),
        n: None,
        c_n: infinite_bound(&build_grid(Scheme::HemisphereGauss, LIMIT_GRID_ORDER)?),
    });
    Ok(rows)
}

pub fn bounds_csv(rows: &[BoundRow]) -> String {
    csv_text(
        &BoundRow::HEADER,
        rows.iter().map(|r| {
            [
                r.geometry.clone(),
                r.n.map_or_else(|| "inf".to_string(), |n| n.to_string()),
                format_decimal(r.c_n),
            ]
        }),
    )
}

pub fn cmd_bounds(config: &RunConfig) -> Result<Vec<BoundRow>> {
    let extra = config
        .geometry_paths
        .iter()
        .map(|p| MeasurementGeometry::load(p))
        .collect::<Result<Vec<_>>>()?;
    let rows = bound_rows(&extra)?;
    output::emit(config.output_path.as_deref(), &bounds_csv(&rows))?;
    Ok(rows)
}

pub fn cmd_verify(config: &RunConfig) -> Result<VerifyReport> {
    let report = run_suites(config.seed, config.target_rel_err, config.fault)?;
    output::emit(config.output_path.as_deref(), &to_json(&report))?;
    Ok(report)
}

/// Exit code for an error, following the table in the module docs.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::Parse(_) | Error::Domain(_) | Error::InvalidState(_) => EXIT_PARSE,
        Error::NotTState(_) => EXIT_NOT_T_STATE,
        Error::Convergence { .. } => EXIT_CONVERGENCE,
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::Io(_) => "io",
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::InvalidState(_) => "invalid-state",
        Error::NotTState(_) => "not-t-state",
        Error::Convergence { .. } => "convergence",
    }
}

/// One-line JSON for stderr.
pub fn error_line(err: &Error) -> String {
    serde_json::json!({
        "error": error_kind(err),
        "exit_code": exit_code(err),
        "reason": err.to_string(),
    })
    .to_string()
}

/// Runs a resolved configuration and returns the process exit code.
pub fn execute(config: &RunConfig) -> i32 {
    let result = match config.command {
        Command::Analyze => cmd_analyze(config).map(|_| EXIT_OK),
        Command::Sweep => cmd_sweep(config).map(|_| EXIT_OK),
        Command::Scatter => cmd_scatter(config).map(|s| if s.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED }),
        Command::Bounds => cmd_bounds(config).map(|_| EXIT_OK),
        Command::Verify => cmd_verify(config).map(|r| if r.passed { EXIT_OK } else { EXIT_VERIFY_FAILED }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("{}", error_line(&e));
        exit_code(&e)
    })
}

/// Parses `args` (program name first) and runs; clap handles `--help` itself.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.resolve() {
        Ok(config) => execute(&config),
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}
