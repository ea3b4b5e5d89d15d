//! Command-line front end.
//!
//! Exit codes: 0 success, 1 regression failure, 2 infeasible, 3 singularities
//! clamped, 64 usage, 65 schema mismatch, 66 I/O, 70 solver failure.

mod config;
mod output;
mod regress;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

pub use config::{coarse_step_warning, resolve, validate, ConfigFile, FieldKind, Format, Overrides, RunConfig, ScenarioKind};
pub use output::{format_value, is_flag_column, write_csv, write_json, EventsFile, JsonReport, Metadata, Table};
pub use regress::{regress, ColumnDiff, RegressReport};

use crate::scenarios::{
    decreasing_field_result, run_cd_check, run_decreasing_field, run_invariant_check, run_two_level, run_two_spin, CheckScenario,
    DecreasingFieldScenario, EventRecord, FieldEnvelope, Outcome, ScenarioResult, TwoLevelScenario, TwoSpinScenario,
};
use crate::ffscale::MagnificationProtocol;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REGRESSION: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CLAMPED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SCHEMA: i32 = 65;
pub const EXIT_IO: i32 = 66;
pub const EXIT_SOFTWARE: i32 = 70;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("solver: {0}")]
    Solver(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Schema(_) => EXIT_SCHEMA,
            Self::Io(_) => EXIT_IO,
            Self::Solver(_) => EXIT_SOFTWARE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fastforward", version, about = "Fast-forward scaling of quantum dynamics", args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare CSV outputs of two runs column by column.
    Regress(RegressArgs),
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    pub golden: PathBuf,
    pub fresh: PathBuf,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
}

#[derive(Debug, Default, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    #[arg(long)]
    pub alpha_bar: Option<f64>,
    #[arg(long)]
    pub t0: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Keep `v0` in the driving potential.
    #[arg(long)]
    pub no_gauge: bool,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any subset of the run settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Envelope for the decreasing-field scenario.
    #[arg(long, value_enum)]
    pub field: Option<FieldKind>,
}

impl RunArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            scenario: self.scenario,
            alpha_bar: self.alpha_bar,
            t0: self.t0,
            omega: self.omega,
            dt: self.dt,
            no_gauge: self.no_gauge,
            output_dir: self.out.clone(),
            format: self.format,
            field: self.field,
        }
    }
}

/// Resolves flags and the optional config file into a validated [`RunConfig`].
pub fn parse_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let file = args.config.as_deref().map(ConfigFile::read).transpose()?;
    resolve(&args.overrides(), file.as_ref())
}

fn envelope(kind: FieldKind) -> FieldEnvelope<f64> {
    match kind {
        FieldKind::Exp => FieldEnvelope::Exponential { tau: 10.0 },
        FieldKind::Power => FieldEnvelope::Power { tau: 1e-4, p: 4.0 },
        FieldKind::Linear => FieldEnvelope::Linear,
        FieldKind::Constant => FieldEnvelope::Constant(1.0),
    }
}

/// Runs the configured scenario in memory.
pub fn run_scenario(cfg: &RunConfig) -> crate::Result<ScenarioResult> {
    let two_level = TwoLevelScenario { omega: cfg.omega, alpha_bar: cfg.alpha_bar, t0: cfg.t0, dt: cfg.dt, gauge_eliminate: cfg.gauge_eliminate_v0 };
    match cfg.scenario {
        ScenarioKind::TwoLevel => run_two_level(&two_level),
        ScenarioKind::TwoSpin => run_two_spin(&TwoSpinScenario {
            omega: cfg.omega,
            alpha_bar: cfg.alpha_bar,
            t0: cfg.t0,
            dt: cfg.dt,
            gauge_eliminate: cfg.gauge_eliminate_v0,
        }),
        ScenarioKind::CdCheck => run_cd_check(&CheckScenario { ..two_level }),
        ScenarioKind::InvariantCheck => run_invariant_check(&CheckScenario { ..two_level }),
        ScenarioKind::DecreasingField => {
            let p = MagnificationProtocol::new(cfg.alpha_bar, cfg.t0)?;
            let s = DecreasingFieldScenario {
                envelope: envelope(cfg.field),
                omega: cfg.omega,
                dt: cfg.dt,
                t_end: cfg.t0.max(std::f64::consts::FRAC_PI_2 / cfg.omega),
            };
            Ok(decreasing_field_result(&run_decreasing_field(&s, &p)?))
        }
    }
}

fn exit_code(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Completed => EXIT_OK,
        Outcome::Clamped => EXIT_CLAMPED,
        Outcome::Infeasible => EXIT_INFEASIBLE,
    }
}

/// Runs the scenario and writes `<scenario>.csv` (or `.json`) and `events.json`.
pub fn execute(cfg: &RunConfig) -> Result<i32, CliError> {
    validate(cfg)?;
    let start = Instant::now();
    let result = match run_scenario(cfg) {
        Ok(r) => r,
        Err(Error::Infeasible { t, reason }) => {
            let mut r = ScenarioResult::new(cfg.scenario.name());
            r.events.push(EventRecord::Infeasible { time: t, reason });
            r.outcome = Outcome::Infeasible;
            r
        }
        Err(e @ (Error::InvalidProtocol(_) | Error::InvalidGrid(_))) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(CliError::Solver(e)),
    };
    let metadata = Metadata { config: cfg.clone(), version: env!("CARGO_PKG_VERSION").into(), wall_time_s: start.elapsed().as_secs_f64() };
    let dir = &cfg.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let stem = cfg.scenario.name();
    if !result.columns.is_empty() {
        match cfg.format {
            Format::Csv => write_csv(&dir.join(format!("{stem}.csv")), &result)?,
            Format::Json => write_json(&dir.join(format!("{stem}.json")), &JsonReport { metadata: metadata.clone(), result: result.clone() })?,
        }
    }
    let events = EventsFile { metadata, outcome: result.outcome, events: result.events.clone(), diagnostics: result.diagnostics.clone() };
    write_json(&dir.join("events.json"), &events)?;
    Ok(exit_code(result.outcome))
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Some(Command::Regress(r)) => regress(&r.golden, &r.fresh, r.tol).map(|rep| {
            println!("{rep}");
            if rep.passed() { EXIT_OK } else { EXIT_REGRESSION }
        }),
        None => parse_config(&cli.run).and_then(|cfg| {
            if let Some(w) = coarse_step_warning(&cfg) {
                eprintln!("{w}");
            }
            execute(&cfg)
        }),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("fastforward: {e}");
        e.exit_code()
    })
}
