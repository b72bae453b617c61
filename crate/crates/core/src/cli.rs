//! Command-line front end.
//!
//! Exit codes: 0 success, 1 violated inequality or failed check, 2 usage or
//! input error. JSON arguments may be given inline or as `@path`.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{tail_mass, QuantumState};
use crate::gauges::{evaluate, BoundConstants, GaugeReport};
use crate::moments::{summarize, MomentSummary};
use crate::output::to_json;
use crate::states::{BuildContext, ComplexJson, StateRegistry, StateSpec, DEFAULT_MAX_CUTOFF};
use crate::verify::{calibrate, rel_gap_statistic, sweep, FigureRegistry, GapStatistic, SweepConfig};

pub const MAX_CUTOFF_ENV: &str = "FOCKGAUGE_MAX_CUTOFF";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fockgauge", version, about = "Number-quadrature uncertainty bounds and nonclassicality gauges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a state and print its metadata.
    State {
        /// State spec JSON, or @path.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        dump_amplitudes: bool,
    },
    /// Print the moment summary of a state.
    Moments {
        #[arg(long)]
        spec: String,
    },
    /// Evaluate every bound and gauge.
    Gauge(GaugeArgs),
    /// Run a seeded random-ensemble sweep.
    Sweep {
        #[arg(long)]
        config: String,
    },
    /// Derive the bound constants from coherent anchors.
    Calibrate,
    /// Write a figure data table as CSV.
    Figure {
        #[arg(long)]
        which: String,
        #[arg(long)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GaugeArgs {
    /// State spec JSON, or @path.
    #[arg(long)]
    spec: Option<String>,
    /// Moment summary JSON, or @path.
    #[arg(long)]
    moments: Option<String>,
}

#[derive(Serialize)]
struct StateOutput {
    kind: String,
    pure: bool,
    exact: bool,
    cutoff: usize,
    tail_mass: f64,
    truncation_warning: bool,
    diagnostics: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<ComplexJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    populations: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct FigureOutput {
    which: String,
    resolution: usize,
    rows: usize,
    columns: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rel_gap: Option<GapStatistic>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) | Error::Calibration(_) | Error::NonphysicalMoments(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn read_arg(value: &str) -> Result<String> {
    match value.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Ok(value.to_string()),
    }
}

fn build_context() -> Result<BuildContext> {
    let max_cutoff = match std::env::var(MAX_CUTOFF_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::param(MAX_CUTOFF_ENV, format!("expected a positive integer, got '{v}'")))?,
        Err(_) => DEFAULT_MAX_CUTOFF,
    };
    Ok(BuildContext { max_cutoff })
}

fn build_state(spec_arg: &str) -> Result<(StateSpec, crate::states::BuiltState)> {
    let spec = StateSpec::parse(&read_arg(spec_arg)?)?;
    let built = StateRegistry::with_builtin().build(&spec, &build_context()?)?;
    Ok((spec, built))
}

fn constants() -> Result<BoundConstants> {
    Ok(calibrate()?.constants())
}

fn state_output(spec: StateSpec, built: crate::states::BuiltState, dump: bool) -> StateOutput {
    let state = &built.state;
    let cutoff = state.cutoff();
    let (amplitudes, populations) = match (dump, state) {
        (false, _) => (None, None),
        (true, QuantumState::Pure(psi)) => (Some(psi.amplitudes().iter().map(|&c| c.into()).collect()), None),
        (true, QuantumState::Mixed(_)) => (None, Some(state.probabilities())),
    };
    StateOutput {
        kind: spec.kind,
        pure: matches!(state, QuantumState::Pure(_)),
        exact: state.is_exact(),
        cutoff,
        tail_mass: tail_mass(state, cutoff.saturating_sub(3)),
        truncation_warning: state.truncation_warning(),
        diagnostics: built.diagnostics,
        amplitudes,
        populations,
    }
}

/// Allowed negative slack before a gauge record counts as violated.
pub const VIOLATION_TOL: f64 = 1e-9;

fn violated_records(report: &GaugeReport) -> Vec<&'static str> {
    let c = &report.constraints;
    let mut records = vec![
        ("canonical_x", report.canonical_pair.x.slack),
        ("canonical_p", report.canonical_pair.p.slack),
        ("covariance_floor", c.covariance_floor.slack),
        ("uncertainty_area", c.uncertainty_area.slack),
        ("fourth_order", c.fourth_order.slack),
        ("relaxed_lambda_plus", report.relaxed_lambda_plus.slack),
        ("relaxed_trace", report.relaxed_trace.slack),
    ];
    if report.tight.applicable {
        records.push(("tight", report.tight.slack));
    }
    records
        .into_iter()
        .filter(|&(_, slack)| slack.is_nan() || slack < -VIOLATION_TOL)
        .map(|(name, _)| name)
        .collect()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::State { spec, dump_amplitudes } => {
            let (spec, built) = build_state(&spec)?;
            writeln!(out, "{}", to_json(&state_output(spec, built, dump_amplitudes)))?;
        }
        Command::Moments { spec } => {
            let (_, built) = build_state(&spec)?;
            writeln!(out, "{}", to_json(&summarize(&built.state)?))?;
        }
        Command::Gauge(args) => {
            let summary = match (args.spec, args.moments) {
                (Some(spec), _) => summarize(&build_state(&spec)?.1.state)?,
                (None, Some(m)) => MomentSummary::parse(&read_arg(&m)?)?,
                (None, None) => unreachable!("clap requires one of --spec/--moments"),
            };
            let report = evaluate(&summary, &constants()?)?;
            writeln!(out, "{}", to_json(&report))?;
            let violated = violated_records(&report);
            if !violated.is_empty() {
                writeln!(err, "violated: {}", violated.join(", "))?;
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Sweep { config } => {
            let config = SweepConfig::parse(&read_arg(&config)?)?;
            let report = sweep(&config, &constants()?)?;
            writeln!(out, "{}", to_json(&report))?;
            writeln!(err, "wall_time: {:.3} s", report.wall_time)?;
            if !report.passed {
                writeln!(err, "violated: {}", report.violated().join(", "))?;
                return Ok(EXIT_VIOLATION);
            }
        }
        Command::Calibrate => {
            writeln!(out, "{}", to_json(&calibrate()?))?;
        }
        Command::Figure { which, resolution, out: path } => {
            let table = FigureRegistry::with_builtin().emit(&which, resolution, &constants()?)?;
            std::fs::write(&path, table.to_csv())?;
            let summary = FigureOutput {
                which,
                resolution,
                rows: table.rows.len(),
                columns: table.header.clone(),
                rel_gap: rel_gap_statistic(&table),
            };
            writeln!(out, "{}", to_json(&summary))?;
        }
    }
    Ok(EXIT_OK)
}

/// Runs the CLI on `argv` (program name first), writing to the given sinks.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs the CLI on `argv` against standard output and standard error.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
