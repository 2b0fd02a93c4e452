//! `fdes`: build diagnosers and check diagnosability of fuzzy discrete
//! event systems stored as JSON.
//!
//! Exit codes: 0 success or diagnosable, 1 negative answer, 2 input error,
//! 3 assumption A2 violated.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdes_core::verdict::{attach_delays, check_sigma, check_type_with, oracle_check};
use fdes_core::{
    Diagnoser, Error, Execution, FailureTypeId, FdesModel, OracleBounds, OracleOutcome,
};

#[derive(Parser)]
#[command(
    name = "fdes",
    version,
    about = "Diagnosers and diagnosability for fuzzy discrete event systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file for well-formedness.
    Validate { model: PathBuf },
    /// Build the diagnoser with respect to a reference event.
    Diagnoser {
        model: PathBuf,
        #[arg(long)]
        sigma: String,
        /// Write DOT here instead of standard output.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide diagnosability of a failure type.
    Check {
        model: PathBuf,
        #[arg(long = "type")]
        failure_type: String,
        /// Restrict to one reference event.
        #[arg(long)]
        sigma: Option<String>,
        /// Ask the oracle for a delay on each diagnosable event, with these bounds.
        #[arg(long)]
        max_delay: Option<usize>,
        #[arg(long, requires = "max_delay")]
        max_len: Option<usize>,
        #[arg(long)]
        sequential: bool,
    },
    /// Test the delay definition directly on bounded trace sets.
    Oracle {
        model: PathBuf,
        #[arg(long = "type")]
        failure_type: String,
        #[arg(long)]
        sigma: String,
        #[arg(long, default_value_t = 6)]
        max_delay: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Run the diagnoser on an observed event sequence.
    Observe {
        model: PathBuf,
        #[arg(long)]
        sigma: String,
        /// Comma-separated events, possibly empty.
        #[arg(long, default_value = "")]
        trace: String,
    },
}

const NEGATIVE: u8 = 1;
const INPUT_ERROR: u8 = 2;
const A2_VIOLATED: u8 = 3;

fn load(path: &PathBuf) -> Result<FdesModel, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    FdesModel::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::A2Violated { .. } => A2_VIOLATED,
        _ => INPUT_ERROR,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_code(&e))
}

fn validate(path: &PathBuf) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(INPUT_ERROR);
        }
    };
    match FdesModel::from_json(&text) {
        Ok(m) => {
            println!(
                "valid: {} states, {} events, {} failure types",
                m.state_count(),
                m.event_count(),
                m.failure_type_count()
            );
            if !m.check_a1() {
                println!("note: some reachable state has no outgoing transition");
            }
            for e in m.events() {
                println!("A2 w.r.t. {}: {}", m.event_name(e), m.check_a2(e));
            }
            ExitCode::SUCCESS
        }
        Err(Error::InvalidModel(report)) => {
            println!("invalid:\n{report}");
            ExitCode::from(INPUT_ERROR)
        }
        Err(e) => fail(e),
    }
}

fn diagnoser(m: &FdesModel, sigma: &str, dot: Option<&PathBuf>) -> Result<ExitCode, Error> {
    let s = m.event_id(sigma)?;
    let d = Diagnoser::build(m, s)?;
    let types: Vec<FailureTypeId> = m.failure_types().collect();
    let text = d.to_dot(m, &types);
    match dot {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return Ok(ExitCode::from(INPUT_ERROR));
            }
            println!(
                "diagnoser w.r.t. {sigma}: {} states, {} edges, A2 {}",
                d.state_count(),
                d.edges().len(),
                d.a2_status()
            );
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn check(
    m: &FdesModel,
    ty: &str,
    sigma: Option<&str>,
    bounds: Option<OracleBounds>,
    exec: Execution,
) -> Result<ExitCode, Error> {
    let i = m.failure_type_id(ty)?;
    let mut report = match sigma {
        Some(s) => check_sigma(m, i, m.event_id(s)?),
        None => check_type_with(m, i, exec),
    };
    if let Some(bounds) = bounds {
        attach_delays(m, &mut report, bounds, exec)?;
    }
    println!("{}", report.to_json_pretty());
    for v in &report.per_sigma {
        if let (Some(false), Some(c)) = (v.diagnosable, &v.cycle) {
            let d = Diagnoser::build(m, v.sigma_id)?;
            eprintln!("w.r.t. {}:\n{}", v.sigma, c.describe(m, &d));
        }
        if let Some(cycle) = &v.unobserved_cycle {
            eprintln!("w.r.t. {}: A2 violated by {cycle}", v.sigma);
        }
    }
    Ok(match report.aggregate {
        Some(true) => ExitCode::SUCCESS,
        Some(false) => ExitCode::from(NEGATIVE),
        None => ExitCode::from(A2_VIOLATED),
    })
}

fn oracle(m: &FdesModel, ty: &str, sigma: &str, bounds: OracleBounds) -> Result<ExitCode, Error> {
    let outcome = oracle_check(m, m.event_id(sigma)?, m.failure_type_id(ty)?, bounds)?;
    println!("{}", outcome.to_json_pretty(m));
    Ok(match outcome {
        OracleOutcome::FailsWithWitness(_) => ExitCode::from(NEGATIVE),
        _ => ExitCode::SUCCESS,
    })
}

fn observe(m: &FdesModel, sigma: &str, trace: &str) -> Result<ExitCode, Error> {
    let d = Diagnoser::build(m, m.event_id(sigma)?)?;
    let y = m.parse_trace(trace)?;
    match d.observe(m, &y)? {
        Some(k) => {
            println!("state: {}", d.state(k).display(m));
            for i in m.failure_types() {
                println!("{}: {}", m.failure_type_name(i), d.classify(k, i));
            }
            Ok(ExitCode::SUCCESS)
        }
        None => {
            println!("undefined: no possible string produces {trace:?}");
            Ok(ExitCode::from(NEGATIVE))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Validate { model } = &cli.command {
        return validate(model);
    }
    let path = match &cli.command {
        Command::Validate { model }
        | Command::Diagnoser { model, .. }
        | Command::Check { model, .. }
        | Command::Oracle { model, .. }
        | Command::Observe { model, .. } => model,
    };
    let m = match load(path) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(INPUT_ERROR);
        }
    };
    let result = match &cli.command {
        Command::Validate { .. } => unreachable!("handled above"),
        Command::Diagnoser { sigma, dot, .. } => diagnoser(&m, sigma, dot.as_ref()),
        Command::Check {
            failure_type,
            sigma,
            max_delay,
            max_len,
            sequential,
            ..
        } => {
            let bounds = max_delay.map(|max_delay| OracleBounds {
                max_delay,
                max_len: max_len.unwrap_or(OracleBounds::default().max_len),
            });
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::default()
            };
            check(&m, failure_type, sigma.as_deref(), bounds, exec)
        }
        Command::Oracle {
            failure_type,
            sigma,
            max_delay,
            max_len,
            ..
        } => oracle(
            &m,
            failure_type,
            sigma,
            OracleBounds {
                max_delay: *max_delay,
                max_len: *max_len,
            },
        ),
        Command::Observe { sigma, trace, .. } => observe(&m, sigma, trace),
    };
    result.unwrap_or_else(fail)
}
