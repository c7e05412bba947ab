//! The `bssbp` command line.
//!
//! Exit statuses: 0 success, 2 infeasible instance, 3 budget exceeded,
//! 4 validation error, 1 anything else (I/O). `BSSBP_BUDGET` sets the
//! default budget of every verb that has one.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::bss_machine::{self, library, BssProgram, RunOutcome};
use crate::exact_arith::{format_rational, parse_rational, Rational};
use crate::io::{self, AnyInstance, SolveResult};
use crate::optimizer::{
    certify, certify_complex, check_feasible, check_feasible_complex, oracle_solve, oracle_solve_complex,
    solve_complex_with, solve_with, OracleError, SolveError, SolveOptions,
    DEFAULT_CANDIDATE_BUDGET,
};
use crate::reduction::{lift_complex, split_abs};
use crate::turing_gap::{build_sequences, verify_gap, GapError};

const DEFAULT_STEP_BUDGET: u64 = 100_000;
const DEFAULT_ORACLE_CELLS: u64 = 200_000;

#[derive(Parser, Debug)]
#[command(name = "bssbp", version, about = "Exact quadratically constrained basis pursuit and BSS machines")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimise ‖x‖₁ subject to ‖Ax − y‖₂ ≤ ε exactly.
    Solve {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also render decimals with this many digits.
        #[arg(long, value_name = "DIGITS")]
        approx: Option<usize>,
        /// Candidate enumeration budget.
        #[arg(long, env = "BSSBP_BUDGET")]
        budget: Option<u64>,
    },
    /// Minimise ‖x‖* for a complex instance.
    SolveComplex {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_name = "DIGITS")]
        approx: Option<usize>,
        #[arg(long, env = "BSSBP_BUDGET")]
        budget: Option<u64>,
    },
    /// Print the reduced polynomial problem.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether the feasible set is empty.
    CheckEmpty {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and verify the discontinuity witness sequences.
    DemoGap {
        #[arg(long, default_value = "1/2")]
        epsilon: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Plain-text table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Compile a ReLU network file into a BSS program file.
    CompileNn {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a BSS program on rational inputs.
    RunBss {
        /// Program file; omit when using --library.
        program: Option<PathBuf>,
        #[arg(long, conflicts_with = "program")]
        library: Option<String>,
        /// Comma-separated rationals.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        input: String,
        #[arg(long, env = "BSSBP_BUDGET")]
        budget: Option<u64>,
        /// One JSON line per step on standard error.
        #[arg(long)]
        trace: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Bracket the optimal value by branch and bound.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value = "1/1000000")]
        tol: String,
        /// Cell budget.
        #[arg(long, env = "BSSBP_BUDGET")]
        budget: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Infeasible(String),
    Budget(String),
    Validation(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Infeasible(m) | CliError::Budget(m) | CliError::Validation(m) | CliError::Other(m) => m,
        }
    }
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Infeasible { .. } => CliError::Infeasible(e.to_string()),
            SolveError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            SolveError::NoKktPoint => CliError::Other(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| CliError::Other(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialisable")
}

fn parse_list(text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_rational(s).map_err(|e| CliError::Validation(e.to_string())))
        .collect()
}

fn solve_options(budget: Option<u64>) -> SolveOptions {
    SolveOptions { max_candidates: budget.map_or(DEFAULT_CANDIDATE_BUDGET, u128::from), ..SolveOptions::default() }
}

fn infeasible_report(e: &SolveError) -> Option<String> {
    match e {
        SolveError::Infeasible { min_residual_sq, epsilon_sq } => Some(to_json(&json!({
            "status": "infeasible",
            "min_residual_sq": format_rational(min_residual_sq),
            "epsilon_sq": format_rational(epsilon_sq),
        }))),
        _ => None,
    }
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Solve { input, output, approx, budget } => {
            let inst = io::parse_real_instance(&read(&input)?)?;
            match solve_with(&inst, &solve_options(budget)) {
                Ok(sol) => emit(&output, &to_json(&SolveResult::new(&sol, certify(&inst, &sol), approx))),
                Err(e) => {
                    if let Some(report) = infeasible_report(&e) {
                        emit(&output, &report)?;
                    }
                    Err(e.into())
                }
            }
        }
        Command::SolveComplex { input, output, approx, budget } => {
            let inst = io::parse_complex_instance(&read(&input)?)?;
            match solve_complex_with(&inst, &solve_options(budget)) {
                Ok(sol) => emit(&output, &to_json(&SolveResult::new(&sol, certify_complex(&inst, &sol), approx))),
                Err(e) => {
                    if let Some(report) = infeasible_report(&e) {
                        emit(&output, &report)?;
                    }
                    Err(e.into())
                }
            }
        }
        Command::Reduce { input, output } => {
            let rp = match io::parse_instance(&read(&input)?)? {
                AnyInstance::Real(inst) => split_abs(&inst),
                AnyInstance::Complex(inst) => lift_complex(&inst),
            };
            emit(&output, &to_json(&rp))
        }
        Command::CheckEmpty { input, output } => {
            let report = match io::parse_instance(&read(&input)?)? {
                AnyInstance::Real(inst) => check_feasible(&inst),
                AnyInstance::Complex(inst) => check_feasible_complex(&inst),
            };
            emit(&output, &to_json(&report))
        }
        Command::DemoGap { epsilon, n, output, table } => {
            let eps = parse_rational(&epsilon).map_err(|e| CliError::Validation(e.to_string()))?;
            let seq = build_sequences(&eps, n).map_err(|e| match e {
                GapError::Solve(s) => CliError::from(s),
                other => CliError::Validation(other.to_string()),
            })?;
            let report = verify_gap(&seq).map_err(|e| match e {
                GapError::Solve(s) => CliError::from(s),
                other => CliError::Validation(other.to_string()),
            })?;
            emit(&output, &if table { report.to_table() } else { to_json(&report) })
        }
        Command::CompileNn { input, output } => {
            let (weights, biases) = io::parse_network(&read(&input)?)?;
            let prog = bss_machine::compile_relu_network(&weights, &biases)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            emit(&output, &prog.to_json())
        }
        Command::RunBss { program, library: lib, input, budget, trace, output } => {
            let prog = match (program, lib) {
                (Some(path), _) => {
                    BssProgram::from_json(&read(&path)?).map_err(|e| CliError::Validation(e.to_string()))?
                }
                (None, Some(name)) => {
                    library::by_name(&name).ok_or_else(|| CliError::Validation(format!("no library program {name:?}")))?.program
                }
                (None, None) => return Err(CliError::Validation("give a program file or --library".into())),
            };
            let values = parse_list(&input)?;
            let budget = budget.unwrap_or(DEFAULT_STEP_BUDGET);
            let outcome = bss_machine::run_traced(&prog, &values, budget, |event| {
                if trace {
                    eprintln!("{}", serde_json::to_string(event).expect("serialisable"));
                }
            })
            .map_err(|e| CliError::Validation(e.to_string()))?;
            match outcome {
                RunOutcome::Halted { output: out, counters } => {
                    let values: Vec<String> = out.iter().map(format_rational).collect();
                    emit(&output, &to_json(&json!({ "status": "halted", "output": values, "counters": counters })))
                }
                RunOutcome::BudgetExceeded(state) => {
                    Err(CliError::Budget(format!("step budget {budget} exhausted at node {}", state.current)))
                }
            }
        }
        Command::Oracle { input, tol, budget, output } => {
            let tol = parse_rational(&tol).map_err(|e| CliError::Validation(e.to_string()))?;
            let cells = budget.unwrap_or(DEFAULT_ORACLE_CELLS) as usize;
            let bracket = match io::parse_instance(&read(&input)?)? {
                AnyInstance::Real(inst) => oracle_solve(&inst, &tol, cells),
                AnyInstance::Complex(inst) => oracle_solve_complex(&inst, &tol, cells),
            }
            .map_err(|e| match e {
                OracleError::Infeasible(_) => CliError::Infeasible(e.to_string()),
                OracleError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
                OracleError::NoInteriorPoint | OracleError::NonPositiveTolerance => CliError::Validation(e.to_string()),
            })?;
            emit(&output, &to_json(&bracket))
        }
    }
}

/// Parses arguments, dispatches and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
