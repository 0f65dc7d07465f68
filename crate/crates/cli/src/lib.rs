//! Command-line front end for the dmexp toolkit.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dmexp_core::Error;

pub mod commands;
pub mod parse;
pub mod report;
pub mod selftest;

use commands::*;
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_THRESHOLD: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "dmexp", version, about = "Seeded density-matrix exponentiation experiments")]
pub struct Cli {
    /// Master seed; required by stochastic subcommands.
    #[arg(long, global = true, env = "DMEXP_SEED")]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run the exact identity checks for the subcommand instead.
    #[arg(long, global = true)]
    pub selftest: bool,
    /// Record wall time in the JSON report (makes output non-reproducible).
    #[arg(long, global = true)]
    pub wall_time: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Trace distance to the ideal evolution against step count.
    LmrConverge(LmrConverge),
    /// Tell `diag(x, 1-x)` from `diag(x+eps, 1-x-eps)`.
    Discriminate(Discriminate),
    /// Estimate eigenvalues of a state from its copies.
    PhaseEst(PhaseEst),
    /// Decide whether two pure states are orthogonal.
    OrthoTest(OrthoTest),
    /// Rotate one pure state toward another.
    AddStates(AddStates),
    /// Fixed-point search using copies of the start state.
    Grover(Grover),
    /// Simulate a Hermitian polynomial of states.
    PolySim(PolySim),
    /// Check Jordan-Lie expansions of random monomials.
    JordanLie(JordanLie),
    /// Compile and run a circuit on the resource-state chain.
    UniversalDemo(UniversalDemo),
    /// Copy budgets against the tomography bound.
    TomoCompare(TomoCompare),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::LmrConverge(_) => "lmr-converge",
            Command::Discriminate(_) => "discriminate",
            Command::PhaseEst(_) => "phase-est",
            Command::OrthoTest(_) => "ortho-test",
            Command::AddStates(_) => "add-states",
            Command::Grover(_) => "grover",
            Command::PolySim(_) => "poly-sim",
            Command::JordanLie(_) => "jordan-lie",
            Command::UniversalDemo(_) => "universal-demo",
            Command::TomoCompare(_) => "tomo-compare",
        }
    }

    pub fn execute(&self, seed: Option<u64>) -> dmexp_core::Result<Report> {
        match self {
            Command::LmrConverge(a) => lmr_converge(a, seed),
            Command::Discriminate(a) => discriminate_cmd(a, seed),
            Command::PhaseEst(a) => phase_est(a, seed),
            Command::OrthoTest(a) => ortho_test(a, seed),
            Command::AddStates(a) => add_states_cmd(a, seed),
            Command::Grover(a) => grover(a, seed),
            Command::PolySim(a) => poly_sim(a, seed),
            Command::JordanLie(a) => jordan_lie(a, seed),
            Command::UniversalDemo(a) => universal_demo(a, seed),
            Command::TomoCompare(a) => tomo_compare(a, seed),
        }
    }
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "error": kind, "message": message }).to_string()
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NonFinite => "non_finite",
        _ => "invalid_input",
    }
}

fn emit(cli: &Cli, report: &Report) -> std::io::Result<()> {
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    match cli.format {
        Format::Csv => report.write_csv(&mut sink).map_err(std::io::Error::other)?,
        Format::Json => writeln!(sink, "{}", report.to_json_string())?,
    }
    sink.flush()
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return EXIT_OK;
            }
            eprintln!("{}", error_json("usage", e.to_string().trim()));
            return EXIT_USAGE;
        }
    };
    let started = Instant::now();
    let result = if cli.selftest {
        selftest::run(&cli.command)
    } else {
        cli.command.execute(cli.seed)
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{}", error_json(error_kind(&e), &e.to_string()));
            return EXIT_USAGE;
        }
    };
    if cli.wall_time {
        report.extra("wall_time_s", started.elapsed().as_secs_f64());
    }
    if let Err(e) = emit(&cli, &report) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return EXIT_OK;
        }
        eprintln!("{}", error_json("io", &e.to_string()));
        return EXIT_USAGE;
    }
    let status = if report.passed() { "ok" } else { "THRESHOLD VIOLATED" };
    eprintln!("{}: {} [{status}]", cli.command.name(), report.summary);
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_THRESHOLD
    }
}
