//! `bell-recycle` command-line front end.
//!
//! Exit codes: 0 ok, 2 invalid configuration, 3 infeasible, 4 audit
//! violation.

mod commands;
mod grid;
mod output;
mod state_arg;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bell_recycle::SearchMode;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_AUDIT: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "bell-recycle", version, about = "Sequential Bell nonlocality sharing on recycled qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimized tradeoff curve with the semi-analytic region curves.
    Curve {
        #[arg(long, default_value = "unbiased-singlet", value_parser = parse_mode)]
        mode: SearchMode,
        /// Comma-separated values or inclusive `start:stop:step` ranges.
        #[arg(long)]
        grid: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Semi-analytic region curves only (no optimization).
    Tabulate {
        #[arg(long)]
        grid: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sampling audits of the monogamy bounds, the conjecture and the
    /// observable tradeoffs; JSON report.
    Audit {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
    /// Strength schedule for one Alice and several Bobs.
    Multibob {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// JSON object with `T` (3×3 array or `diag(a,b,c)`) and optional
        /// `a`, `b`; defaults to the singlet.
        #[arg(long)]
        state: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Evaluates one scenario given as JSON (`state`, `alice`, `bob`, `kind`).
    Evaluate {
        /// Scenario JSON, or `@path` to read it from a file.
        scenario: String,
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    s.parse().map_err(|e: bell_recycle::Error| e.to_string())
}

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("BELL_RECYCLE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("BELL_RECYCLE_THREADS must be a positive integer, got '{v}'"))?;
    if n == 0 {
        return Err("BELL_RECYCLE_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    let res = match cli.command {
        Command::Curve {
            mode,
            grid,
            seed,
            budget,
            out,
        } => commands::curve(mode, &grid, seed, budget, &out),
        Command::Tabulate { grid, out } => commands::tabulate(&grid, &out),
        Command::Audit {
            samples,
            seed,
            output,
        } => commands::audit(samples, seed, output.as_deref()),
        Command::Multibob {
            n,
            margin,
            state,
            out,
        } => commands::multibob(n, margin, state.as_deref(), &out),
        Command::Evaluate { scenario, output } => commands::evaluate(&scenario, output.as_deref()),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
