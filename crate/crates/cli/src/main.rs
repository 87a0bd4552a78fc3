mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{CatalogKind, Grid};

/// Plan, verify and simulate minimum-setting state tomography.
///
/// Exit codes: 0 success, 1 usage or parse error, 2 infeasible catalog,
/// 3 incomplete cover, 4 catalog hash mismatch, 5 I/O failure,
/// 6 budget or range error, 7 missing measurement records.
#[derive(Debug, Parser)]
#[command(name = "tomoplan", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Setup {
    /// Number of qubits. Optional when it follows from --topology or --graph.
    #[arg(long)]
    n: Option<usize>,

    /// Coupling graph: chain, complete, grid:RxC (or RxC), or custom.
    #[arg(long)]
    topology: Option<String>,

    /// Edge-list file for --topology custom (`n <count>` header, `k l` lines).
    #[arg(long, value_name = "FILE")]
    graph: Option<PathBuf>,

    /// Setting catalog to draw from.
    #[arg(long, value_enum)]
    catalog: Option<CatalogKind>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the setting catalog for a register.
    Catalog {
        #[command(flatten)]
        setup: Setup,

        /// Output catalog file; stdout if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Solve for a minimum set of settings and write the plan.
    Plan {
        #[command(flatten)]
        setup: Setup,

        /// Branch-and-bound node budget.
        #[arg(long, default_value_t = tomoplan_core::solver::Budget::DEFAULT_NODES)]
        budget: u64,

        /// Output plan file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Check that a plan, catalog or setting list covers every Pauli.
    ///
    /// When --topology or --catalog is given, a plan file must also have
    /// been solved from that catalog.
    Verify {
        /// Plan, catalog or setting-list file.
        file: PathBuf,

        #[command(flatten)]
        setup: Setup,
    },

    /// Write the signed coverage matrix of a plan as CSV.
    Export {
        /// Plan file; otherwise the plan is solved from --n/--topology/--catalog.
        #[arg(long, value_name = "FILE")]
        plan: Option<PathBuf>,

        #[command(flatten)]
        setup: Setup,

        /// Export every catalog row instead of a solved selection.
        #[arg(long, conflicts_with = "plan")]
        all: bool,

        /// Branch-and-bound node budget.
        #[arg(long, default_value_t = tomoplan_core::solver::Budget::DEFAULT_NODES)]
        budget: u64,

        /// Output CSV file; stdout if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Simulate the solved plan and the traditional catalog under control noise.
    Simulate {
        #[command(flatten)]
        setup: Setup,

        /// Random states per grid point.
        #[arg(long, default_value_t = 200)]
        states: usize,

        /// Relative amplitude error grid: `a:b:k` (k points) or a comma list.
        #[arg(long, default_value = "0")]
        eta: Grid,

        /// Residual coupling grid: `a:b:k` (k points) or a comma list.
        #[arg(long, default_value = "0")]
        zeta: Grid,

        /// Shots per setting; exact expectations if omitted.
        #[arg(long)]
        shots: Option<u64>,

        /// Random seed.
        #[arg(long)]
        seed: u64,

        /// Branch-and-bound node budget.
        #[arg(long, default_value_t = tomoplan_core::solver::Budget::DEFAULT_NODES)]
        budget: u64,

        /// Output CSV file; stdout if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Simulate measurement records of a state under a plan.
    Measure {
        /// Plan file.
        #[arg(long, value_name = "FILE")]
        plan: PathBuf,

        /// State file (`n <count>` header, `re im` per entry, row-major).
        #[arg(long, value_name = "FILE")]
        state: PathBuf,

        /// Coupling graph for residual coupling; complete if omitted.
        #[arg(long)]
        topology: Option<String>,

        /// Edge-list file for --topology custom.
        #[arg(long, value_name = "FILE")]
        graph: Option<PathBuf>,

        /// Relative amplitude error.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,

        /// Residual coupling strength.
        #[arg(long, default_value_t = 0.0)]
        zeta: f64,

        /// Shots per setting; exact expectations if omitted.
        #[arg(long)]
        shots: Option<u64>,

        /// Random seed; required with --shots or nonzero noise.
        #[arg(long)]
        seed: Option<u64>,

        /// Output records file; stdout if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },

    /// Reconstruct a density matrix from measurement records.
    Reconstruct {
        /// Plan file.
        #[arg(long, value_name = "FILE")]
        plan: PathBuf,

        /// Records file.
        #[arg(long, value_name = "FILE")]
        records: PathBuf,

        /// Reference state file; prints the infidelity against it.
        #[arg(long, value_name = "FILE")]
        reference: Option<PathBuf>,

        /// Output state file; stdout if omitted.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn init_threads() {
    if let Some(k) = std::env::var("TOMOPLAN_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if k > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tomoplan: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
