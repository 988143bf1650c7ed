use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use monodromy_cli::{run, CliError, Command, RunConfig};
use monodromy_core::certifier::{Budgets, DEFAULT_WORD_BUDGET};

#[derive(Parser)]
#[command(
    name = "monodromy",
    version,
    about = "Exact monodromy data for cyclic covers branched along hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Word budget for orbit and order searches.
    #[arg(long, global = true, default_value_t = DEFAULT_WORD_BUDGET)]
    budget: usize,
    /// Bits of working precision for sign determination.
    #[arg(long, global = true, default_value_t = 128)]
    precision: u32,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replay witnesses of cache hits before returning them.
    #[arg(long, global = true)]
    verify_cache: bool,
}

#[derive(Args)]
struct Tuple {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: u32,
    #[arg(long)]
    i: u32,
}

#[derive(Subcommand)]
enum Sub {
    /// Pham character support and Picard–Lefschetz constants.
    Pham {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: u32,
    },
    /// Curve-case monodromy matrices, invariant form and meridians.
    CurveRep {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, default_value_t = 1)]
        wedge: usize,
    },
    /// Closed-form signature, Hodge numbers and expected group.
    Invariants(Tuple),
    /// Density certificate.
    Certify(Tuple),
    /// Certificates for every valid tuple with the given n and m ≤ m-max.
    Sweep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_max: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let command = match cli.command {
        Sub::Pham { n, r } => Command::Pham { n, r },
        Sub::CurveRep { m, r, i, wedge } => Command::CurveRep { m, r, i, wedge },
        Sub::Invariants(t) => Command::Invariants {
            n: t.n,
            m: t.m,
            r: t.r,
            i: t.i,
        },
        Sub::Certify(t) => Command::Certify {
            n: t.n,
            m: t.m,
            r: t.r,
            i: t.i,
        },
        Sub::Sweep { n, m_max } => Command::Sweep { n, m_max },
    };
    let config = RunConfig {
        command,
        budgets: Budgets {
            words: cli.common.budget,
            precision_bits: cli.common.precision,
        },
        cache_dir: cli.common.cache_dir,
        out: cli.common.out.clone(),
        verify_cache: cli.common.verify_cache,
    };
    match run(&config) {
        Ok(report) => {
            if cli.common.out.is_none() {
                print!("{}", report.to_json());
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("monodromy: {e}");
            if let CliError::Invariant(_) = e {
                eprintln!("monodromy: internal inconsistency, please report");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
