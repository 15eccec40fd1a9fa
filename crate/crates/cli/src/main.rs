use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Format;

/// Exit status for malformed arguments and out-of-range values.
pub const EXIT_USAGE: u8 = 64;
/// Classification complete and unique.
pub const EXIT_OK: u8 = 0;
/// Complete, but the result differs from the known one (or an audit failed).
pub const EXIT_REGRESSION: u8 = 2;
/// Some stage could not prove its search complete.
pub const EXIT_INCOMPLETE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "apteich", version, about = "Exact search for algebraically primitive Teichmüller curves in ΩM₃(2,2)ʰʸᵖ")]
pub struct Cli {
    /// Largest q checked by the direct per-q route.
    #[arg(long, global = true, env = "APTEICH_Q_MAX", default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
    pub q_max: u64,
    /// Starting precision of the sign ladder, in bits.
    #[arg(long = "prec-bits", global = true, env = "APTEICH_PREC_BITS", default_value_t = 64, value_parser = clap::value_parser!(u32).range(32..))]
    pub prec_bits: u32,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true, env = "APTEICH_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    /// Floating-point prefilter tolerance for the determinant search.
    #[arg(long, global = true, env = "APTEICH_TOLERANCE", default_value = "1e-6", value_parser = parse_tolerance)]
    pub tolerance: String,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, env = "APTEICH_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, env = "APTEICH_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximal orders of primitive relations of length k with degree bound d.
    Dz {
        #[arg(long, env = "APTEICH_K")]
        k: u64,
        #[arg(long, env = "APTEICH_D")]
        d: u64,
    },
    /// Symmetric and asymmetric root tuples for one modulus.
    Enumerate {
        #[arg(long, env = "APTEICH_N")]
        n: u64,
    },
    /// One of the two exhaustive root searches, with its property audit.
    SearchRelations {
        #[arg(value_enum)]
        which: Search,
    },
    /// Full pipeline: order scan, twist elimination, orbit grouping.
    Classify,
    /// Vertical decomposition of a candidate surface, or the 14-gon cross-check.
    VerifyFlat {
        /// `n:e1,e2,e3` for a root tuple, or `14gon`.
        #[arg(long, env = "APTEICH_CANDIDATE")]
        candidate: String,
        /// t₁ as a fraction of c₁.
        #[arg(long, env = "APTEICH_T1", default_value = "0")]
        t1: String,
        /// t₃ as a fraction of c₃.
        #[arg(long, env = "APTEICH_T3", default_value = "0")]
        t3: String,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Search {
    Pair63,
    Det819,
}

fn parse_tolerance(s: &str) -> Result<String, String> {
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(s.to_string()),
        _ => Err(format!("tolerance must be a positive number, got {s:?}")),
    }
}

/// Errors a user can fix by changing arguments.
#[derive(Debug)]
pub struct UsageError(pub String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = apteich_core::exactnum::sign::set_start_bits(cli.prec_bits) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let workers = cli.workers.map(|w| w as usize).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
        log::warn!("worker pool already initialized: {e}");
    }
    log::info!("using {workers} workers");
    match commands::run(&cli, workers) {
        Ok(outcome) => match output::emit(&cli, &outcome) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(e) => {
                eprintln!("error: cannot write report: {e}");
                ExitCode::FAILURE
            }
        },
        Err(commands::Failure::Usage(UsageError(msg))) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(commands::Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
