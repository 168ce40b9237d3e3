// NaN must fail the range checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypermeasure::HmError;

#[derive(Parser, Debug)]
#[command(name = "hypermeasure", version, about = "Hypergeometric approximants and effective irrationality measures")]
pub struct Cli {
    /// Largest x the prime sieve may reach.
    #[arg(long, global = true, default_value_t = hypermeasure::prime_tables::DEFAULT_SIEVE_CEILING)]
    pub sieve_max: u64,
    /// Largest r for exact denominators.
    #[arg(long, global = true, default_value_t = hypermeasure::denominators::DEFAULT_EXACT_CAP)]
    pub exact_r_cap: u64,
    /// Decimal digits for high-precision work.
    #[arg(long, global = true, default_value_t = 60)]
    pub prec: u32,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Cache directory for band tables (overrides HYPERMEASURE_CACHE_DIR).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Coefficients of X_{m,n,r} (or Y), or its value at a rational z.
    Poly {
        m: u64,
        n: u64,
        r: u64,
        #[arg(long)]
        at: Option<String>,
        /// Print Y (the reversal) instead of X.
        #[arg(long)]
        y: bool,
    },
    /// Exact D_{m,n,r} and its factorization.
    Denom { m: u64, n: u64, r: u64 },
    /// N_{d,m,n,r}; without --d, the worst case over d.
    Numerator {
        m: u64,
        n: u64,
        r: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
    },
    /// theta(x; n, k), with the band envelopes when --bands is set.
    Theta {
        x: f64,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long)]
        bands: bool,
    },
    /// Band table for modulus n as CSV.
    Bands {
        n: u64,
        #[arg(long, default_value_t = 1_000_000)]
        x_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the constants pipeline for n.
    Constants {
        n: u64,
        #[arg(long, allow_hyphen_values = true)]
        d: Option<i64>,
        #[arg(long)]
        r_step: Option<u64>,
        #[arg(long)]
        r_max: Option<u64>,
        #[arg(long)]
        n_max: Option<u64>,
        /// Exhaustive sweep covers 0 <= r < sweep_r.
        #[arg(long, default_value_t = 200)]
        sweep_r: u64,
        #[arg(long)]
        full_scale: bool,
        /// Compare the recomputable table columns for n instead.
        #[arg(long)]
        spot_check: bool,
    },
    /// Measure constants for (a/b)^(m/n).
    Measure {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        m: u64,
        n: u64,
        /// Check every convergent with q up to this height.
        #[arg(long)]
        verify: Option<String>,
        #[arg(long)]
        cn: Option<f64>,
        #[arg(long)]
        log_dn: Option<f64>,
        /// ConstantsCert JSON to take C_n and D_n from.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Digits for the continued fraction (doubled for the stability pass).
        #[arg(long, default_value_t = 200)]
        cf_digits: u32,
    },
    /// Run a verification suite: lemmas, tables or approximants.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 30)]
        r_max: u64,
        #[arg(long, default_value_t = 12)]
        n_max: u64,
    },
    /// Print the checked-in constants table, or one row.
    Tables {
        #[arg(long)]
        n: Option<u64>,
    },
}

pub struct RunConfig {
    pub exact_r_cap: u64,
    pub precision_digits: u32,
    pub format: Option<Format>,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<commands::VerificationFailed>() {
        return 4;
    }
    match e.downcast_ref::<HmError>() {
        Some(
            HmError::Constraint(_)
            | HmError::Domain(_)
            | HmError::Parse(_)
            | HmError::Hypothesis(_)
            | HmError::CapExceeded { .. }
            | HmError::CeilingExceeded { .. },
        ) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.prec < 30 {
        eprintln!("error: --prec must be at least 30");
        return ExitCode::from(2);
    }
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    if let Some(dir) = &cli.cache_dir {
        std::env::set_var("HYPERMEASURE_CACHE_DIR", dir);
    }
    hypermeasure::prime_tables::set_sieve_ceiling(cli.sieve_max);
    let cfg = RunConfig { exact_r_cap: cli.exact_r_cap, precision_digits: cli.prec, format: cli.format };
    match commands::run(&cli.cmd, &cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
