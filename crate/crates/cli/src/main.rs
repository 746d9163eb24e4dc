//! `vpf`: count, enumerate and cross-check vacillating parking functions.
//!
//! Exit status is always 0 (success), 1 (a checked property failed) or 2
//! (bad input, resource guard, or I/O failure).

mod cache;
mod commands;
mod output;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vpf_core::{EnumFilter, Enumerator, RuleKind};

use crate::output::OutputFormat;

#[derive(Parser, Debug)]
#[command(
    name = "vpf",
    version,
    about = "Vacillating parking functions: exact counts, enumeration and verification"
)]
pub struct Cli {
    /// Worker threads for exhaustive scans; overrides VPF_THREADS.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    threads: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    /// Count cache file [default: $XDG_CACHE_HOME/vpf/counts-v1.txt].
    #[arg(long, global = true, env = "VPF_CACHE", value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Neither read nor write the count cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate one preference list.
    Check {
        /// Comma-separated preferences, e.g. 4,1,1,4.
        #[arg(long)]
        prefs: String,
        #[command(flatten)]
        rule: RuleArgs,
    },
    /// Count parking functions of length n by one method.
    Count {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Counting method; defaults to the fastest one valid for the input.
        #[arg(long, value_enum)]
        method: Option<Method>,
    },
    /// List parking functions of length n in lexicographic order.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long, value_enum, default_value_t = FilterArg::All)]
        filter: FilterArg,
        /// Stop after this many rows.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Cross-check every counting path and report each comparison.
    Verify {
        #[arg(long, default_value_t = 7)]
        n_brute_max: usize,
        #[arg(long, default_value_t = 40)]
        n_rec_max: usize,
        #[arg(long, default_value_t = 7)]
        k_max: usize,
    },
    /// List k-vacillating parking functions all of whose rearrangements park.
    InvariantScan {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Tabulate a count sequence for n = 1..=n_max.
    Sequence {
        #[arg(long, value_enum, default_value_t = SequenceArg::Total)]
        kind: SequenceArg,
        #[arg(long)]
        n_max: usize,
    },
}

#[derive(Args, Debug, Clone, Copy)]
pub struct RuleArgs {
    #[arg(long, value_enum, default_value_t = RuleArg::Vacillating)]
    rule: RuleArg,
    /// Vacillation step; ignored by the classical rule.
    #[arg(long, default_value_t = 1)]
    k: usize,
}

impl RuleArgs {
    fn kind(self) -> RuleKind {
        match self.rule {
            RuleArg::Classical => RuleKind::Classical,
            RuleArg::Vacillating => RuleKind::Vacillating(self.k),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Classical,
    Vacillating,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    All,
    Nondecreasing,
    Nonincreasing,
}

impl From<FilterArg> for EnumFilter {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::All => EnumFilter::All,
            FilterArg::Nondecreasing => EnumFilter::NonDecreasing,
            FilterArg::Nonincreasing => EnumFilter::NonIncreasing,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Brute,
    Recurrence,
    Product,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SequenceArg {
    Total,
    Nondecreasing,
    Nonincreasing,
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a refused request; exit 2.
    Input(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<vpf_core::Error> for Failure {
    fn from(e: vpf_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    PropertyFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let enumerator = match cli.threads {
        Some(t) => Enumerator::new(t as usize),
        None => Enumerator::from_env(),
    };
    let cache_path = if cli.no_cache {
        None
    } else {
        cli.cache.clone().or_else(cache::default_path)
    };
    let ctx = commands::Context {
        enumerator,
        format: cli.format,
        cache_path,
    };

    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        commands::run(&ctx, &cli.command)
    }));
    match result {
        Ok(Ok(Status::Ok)) => ExitCode::SUCCESS,
        Ok(Ok(Status::PropertyFailed)) => ExitCode::from(1),
        Ok(Err(Failure::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Ok(Err(Failure::Io(e))) => {
            eprintln!("vpf: {e}");
            ExitCode::from(2)
        }
        Ok(Err(Failure::Input(msg))) => {
            eprintln!("vpf: {msg}");
            ExitCode::from(2)
        }
        Err(_) => ExitCode::from(2),
    }
}
