//! `resonate`: command-line front end for the resonance library.

mod commands;
mod config;
mod manifest;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use resonate::Error;

#[derive(Parser, Debug)]
#[command(
    name = "resonate",
    version,
    about = "Exact and quasi-resonances of discrete wave systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

/// Parameters shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// gravity4, planetary3, capillary3 or rossby3
    #[arg(long)]
    pub disp: Option<String>,
    /// Domain half-width
    #[arg(long = "D", value_name = "D")]
    pub d: Option<i32>,
    /// Second bound of a positive-quadrant domain (defaults to D)
    #[arg(long = "Dn", value_name = "DN")]
    pub dn: Option<i32>,
    /// full-square, no-axes or positive-quadrant
    #[arg(long)]
    pub mode: Option<String>,
    /// distinct or allow-repeats
    #[arg(long)]
    pub sides: Option<String>,
    /// Fractional bits of certified arithmetic
    #[arg(long)]
    pub bits: Option<u32>,
    /// Worker threads (also RESONATE_THREADS)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Flat key = value file of defaults
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Data file; a manifest is written beside it
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate exact resonances
    Solve {
        #[command(flatten)]
        common: Common,
        /// scale, angle or all (four-wave only)
        #[arg(long)]
        kind: Option<String>,
        /// jsonl or csv
        #[arg(long)]
        format: Option<String>,
        /// Stripes of the angle difference histogram
        #[arg(long)]
        stripes: Option<usize>,
        /// Permit angle enumeration above the default size limit
        #[arg(long)]
        allow_large: bool,
    },
    /// Count exact resonances
    Count {
        #[command(flatten)]
        common: Common,
        /// text or csv
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        stripes: Option<usize>,
        /// Memory budget of one angle stripe, in MiB
        #[arg(long)]
        memory_mb: Option<u64>,
    },
    /// Validate and classify one quartet lhs => rhs
    Classify {
        #[command(flatten)]
        common: Common,
        /// Two vectors, "m,n;m,n"
        #[arg(long, allow_hyphen_values = true)]
        lhs: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        rhs: Option<String>,
        /// Interaction multipliers, "p1,p2,p3,p4"
        #[arg(long)]
        multipliers: Option<String>,
    },
    /// Number of resonances containing one wave vector
    Participation {
        #[command(flatten)]
        common: Common,
        /// Wave vector "m,n"
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Smallest nonzero detuning of a domain
    OmegaD {
        #[command(flatten)]
        common: Common,
        /// unconstrained, conserving or both
        #[arg(long)]
        over: Option<String>,
        /// Upper edge of the gap histogram
        #[arg(long)]
        histogram_cap: Option<f64>,
    },
    /// Quasi-resonances with 0 < |Δ| < width
    Quasi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        multipliers: Option<String>,
    },
    /// N(δ) = exact + quasi count below δ
    Profile {
        #[command(flatten)]
        common: Common,
        /// Comma-separated widths; defaults to a grid around Ω_D
        #[arg(long)]
        deltas: Option<String>,
        /// Number of grid points when --deltas is absent
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Clusters and their isomorphism classes
    Clusters {
        #[command(flatten)]
        common: Common,
        /// json, dot or graphml
        #[arg(long)]
        format: Option<String>,
        /// Export one class representative instead of the whole graph
        #[arg(long)]
        class: Option<usize>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Amplitude equations of three-wave clusters
    Gensys {
        #[command(flatten)]
        common: Common,
        /// text, latex or json
        #[arg(long)]
        format: Option<String>,
        /// per-triad or per-term coefficient names
        #[arg(long)]
        coefs: Option<String>,
        /// One system per isomorphism class instead of per cluster
        #[arg(long)]
        classes: bool,
    },
    /// Brute-force reference solver for small domains
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        multipliers: Option<String>,
    },
    /// Self-checks: oracle equivalence, structure, plateau, regressions
    Verify {
        #[command(flatten)]
        common: Common,
        /// Include the total count at D = 1000
        #[arg(long)]
        long: bool,
    },
}

/// Failures surfaced to the user, with their exit codes.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    /// A self-check found a discrepancy.
    Consistency(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Resource(_) | Error::Precision(_) | Error::Overflow(_)) => 3,
            Failure::Lib(_) => 2,
            Failure::Consistency(_) => 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Lib(e) => eprintln!("resonate: {e}"),
                Failure::Consistency(m) => eprintln!("resonate: consistency failure: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
