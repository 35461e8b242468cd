use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "splitting", version, about = "Construct, verify and benchmark higher-order product formulas")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Arithmetic for method coefficients. Defaults to exact for rational
    /// input and double-double for irrational methods.
    #[arg(long, global = true, value_enum)]
    pub precision: Option<Precision>,

    /// Seed for randomized routines.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// TOML file providing defaults for the global flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    Double,
    Wide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Sum,
    Commutator,
}

impl From<TargetArg> for splitting::Target {
    fn from(t: TargetArg) -> Self {
        match t {
            TargetArg::Sum => splitting::Target::Sum,
            TargetArg::Commutator => splitting::Target::Commutator,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetArg {
    Pauli,
    Ising,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the order of a method or catalog entry.
    Verify {
        /// Catalog id (e.g. Z3_2) or method notation.
        method: String,
        /// Order to require; defaults to the catalog claim, else 1.
        #[arg(long)]
        order: Option<u32>,
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
    },
    /// Print sigma, rho and cost metrics.
    Metrics {
        method: String,
        #[arg(long, value_enum)]
        target: Option<TargetArg>,
        /// Physical time for the computer-time model.
        #[arg(long)]
        tp: Option<f64>,
        /// Error budget for the computer-time model.
        #[arg(long)]
        budget: Option<f64>,
        /// Time per gate switch.
        #[arg(long, default_value_t = 1.0)]
        tg: f64,
        /// Gate cost per unit of time.
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        /// Smallest usable time step.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Number of operator terms N.
        #[arg(long, default_value_t = 2)]
        terms: usize,
    },
    /// Print the metric and residual tables of the catalog.
    Tables {
        #[arg(long)]
        csv: bool,
        /// Compare with the bundled golden output.
        #[arg(long)]
        check: bool,
    },
    /// Search for integer-coefficient methods.
    Search {
        #[arg(long)]
        order: u32,
        #[arg(long)]
        units: usize,
        #[arg(long)]
        amax: u32,
        #[arg(long, value_enum, default_value_t = TargetArg::Sum)]
        target: TargetArg,
        #[arg(long)]
        max_results: Option<usize>,
        /// Stop after this many seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        /// Keep both members of each transpose pair.
        #[arg(long)]
        no_dedup: bool,
        /// Write JSON lines here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve for irrational coefficients.
    Solve {
        #[arg(long)]
        order: u32,
        /// Six-unit symmetric fourth-order family.
        #[arg(long)]
        symmetric: bool,
        #[arg(long)]
        variant: Option<u32>,
        /// Unit signs for Newton, e.g. "+--+".
        #[arg(long)]
        signs: Option<String>,
        /// Comma-separated starting coefficients; random when omitted.
        #[arg(long)]
        initial: Option<String>,
        /// Random restarts when no starting point is given.
        #[arg(long, default_value_t = 200)]
        attempts: usize,
    },
    /// Raise the order of a method by composition.
    Compose {
        /// Catalog id or notation of the base method.
        #[arg(long)]
        base: String,
        /// Compose until the requested order.
        #[arg(long)]
        auto: bool,
        #[arg(long, default_value_t = 6)]
        to: u32,
        /// Blocks `b` or `b^-1` (inverse block), comma-separated.
        #[arg(long)]
        schedule: Option<String>,
    },
    /// Apply a method to a test Hamiltonian and record the error.
    Simulate {
        #[arg(long)]
        method: String,
        #[arg(long, value_enum, default_value_t = SetArg::Pauli)]
        set: SetArg,
        /// Spins for the Ising set.
        #[arg(long, default_value_t = 4)]
        spins: usize,
        #[arg(long)]
        dt: f64,
        #[arg(long)]
        steps: usize,
        /// Record every this many steps.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Values a config file may set; command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub json: Option<bool>,
    pub precision: Option<Precision>,
    pub seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut cli = Cli::parse();
    if let Some(path) = cli.config.clone() {
        let cfg = std::fs::read_to_string(&path)
            .map_err(|e| commands::CliError::Usage(format!("{}: {e}", path.display())))
            .and_then(|s| toml::from_str::<Config>(&s).map_err(|e| commands::CliError::Usage(format!("{}: {e}", path.display()))));
        match cfg {
            Ok(cfg) => {
                cli.json |= cfg.json.unwrap_or(false);
                cli.precision = cli.precision.or(cfg.precision);
                cli.seed = cli.seed.or(cfg.seed);
            }
            Err(e) => return e.report(),
        }
    }
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => e.report(),
    }
}
