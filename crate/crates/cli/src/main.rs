//! `horizon`: runs online-optimization experiments and writes CSV/SVG.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure.

mod commands;
mod config;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use config::{parse_algos, parse_windows, ExperimentConfig};
use error::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "horizon", version, about = "Receding-horizon online optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One row per (algorithm, W): regret, costs, mean per-stage time.
    Run(Common),
    /// Regret against W with upper-bound columns; writes sweep.csv and sweep.svg.
    Sweep(Common),
    /// Monte-Carlo regret on the segmented lower-bound construction.
    Lowerbound {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        adversary: AdversaryArgs,
    },
    /// Per-stage wall time (or gradient counts) per algorithm and W.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Runs pooled per (algorithm, W).
        #[arg(long)]
        repeats: Option<usize>,
    },
    /// Writes the resolved instance as JSON.
    ExportInstance {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        adversary: AdversaryArgs,
    },
    /// Writes the entries of H⁻¹ for the scalar isotropic problem.
    ExportInverse {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long = "T", default_value_t = 20)]
        big_t: usize,
    },
}

#[derive(Args)]
struct Common {
    /// JSON file with an experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// special, dispatch, adversary, or a path to an instance JSON file.
    #[arg(long)]
    instance: Option<String>,
    /// Comma-separated subset of ogd,rhgd,rhag,mpc.
    #[arg(long)]
    algos: Option<String>,
    /// Windows: `0..10` (inclusive), `0-10` or `0,2,5`.
    #[arg(long = "w")]
    windows: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Offline oracle tolerance.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    realizations: Option<usize>,
    /// Report gradient evaluations instead of wall time.
    #[arg(long)]
    count_gradients: bool,
    /// Horizon of the synthetic dispatch instance.
    #[arg(long)]
    horizon: Option<usize>,
    /// Demand trace (timestamp,value) for the dispatch instance.
    #[arg(long)]
    demand_csv: Option<PathBuf>,
    /// Renewable trace (timestamp,value) for the dispatch instance.
    #[arg(long)]
    renewable_csv: Option<PathBuf>,
}

#[derive(Args)]
struct AdversaryArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Diameter D of X.
    #[arg(long = "D")]
    diameter: Option<f64>,
    /// Path-length budget L_T.
    #[arg(long = "L-T")]
    budget: Option<f64>,
    #[arg(long = "T")]
    big_t: Option<usize>,
}

impl Common {
    fn resolve(self) -> CliResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.instance {
            cfg.instance = v;
        }
        if let Some(v) = self.algos {
            cfg.algos = Some(parse_algos(&v).map_err(CliError::Config)?);
        }
        if let Some(v) = self.windows {
            cfg.windows = Some(parse_windows(&v).map_err(CliError::Config)?);
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        if let Some(v) = self.out {
            cfg.out = v;
        }
        if let Some(v) = self.realizations {
            cfg.realizations = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = Some(v);
        }
        if let Some(v) = self.demand_csv {
            cfg.demand_csv = Some(v);
        }
        if let Some(v) = self.renewable_csv {
            cfg.renewable_csv = Some(v);
        }
        cfg.count_gradients |= self.count_gradients;
        Ok(cfg)
    }
}

impl AdversaryArgs {
    fn apply(self, cfg: &mut ExperimentConfig) {
        let a = &mut cfg.adversary;
        a.alpha = self.alpha.unwrap_or(a.alpha);
        a.beta = self.beta.unwrap_or(a.beta);
        a.diameter = self.diameter.unwrap_or(a.diameter);
        a.budget = self.budget.unwrap_or(a.budget);
        a.horizon = self.big_t.unwrap_or(a.horizon);
    }
}

fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Run(common) => commands::run(&common.resolve()?),
        Command::Sweep(common) => commands::sweep_cmd(&common.resolve()?),
        Command::Lowerbound { common, adversary } => {
            let mut cfg = common.resolve()?;
            adversary.apply(&mut cfg);
            commands::lowerbound(&cfg)
        }
        Command::Bench { common, repeats } => {
            let mut cfg = common.resolve()?;
            if let Some(r) = repeats {
                cfg.repeats = r;
            }
            commands::bench_cmd(&cfg)
        }
        Command::ExportInstance { common, adversary } => {
            let mut cfg = common.resolve()?;
            adversary.apply(&mut cfg);
            commands::export_instance(&cfg)
        }
        Command::ExportInverse {
            common,
            alpha,
            beta,
            big_t,
        } => commands::export_inverse(&common.resolve()?, alpha, beta, big_t),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
