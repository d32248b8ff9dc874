use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use viralcm_cli::commands;
use viralcm_cli::config::{DegreeKind, Grid, RunConfig, TransKind};

#[derive(Parser)]
#[command(name = "viralcm", version, about = "Viral campaigns on configuration-model graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one graph and measure every pioneer's reach.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the influence arcs to edges.txt.
        #[arg(long)]
        edges: bool,
    },
    /// Simulated, plug-in and analytic fractions over a grid of p (or K).
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Thresholds, roots and fractions of the large-graph limit.
    Analytic {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Verdict and cost-benefit figures for a pioneer CSV.
    Evaluate {
        /// CSV with header `degree,transmitter_degree`.
        csv: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
}

/// Every flag overrides the configuration file, which overrides defaults.
#[derive(Args)]
struct RunArgs {
    /// Flat `key = value  # unit` file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    degree: Option<DegreeKind>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Raw degree list for `--degree empirical`.
    #[arg(long)]
    degree_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    trans: Option<TransKind>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "K")]
    k: Option<u32>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `start:end:step` over p, or over K for coupon transmissions.
    #[arg(long)]
    grid: Option<Grid>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    floor: Option<f64>,
    #[arg(long)]
    z: Option<f64>,
    #[arg(long)]
    cost_per_pioneer: Option<f64>,
    #[arg(long)]
    value_per_influenced: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(self) -> anyhow::Result<RunConfig> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            cfg.apply_file(&text).with_context(|| format!("in {}", path.display()))?;
        }
        macro_rules! take {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = self.$field { cfg.$target = v; })*
            };
        }
        take!(degree => degree, lambda => lambda, beta => beta, trans => trans, p => p, k => k, n => n,
              seed => seed, gamma => gamma, floor => floor, z => z, cost_per_pioneer => cost_per_pioneer,
              value_per_influenced => value_per_influenced, out => out);
        if self.degree_file.is_some() {
            cfg.degree_file = self.degree_file;
        }
        if self.grid.is_some() {
            cfg.grid = self.grid;
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> anyhow::Result<Vec<PathBuf>> {
    match cli.command {
        Command::Simulate { run, edges } => commands::simulate(&run.resolve()?, edges),
        Command::Sweep { run } => commands::sweep(&run.resolve()?),
        Command::Analytic { run } => commands::analytic(&run.resolve()?),
        Command::Evaluate { csv, run } => commands::evaluate(&run.resolve()?, &csv),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
