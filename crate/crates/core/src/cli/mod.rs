//! Command-line orchestration: config files, the train / benchmark / inspect
//! commands and their report artifacts.

mod commands;
pub mod config;
mod pipeline;
mod svg;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use commands::{
    benchmark_cell, cmd_benchmark, cmd_inspect, cmd_train, load_params, targets_for, write_atomic, BenchmarkCell,
    TrainSummary,
};
pub use config::{Depth, ExperimentConfig, MeasOptions, MitigationPlan, TargetSource, ZneOptions};
pub use pipeline::mitigated_distribution;
pub use svg::{histogram_svg, Series};

use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "qloadbench", version, about = "Conditional distribution loading under noise, with error mitigation")]
pub struct Cli {
    /// Override the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Use exact probabilities instead of shot sampling everywhere.
    #[arg(long, global = true)]
    pub exact: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train the generator for each configured depth.
    Train { config: PathBuf },
    /// Score ideal, noisy and mitigated runs against the ideal distributions.
    Benchmark { config: PathBuf },
    /// Print gate counts, depth and parameter count of a circuit or params file.
    Inspect { file: PathBuf },
}

impl Cli {
    fn load(&self, path: &Path) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::load(path)?;
        if let Some(seed) = self.seed {
            cfg.seed = seed;
            cfg.training.seed = seed;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        cfg.exact |= self.exact;
        Ok(cfg)
    }
}

/// Executes `cli`, returning the text to print.
pub fn run(cli: &Cli) -> Result<String> {
    let mut s = String::new();
    match &cli.command {
        Command::Train { config } => {
            let cfg = cli.load(config)?;
            for r in cmd_train(&cfg)? {
                s += &format!(
                    "{:<9} loss {:.6} (initial {:.6}, {} iterations) -> {}\n",
                    r.depth.name(),
                    r.loss,
                    r.initial_loss,
                    r.iterations,
                    r.params_path.display()
                );
            }
        }
        Command::Benchmark { config } => {
            let cfg = cli.load(config)?;
            for (depth, report) in cmd_benchmark(&cfg)? {
                s += &format!("{depth} circuit, mitigation {}\n", cfg.mitigation.label());
                s += "  t  kl_ideal_sampled  kl_noisy    kl_mitigated  improvement_%\n";
                for r in &report.rows {
                    s += &format!(
                        "  {}  {:<16.6}  {:<10.6}  {:<12.6}  {:.2}\n",
                        r.condition, r.kl_ideal_sampled, r.kl_noisy, r.kl_mitigated, r.improvement_percent
                    );
                }
            }
        }
        Command::Inspect { file } => s = cmd_inspect(file)?,
    }
    Ok(s)
}
