use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use filaments::network::Ratio;
use filaments::pipeline::{render_stats, run_pipeline, PipelineConfig, RunOptions, Stage, StageAction};

/// Builds a network of derivational families and series from a phonetized lexicon.
#[derive(Parser)]
#[command(name = "forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage and print the statistics.
    Run(Settings),
    /// Compute the similarity neighborhoods.
    Neighbors(Settings),
    /// Enumerate the analogies inside the neighborhoods.
    Analogies(Settings),
    /// Build the relation graph and extract the seed.
    Seed(Settings),
    /// Extend the seed to a fixed point.
    Bootstrap(Settings),
    /// Write the filament file.
    Export(Settings),
    /// Print the network statistics.
    Stats(Settings),
}

#[derive(Args)]
struct Settings {
    /// TOML config; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Tab-separated lexicon: form, phoneme codes, tag.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Output directory for checkpoints and results.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    min_ngram: Option<usize>,
    /// Neighborhood size.
    #[arg(long)]
    neighbors: Option<usize>,
    /// Refuse to enumerate more candidate quadruplets than this.
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Also write the analogy counters here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    w_threshold: Option<u32>,
    /// Clustering threshold, a decimal such as 0.66.
    #[arg(long, value_parser = parse_ratio)]
    cc_threshold: Option<Ratio>,
    #[arg(long)]
    min_subseries: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Recompute checkpoints written under a different configuration.
    #[arg(long)]
    force: bool,
}

fn parse_ratio(s: &str) -> Result<Ratio, String> {
    s.parse()
}

impl Settings {
    fn config(self) -> Result<(PipelineConfig, bool)> {
        let mut cfg = match (&self.config, &self.lexicon) {
            (Some(path), _) => PipelineConfig::from_toml_file(path).map_err(|e| anyhow!(e))?,
            (None, Some(lexicon)) => PipelineConfig::new(lexicon, "out"),
            (None, None) => return Err(anyhow!("either --config or --lexicon is required")),
        };
        if self.config.is_some() {
            if let Some(v) = self.lexicon {
                cfg.lexicon = v;
            }
        }
        if let Some(v) = self.out {
            cfg.output = v;
        }
        if let Some(v) = self.min_ngram {
            cfg.min_ngram = v;
        }
        if let Some(v) = self.neighbors {
            cfg.neighbors = v;
        }
        if let Some(v) = self.max_candidates {
            cfg.max_candidates = Some(v);
        }
        if let Some(v) = self.report {
            cfg.report = Some(v);
        }
        if let Some(v) = self.w_threshold {
            cfg.w_threshold = v;
        }
        if let Some(v) = self.cc_threshold {
            cfg.cc_threshold = v;
        }
        if let Some(v) = self.min_subseries {
            cfg.min_subseries = v;
        }
        if let Some(v) = self.max_iterations {
            cfg.max_iterations = v;
        }
        cfg.validate().map_err(|e| anyhow!("invalid configuration: {e}"))?;
        Ok((cfg, self.force))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("forge: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let (until, settings) = match cli.command {
        Command::Run(s) => (Stage::Stats, s),
        Command::Neighbors(s) => (Stage::Neighbors, s),
        Command::Analogies(s) => (Stage::Analogies, s),
        Command::Seed(s) => (Stage::Seed, s),
        Command::Bootstrap(s) => (Stage::Bootstrap, s),
        Command::Export(s) => (Stage::Export, s),
        Command::Stats(s) => (Stage::Stats, s),
    };
    let (cfg, force) = settings.config()?;
    let outcome = run_pipeline(&cfg, RunOptions { until, force })?;
    for (stage, action) in &outcome.actions {
        let verb = match action {
            StageAction::Computed => "computed",
            StageAction::Loaded => "loaded",
        };
        eprintln!("{stage}: {verb}");
    }
    eprintln!("output: {}", cfg.output.display());
    if let Some(stats) = outcome.stats {
        print!("{}", render_stats(&stats));
    }
    Ok(())
}
