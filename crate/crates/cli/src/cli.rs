use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "luxbot",
    version,
    about = "Evolve and analyse light-seeking robot controllers with motor-driven sensor interference"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evolve a population against the configured task
    Evolve(EvolveArgs),
    /// Roll out a population member against probe lights, writing trial logs
    Simulate(SimulateArgs),
    /// Drive a member with scripted sensor stimuli in a dark world
    Probe(ProbeArgs),
    /// Summarize motor activity pooled over trial logs
    Stats(StatsArgs),
    /// Label the orbit behaviour recorded in a trial log
    Classify(ClassifyArgs),
    /// Print the full default configuration
    Defaults,
}

#[derive(Args)]
pub struct EvolveArgs {
    /// Configuration file
    #[arg(long)]
    pub config: PathBuf,
    /// Seed evolution from an existing population file instead of a random one
    #[arg(long)]
    pub from: Option<PathBuf>,
    /// Output directory (population.txt, history.csv, manifest.txt)
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Suppress progress lines on stderr
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Population file
    #[arg(long)]
    pub population: PathBuf,
    /// Member selector: `best`, an index, or `id:<n>`
    #[arg(long, default_value = "best")]
    pub member: String,
    /// Lights selector: `all` or a comma list of clock positions 1-12
    #[arg(long, default_value = "all")]
    pub lights: String,
    /// Trial length in time units (defaults to the evolved duration)
    #[arg(long)]
    pub duration: Option<f64>,
    /// Remove motor-driven interference on one or both sides
    #[arg(long, value_name = "left|right|both")]
    pub lesion_interference: Option<String>,
    /// Force the environmental reading of a sensor to zero
    #[arg(long, value_name = "left|right|both")]
    pub deactivate_sensor: Option<String>,
    /// Output directory (one log per light plus manifest.txt)
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct ProbeArgs {
    /// Population file
    #[arg(long)]
    pub population: PathBuf,
    /// Member selector: `best`, an index, or `id:<n>`
    #[arg(long, default_value = "best")]
    pub member: String,
    /// Trial length in time units (defaults to the evolved duration)
    #[arg(long)]
    pub duration: Option<f64>,
    /// Left-sensor script, e.g. `spike=8,peak=1.5,rise=0.5,baseline=0,plateau=0.75`
    #[arg(long)]
    pub script_left: Option<String>,
    /// Right-sensor script (same format as --script-left)
    #[arg(long)]
    pub script_right: Option<String>,
    /// Remove motor-driven interference on one or both sides
    #[arg(long, value_name = "left|right|both")]
    pub lesion_interference: Option<String>,
    /// Output directory (probe.csv plus manifest.txt)
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct StatsArgs {
    /// Time window `start:end` (half-open)
    #[arg(long)]
    pub window: String,
    /// Write the summary here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the pooled raw samples (CSV: m_left,m_right)
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Trial log files to pool
    #[arg(required = true)]
    pub logs: Vec<PathBuf>,
}

#[derive(Args)]
pub struct ClassifyArgs {
    /// Time window `start:end` (half-open), at least 5 time units long
    #[arg(long)]
    pub window: String,
    /// Trial log file
    pub log: PathBuf,
}
