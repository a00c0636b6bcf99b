mod classify;
mod evolve;
mod probe;
mod simulate;
mod stats;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use luxbot_core::persist::parse_population;
use luxbot_core::{EvolutionConfig64, Population64, SimError};

use crate::cli::{Cli, Command};
use crate::manifest;

pub enum CliError {
    /// Bad flags or malformed configuration: exit code 1.
    Usage(String),
    /// Runtime or numeric failure: exit code 2.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Runtime(msg) => f.write_str(msg),
        }
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        match err {
            SimError::InvalidConfig(_)
            | SimError::Parse { .. }
            | SimError::GenomeLength { .. }
            | SimError::Analysis(_) => CliError::Usage(err.to_string()),
            SimError::NonFinite(_) | SimError::Divergence { .. } | SimError::Io(_) => {
                CliError::Runtime(err.to_string())
            }
        }
    }
}

pub fn run(args: Cli) -> Result<(), CliError> {
    match args.command {
        Command::Evolve(args) => evolve::run(args),
        Command::Simulate(args) => simulate::run(args),
        Command::Probe(args) => probe::run(args),
        Command::Stats(args) => stats::run(args),
        Command::Classify(args) => classify::run(args),
        Command::Defaults => {
            print!("{}", luxbot_core::config::default_config_text());
            Ok(())
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

/// Prefix parse errors with the file they came from.
pub fn anchored<T>(path: &Path, result: luxbot_core::Result<T>) -> Result<T, CliError> {
    result.map_err(|err| match err {
        SimError::Parse { .. } | SimError::InvalidConfig(_) => {
            CliError::Usage(format!("{}: {err}", path.display()))
        }
        other => other.into(),
    })
}

pub fn load_population(path: &Path) -> Result<(Population64, EvolutionConfig64), CliError> {
    let text = read_text(path)?;
    anchored(path, parse_population::<f64>(&text))
}

/// Collects output files and finishes with a manifest; all writes go
/// through a temp file in the same directory followed by a rename.
pub struct OutDir {
    root: PathBuf,
    written: Vec<(String, String)>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", root.display())))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.written.push((name.to_string(), manifest::sha256_hex(contents.as_bytes())));
        Ok(path)
    }

    pub fn finish_manifest(
        self,
        command: &str,
        seed: Option<u64>,
        config_echo: &str,
    ) -> Result<(), CliError> {
        let text = manifest::render(command, seed, &self.written, config_echo);
        write_atomic(&self.root.join("manifest.txt"), text.as_bytes())
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = match path.file_name() {
        Some(name) => path.with_file_name(format!(".{}.tmp", name.to_string_lossy())),
        None => return Err(CliError::Runtime(format!("bad output path {}", path.display()))),
    };
    let io_err = |e: std::io::Error| CliError::Runtime(format!("{}: {e}", path.display()));
    fs::write(&tmp, bytes).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}
