//! Batch front-end: config parsing, experiment runners and CSV/SVG output.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::{Path, PathBuf};

pub use commands::run_command;
pub use config::{parse_config, Command, ConfigError, ConventionChoice, NonlinearityKind, RunConfig};
pub use output::{num, Plot, Series, Table};

use crate::LabError;

/// Exit status classes of the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    /// Bad config, bad arguments or an IO problem: exit 1.
    Validation,
    /// A computation failed or reported a failure flag: exit 2.
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub kind: FailureKind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError {
            kind: FailureKind::Validation,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            kind: FailureKind::Numerical,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            FailureKind::Validation => 1,
            FailureKind::Numerical => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            FailureKind::Validation => "validation",
            FailureKind::Numerical => "numerical",
        };
        // one line, whatever the message held
        write!(f, "error[{tag}]: {}", self.message.replace('\n', " "))
    }
}

impl std::error::Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        match e {
            LabError::InvalidDimension(_) | LabError::InvalidParameter { .. } => CliError::validation(e.to_string()),
            _ => CliError::numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::validation(format!("io: {e}"))
    }
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    /// Set when the run finished but a failure flag was raised (exit 2).
    pub failure: Option<String>,
}

/// Where the artifacts go: `--out` first, then `out=` from the config, then `./out`.
pub fn output_dir(cfg: &RunConfig, cli_out: Option<&Path>) -> PathBuf {
    cli_out
        .map(Path::to_path_buf)
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// Runs `command` and writes its artifacts under `dir`. A command given on
/// the command line must agree with `command=` in the config when both are set.
pub fn run(command: Command, cfg: &RunConfig, dir: &Path) -> Result<RunOutput, CliError> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::validation(format!(
                "command `{command}` does not match config command `{c}`"
            )));
        }
    }
    let out = run_command(command, cfg)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::validation(format!("io: {}: {e}", dir.display())))?;
    for t in &out.tables {
        t.write(dir).map_err(|e| CliError::validation(format!("io: {}: {e}", dir.display())))?;
    }
    if cfg.plot {
        for p in &out.plots {
            p.write(dir)?;
        }
    }
    match &out.failure {
        Some(msg) => Err(CliError::numerical(msg.clone())),
        None => Ok(out),
    }
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::validation(format!("io: {}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

/// Parses `ADAMS_LAB_THREADS`; `None` when unset.
pub fn thread_count(value: Option<&str>) -> Result<Option<usize>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::validation(format!(
                "ADAMS_LAB_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}
