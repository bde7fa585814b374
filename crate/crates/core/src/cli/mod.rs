//! Batch front end: job configs in, CSV/JSON artifacts out.
//!
//! `qopt <command> --config job.json --out-dir out/` reads the job, runs
//! it and writes `<name>.csv`, `<name>.meta.json` and (unless `plot` is
//! false) `<name>.gp`. Failures print a JSON error naming the module and
//! operation and exit nonzero.

mod config;
mod execute;
mod output;

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

pub use config::{
    parse_config, parse_config_value, AxisSpec, Command, ConfigError, GridSpec, InversionMethod,
    JobConfig, StateSpec, TomographySpec,
};
pub use execute::{execute_job, JobOutcome};
pub use output::{ArtifactSet, CsvTable, PlotKind};

/// Machine-readable failure.
#[derive(Debug, Clone, PartialEq, Serialize, thiserror::Error)]
#[error("{module}::{operation}: {message}")]
pub struct CliError {
    pub module: String,
    pub operation: String,
    pub message: String,
}

impl CliError {
    pub fn new(module: &str, operation: &str, message: impl ToString) -> Self {
        CliError {
            module: module.into(),
            operation: operation.into(),
            message: message.to_string(),
        }
    }

    pub fn io(operation: &str, path: &Path, e: std::io::Error) -> Self {
        Self::new("cli", operation, format!("{}: {e}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&serde_json::json!({ "error": self })).expect("serializes")
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::new("cli", "parse_config", e)
    }
}

/// Reads a config file and reconciles its `command` with the one given
/// on the command line (the file may omit it).
pub fn load_config(path: &Path, command: Command) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io("load_config", path, e))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| {
        CliError::from(ConfigError {
            path: "<document>".into(),
            message: e.to_string(),
        })
    })?;
    let obj = value.as_object_mut().ok_or_else(|| {
        CliError::from(ConfigError {
            path: "<document>".into(),
            message: "expected a JSON object".into(),
        })
    })?;
    match obj.get("command") {
        None => {
            obj.insert("command".into(), Value::String(command.name().into()));
        }
        Some(Value::String(s)) if s == command.name() => {}
        Some(other) => {
            return Err(ConfigError {
                path: "command".into(),
                message: format!("config says {other}, command line says `{command}`"),
            }
            .into())
        }
    }
    Ok(parse_config_value(value)?)
}

/// Whole invocation: load, run, write. Relative `input` paths resolve
/// against the config file's directory.
pub fn run(
    command: Command,
    config_path: &Path,
    out_dir: &Path,
    verbose: bool,
) -> Result<JobOutcome, CliError> {
    let cfg = load_config(config_path, command)?;
    let base: PathBuf = config_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    if verbose {
        eprintln!("qopt: running `{command}` from {}", config_path.display());
    }
    let outcome = execute_job(&cfg, &base, out_dir)?;
    if verbose {
        for f in &outcome.artifacts.files {
            eprintln!("qopt: wrote {}", out_dir.join(f).display());
        }
    }
    Ok(outcome)
}
