//! Job configuration documents.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::cats::CatStateDoc;
use crate::dynamics::HamiltonianSpec;
use crate::gaussian::{GaussianStateDoc, PndOptions};
use crate::grid::UniformGrid;
use crate::parametric::ProfileSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Pnd,
    Wigner,
    Qfunc,
    Evolve,
    Epsilon,
    Cat,
    TomoForward,
    TomoInvert,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Pnd => "pnd",
            Command::Wigner => "wigner",
            Command::Qfunc => "qfunc",
            Command::Evolve => "evolve",
            Command::Epsilon => "epsilon",
            Command::Cat => "cat",
            Command::TomoForward => "tomo-forward",
            Command::TomoInvert => "tomo-invert",
            Command::Verify => "verify",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// State description, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StateSpec {
    Vacuum {
        #[serde(default = "one")]
        n_modes: usize,
    },
    Coherent {
        alpha: Vec<[f64; 2]>,
    },
    Squeezed {
        r: f64,
    },
    Thermal {
        temperature: f64,
        omega: f64,
    },
    Gaussian(GaussianStateDoc),
    /// Squeezed vacuum grown from the ground state by a frequency profile.
    Parametric {
        profile: ProfileSpec,
        t: f64,
    },
    Cat(CatStateDoc),
}

fn one() -> usize {
    1
}

impl StateSpec {
    pub fn is_cat(&self) -> bool {
        matches!(self, StateSpec::Cat(_))
    }
}

/// One grid axis: either `{min, max, n}` or an explicit `points` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<f64>>,
}

impl AxisSpec {
    pub fn range(min: f64, max: f64, n: usize) -> Self {
        AxisSpec {
            min: Some(min),
            max: Some(max),
            n: Some(n),
            points: None,
        }
    }

    /// Resolves to a uniform grid; `field` names the axis in errors.
    pub fn resolve(&self, field: &str) -> Result<UniformGrid, ConfigError> {
        let fail = |message: String| ConfigError {
            path: field.to_string(),
            message,
        };
        match (self.min, self.max, self.n, &self.points) {
            (None, None, None, Some(points)) => {
                UniformGrid::from_points(points).map_err(|e| fail(e.to_string()))
            }
            (Some(min), Some(max), Some(n), None) => {
                if max <= min {
                    return Err(fail(format!(
                        "grid must be strictly increasing, got min {min} >= max {max}"
                    )));
                }
                UniformGrid::new(min, max, n).map_err(|e| fail(e.to_string()))
            }
            _ => Err(fail("give either {min, max, n} or points".into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub q: AxisSpec,
    pub p: AxisSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InversionMethod {
    #[default]
    Fbp,
    Symplectic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomographySpec {
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<AxisSpec>,
    #[serde(default = "default_reg_s")]
    pub reg_s: f64,
    #[serde(default)]
    pub method: InversionMethod,
    /// Half-width of the line integrals for closure-based forward marginals.
    #[serde(default = "default_v_half_width")]
    pub v_half_width: f64,
    #[serde(default = "default_n_v")]
    pub n_v: usize,
    /// Frequency cutoff and sample count of the symplectic inversion.
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_n_r")]
    pub n_r: usize,
}

fn default_angles() -> usize {
    180
}
fn default_reg_s() -> f64 {
    1e-2
}
fn default_v_half_width() -> f64 {
    10.0
}
fn default_n_v() -> usize {
    801
}
fn default_r_max() -> f64 {
    20.0
}
fn default_n_r() -> usize {
    201
}

impl Default for TomographySpec {
    fn default() -> Self {
        TomographySpec {
            angles: default_angles(),
            x: None,
            reg_s: default_reg_s(),
            method: InversionMethod::Fbp,
            v_half_width: default_v_half_width(),
            n_v: default_n_v(),
            r_max: default_r_max(),
            n_r: default_n_r(),
        }
    }
}

/// A validated job.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    /// Stem of the output files; defaults to the command name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<AxisSpec>,
    /// Mode whose reduced state is drawn by `wigner`/`qfunc`.
    #[serde(default)]
    pub mode: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_pnd")]
    pub pnd: PndOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tomography: Option<TomographySpec>,
    /// Input CSV (tomography), relative to the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default = "yes")]
    pub plot: bool,
}

fn default_tolerance() -> f64 {
    1e-9
}
fn default_pnd() -> PndOptions {
    PndOptions::default()
}
fn yes() -> bool {
    true
}

/// Parse or validation failure, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn missing(path: &str, command: Command) -> Self {
        ConfigError {
            path: path.into(),
            message: format!("required by command `{command}`"),
        }
    }
}

/// Parses and validates a job document.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigError {
        path: "<document>".into(),
        message: e.to_string(),
    })?;
    parse_config_value(value)
}

/// As [`parse_config`], from an already parsed JSON value.
pub fn parse_config_value(value: Value) -> Result<JobConfig, ConfigError> {
    let cfg: JobConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        ConfigError {
            path: if path == "." { "<document>".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl JobConfig {
    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.command.name().to_string())
    }

    pub fn tomography(&self) -> TomographySpec {
        self.tomography.clone().unwrap_or_default()
    }

    /// Checks the command-specific required fields and every grid.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let c = self.command;
        let need = |present: bool, path: &str| {
            if present {
                Ok(())
            } else {
                Err(ConfigError::missing(path, c))
            }
        };
        if !(self.tolerance > 0.0) {
            return Err(ConfigError {
                path: "tolerance".into(),
                message: format!("must be positive, got {}", self.tolerance),
            });
        }
        if let Some(stem) = &self.name {
            if stem.is_empty() || stem.contains(['/', '\\']) || stem.starts_with('.') {
                return Err(ConfigError {
                    path: "name".into(),
                    message: "must be a plain file stem".into(),
                });
            }
        }
        if let Some(g) = &self.grid {
            g.q.resolve("grid.q")?;
            g.p.resolve("grid.p")?;
        }
        if let Some(t) = &self.times {
            t.resolve("times")?;
        }
        if let Some(x) = self.tomography.as_ref().and_then(|t| t.x.as_ref()) {
            x.resolve("tomography.x")?;
        }
        match c {
            Command::Pnd => need(self.state.is_some(), "state"),
            Command::Wigner | Command::Qfunc => {
                need(self.state.is_some(), "state")?;
                need(self.grid.is_some(), "grid")
            }
            Command::Evolve => {
                need(self.state.is_some(), "state")?;
                need(self.hamiltonian.is_some(), "hamiltonian")?;
                need(self.times.is_some(), "times")?;
                if self.state.as_ref().is_some_and(StateSpec::is_cat) {
                    return Err(ConfigError {
                        path: "state.kind".into(),
                        message: "evolve takes a Gaussian state".into(),
                    });
                }
                Ok(())
            }
            Command::Epsilon => {
                need(self.profile.is_some(), "profile")?;
                need(self.times.is_some(), "times")
            }
            Command::Cat => {
                need(self.state.is_some(), "state")?;
                if !self.state.as_ref().is_some_and(StateSpec::is_cat) {
                    return Err(ConfigError {
                        path: "state.kind".into(),
                        message: "cat takes a state of kind `cat`".into(),
                    });
                }
                Ok(())
            }
            Command::TomoForward => {
                need(self.state.is_some() || self.input.is_some(), "state")?;
                need(
                    self.tomography.as_ref().is_some_and(|t| t.x.is_some()),
                    "tomography.x",
                )
            }
            Command::TomoInvert => {
                need(self.input.is_some(), "input")?;
                need(self.grid.is_some(), "grid")?;
                let reg_s = self.tomography().reg_s;
                if !(reg_s > 0.0) {
                    return Err(ConfigError {
                        path: "tomography.reg_s".into(),
                        message: format!("must be positive, got {reg_s}"),
                    });
                }
                Ok(())
            }
            Command::Verify => Ok(()),
        }
    }
}
