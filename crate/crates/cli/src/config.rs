//! Run configuration: one self-describing file per run (TOML or JSON,
//! inferred from the extension), with dotted-path command-line overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use sbs_core::params::{EnvironmentSpec, ModelParams};

fn one() -> f64 {
    1.0
}

fn default_out_dir() -> String {
    "out".to_string()
}

fn default_fock_budget() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSection {
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "Omega")]
    pub omega: f64,
    pub gamma0_bar: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(rename = "kB", default = "one")]
    pub k_b: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnvSection {
    #[serde(rename = "omega_L")]
    pub omega_l: f64,
    #[serde(rename = "omega_U")]
    pub omega_u: f64,
    pub m: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub n_unobserved: usize,
    pub n_observed_per_mac: usize,
    pub n_macrofractions: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSection {
    pub t_min: f64,
    pub t_max: f64,
    pub t_points: usize,
    #[serde(default = "default_t_scale")]
    pub t_scale: TimeScale,
    #[serde(rename = "delta_X")]
    pub delta_x: f64,
    pub epsilon_dec: f64,
    pub epsilon_ort: f64,
    #[serde(default = "default_fock_budget")]
    pub fock_budget: f64,
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
}

fn default_t_scale() -> TimeScale {
    TimeScale::Linear
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSection,
    pub env: EnvSection,
    pub run: RunSection,
}

impl RunConfig {
    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(
            self.model.mass,
            self.model.omega,
            self.model.gamma0_bar,
            self.model.hbar,
            self.model.k_b,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn env_spec(&self) -> Result<EnvironmentSpec, CliError> {
        EnvironmentSpec::new(
            self.env.omega_l,
            self.env.omega_u,
            self.env.m,
            self.env.temperature,
            self.env.n_unobserved,
            self.env.n_observed_per_mac,
            self.env.n_macrofractions,
            self.env.seed,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn time_grid(&self) -> Result<Vec<f64>, CliError> {
        let r = &self.run;
        if r.t_points == 0 {
            return Err(CliError::Config("run.t_points must be at least 1".into()));
        }
        if r.t_points == 1 {
            return Ok(vec![r.t_min]);
        }
        if r.t_max <= r.t_min || r.t_max.is_nan() || r.t_min.is_nan() {
            return Err(CliError::Config(format!(
                "run.t_max ({}) must exceed run.t_min ({})",
                r.t_max, r.t_min
            )));
        }
        let n = r.t_points;
        let grid = match r.t_scale {
            TimeScale::Linear => (0..n)
                .map(|k| r.t_min + (r.t_max - r.t_min) * k as f64 / (n - 1) as f64)
                .collect(),
            TimeScale::Log => {
                if r.t_min <= 0.0 {
                    return Err(CliError::Config(
                        "run.t_min must be positive for log time scale".into(),
                    ));
                }
                let ratio = r.t_max / r.t_min;
                (0..n)
                    .map(|k| r.t_min * ratio.powf(k as f64 / (n - 1) as f64))
                    .collect()
            }
        };
        Ok(grid)
    }
}

/// Load a config file, apply `key=value` overrides (dotted paths), and
/// deserialize. Unknown extensions and malformed content are config errors.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let mut value: serde_json::Value = match ext {
        "toml" => {
            let v: toml::Value = toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            serde_json::to_value(v).map_err(|e| CliError::Config(e.to_string()))?
        }
        "json" => serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        other => {
            return Err(CliError::Config(format!(
                "unsupported config extension '{other}' (use .toml or .json)"
            )))
        }
    };
    for entry in overrides {
        apply_override(&mut value, entry)?;
    }
    serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_scalar(raw: &str) -> serde_json::Value {
    if let Ok(v) = raw.parse::<i64>() {
        return serde_json::Value::from(v);
    }
    if let Ok(v) = raw.parse::<u64>() {
        return serde_json::Value::from(v);
    }
    if let Ok(v) = raw.parse::<f64>() {
        return serde_json::Value::from(v);
    }
    if let Ok(v) = raw.parse::<bool>() {
        return serde_json::Value::from(v);
    }
    serde_json::Value::from(raw)
}

/// Apply one `section.key=value` override to the config tree.
fn apply_override(root: &mut serde_json::Value, entry: &str) -> Result<(), CliError> {
    let (path, raw) = entry
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override '{entry}' is not KEY=VALUE")))?;
    let mut node = &mut *root;
    let parts: Vec<&str> = path.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!(
            "override key '{path}' has empty segments"
        )));
    }
    for part in &parts[..parts.len() - 1] {
        node = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("override key '{path}' crosses a scalar")))?
            .entry(part.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    node.as_object_mut()
        .ok_or_else(|| CliError::Config(format!("override key '{path}' crosses a scalar")))?
        .insert(parts[parts.len() - 1].to_string(), parse_scalar(raw));
    Ok(())
}
