//! Optimizer defaults from an optional configuration file.
//!
//! If the `MMBEAM_CONFIG` environment variable names a file, it is loaded
//! as `key = value` lines (`#` comments allowed) overriding the built-in
//! [`PsoConfig`] defaults. Command-line flags still win over the file.

use mmbeam::error::{Error, Result};
use mmbeam::optimizer::PsoConfig;
use std::path::PathBuf;

pub const CONFIG_ENV: &str = "MMBEAM_CONFIG";

pub struct RunConfig {
    pub pso: PsoConfig,
    /// The config file that was loaded, if any — recorded in manifests.
    pub source: Option<PathBuf>,
}

/// Built-in defaults, overridden by the `MMBEAM_CONFIG` file when set.
pub fn load_run_config() -> Result<RunConfig> {
    let mut pso = PsoConfig::default();
    let Some(path) = std::env::var_os(CONFIG_ENV) else {
        return Ok(RunConfig { pso, source: None });
    };
    let path = PathBuf::from(path);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let origin = path.display().to_string();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| {
            Error::parse(&origin, line, format!("expected `key = value`, got `{trimmed}`"))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad_num =
            || Error::parse(&origin, line, format!("{key} `{value}` is not a number"));
        match key {
            "swarm_size" => pso.swarm_size = value.parse().map_err(|_| bad_num())?,
            "iterations" => pso.iterations = value.parse().map_err(|_| bad_num())?,
            "inertia" => pso.inertia = value.parse().map_err(|_| bad_num())?,
            "cognitive" => pso.cognitive = value.parse().map_err(|_| bad_num())?,
            "social" => pso.social = value.parse().map_err(|_| bad_num())?,
            "velocity_clamp" => pso.velocity_clamp = value.parse().map_err(|_| bad_num())?,
            "grid_step_deg" => pso.grid_step_deg = value.parse().map_err(|_| bad_num())?,
            "sector" => pso.sector = super::parse_sector(value)?,
            other => {
                return Err(Error::parse(&origin, line, format!("unknown key `{other}`")))
            }
        }
    }
    pso.validate()?;
    Ok(RunConfig {
        pso,
        source: Some(path),
    })
}
