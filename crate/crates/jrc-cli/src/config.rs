//! Run configuration loaded from a single TOML file.
//!
//! Every key is optional and mirrors a command-line flag; resolution order is
//! flags > config file > built-in defaults (the `JRC_SEED` environment
//! variable slots between the config file and the 12345 fallback for the
//! seed). Unknown keys are rejected so a typo cannot silently fall back to a
//! default.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::parse::{parse_angle, parse_snr_grid};

/// An angle value in TOML: either a bare number (radians) or a string in the
/// command-line angle grammar (`"-22deg"`, `"0.38rad"`).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum AngleValue {
    Radians(f64),
    Text(String),
}

impl AngleValue {
    pub fn radians(&self) -> Result<f64, String> {
        match self {
            AngleValue::Radians(v) if v.is_finite() => Ok(*v),
            AngleValue::Radians(v) => Err(format!("angle {v} must be finite")),
            AngleValue::Text(s) => parse_angle(s),
        }
    }
}

/// An SNR grid in TOML: a bare number or a `"lo:hi:step"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Single(f64),
    Text(String),
}

impl GridValue {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            GridValue::Single(v) if v.is_finite() => Ok(vec![*v]),
            GridValue::Single(v) => Err(format!("grid value {v} must be finite")),
            GridValue::Text(s) => parse_snr_grid(s),
        }
    }
}

/// The config-file half of `RunConfig`: one flat table of optional
/// parameters shared by all commands. Parameters a command does not use are
/// ignored by that command.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    // Run plumbing.
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    /// Output format; `csv` is the only supported value.
    pub format: Option<String>,
    pub bits: Option<bool>,

    // Array geometry.
    pub m: Option<usize>,
    pub l: Option<usize>,
    pub d: Option<f64>,
    pub f_c: Option<f64>,
    pub theta_c: Option<AngleValue>,
    pub theta_n: Option<AngleValue>,

    // Waveform generation.
    pub method: Option<String>,

    // Constraint window.
    pub constraint: Option<String>,
    pub window: Option<String>,
    pub p0: Option<f64>,
    pub delta_db: Option<f64>,
    pub max_iterations: Option<u64>,

    // Fading.
    pub fading: Option<String>,
    pub sigma_h: Option<f64>,
    pub sigma_h2: Option<f64>,
    pub k: Option<f64>,

    // Capacity sweeps.
    pub regime: Option<String>,
    pub snr_db: Option<GridValue>,
    pub methods: Option<String>,
    pub p_out: Option<f64>,
    pub p_out_grid: Option<GridValue>,

    // Sampling / curve resolution.
    pub points: Option<usize>,
    pub samples: Option<usize>,
    pub pulses: Option<usize>,
    pub c_gamma: Option<f64>,
    pub domain: Option<String>,
    pub fourier_terms: Option<usize>,
    pub ks_threshold: Option<f64>,

    // Validation.
    pub criteria: Option<String>,
}

impl FileConfig {
    /// Parse from TOML text. Exposed separately from [`FileConfig::load`] so
    /// the config fuzz target can drive the parser without touching the
    /// filesystem.
    pub fn parse_str(text: &str) -> Result<Self, String> {
        let cfg: FileConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        if let Some(fmt) = &cfg.format {
            if fmt != "csv" {
                return Err(format!("unsupported format `{fmt}`; only `csv` is available"));
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read config {}: {e}", path.display()))?;
        Self::parse_str(&text)
            .map_err(|e| anyhow::anyhow!("config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_angle_and_grid_forms() {
        let cfg = FileConfig::parse_str(
            "m = 16\ntheta_c = \"-22deg\"\ntheta_n = 0.6632\nsnr_db = \"-10:30:1\"\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.m, Some(16));
        assert_eq!(cfg.seed, Some(7));
        let tc = cfg.theta_c.unwrap().radians().unwrap();
        assert!((tc - (-22f64).to_radians()).abs() < 1e-15);
        let tn = cfg.theta_n.unwrap().radians().unwrap();
        assert_eq!(tn, 0.6632);
        assert_eq!(cfg.snr_db.unwrap().values().unwrap().len(), 41);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(FileConfig::parse_str("emm = 16\n").is_err(), "unknown key must be rejected");
        assert!(FileConfig::parse_str("m = -4\n").is_err(), "negative usize must be rejected");
        assert!(FileConfig::parse_str("format = \"json\"\n").is_err(), "non-csv format");
        let cfg = FileConfig::parse_str("theta_c = \"fast\"\n").unwrap();
        assert!(cfg.theta_c.unwrap().radians().is_err(), "bad angle text surfaces at use");
    }

    #[test]
    fn empty_config_is_all_defaults() {
        let cfg = FileConfig::parse_str("").unwrap();
        assert!(cfg.seed.is_none() && cfg.m.is_none() && cfg.output.is_none());
    }
}
