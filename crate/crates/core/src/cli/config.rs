use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ModelParams, RabiMode};
use crate::error::{Error, Result};
use crate::fock::DEFAULT_TAIL_TOL;

/// Resolved run configuration: flags override the config file, which
/// overrides these defaults.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub nbar: f64,
    pub alpha_phase: f64,
    pub k: u32,
    pub cutoff: usize,
    pub mode: RabiMode,
    pub output_dir: PathBuf,
    pub tail_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            nbar: 50.0,
            alpha_phase: 0.0,
            k: 4,
            cutoff: 256,
            mode: RabiMode::Quadratic,
            output_dir: PathBuf::from("jcm-out"),
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }
}

/// Partial configuration, as read from a JSON file or collected from flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub nbar: Option<f64>,
    pub alpha_phase: Option<f64>,
    pub k: Option<u32>,
    pub cutoff: Option<usize>,
    pub mode: Option<RabiMode>,
    pub output_dir: Option<PathBuf>,
    pub tail_tol: Option<f64>,
}

impl ConfigOverrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::parse(&path.display().to_string(), e.to_string()))
    }

    fn apply(&self, config: &mut RunConfig) {
        if let Some(v) = self.nbar {
            config.nbar = v;
        }
        if let Some(v) = self.alpha_phase {
            config.alpha_phase = v;
        }
        if let Some(v) = self.k {
            config.k = v;
        }
        if let Some(v) = self.cutoff {
            config.cutoff = v;
        }
        if let Some(v) = self.mode {
            config.mode = v;
        }
        if let Some(v) = &self.output_dir {
            config.output_dir = v.clone();
        }
        if let Some(v) = self.tail_tol {
            config.tail_tol = v;
        }
    }
}

impl RunConfig {
    pub fn resolve(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let mut config = RunConfig::default();
        if let Some(file) = file {
            file.apply(&mut config);
        }
        flags.apply(&mut config);
        config.params()?;
        Ok(config)
    }

    pub fn alpha(&self) -> C64 {
        C64::from_polar(self.nbar.sqrt(), self.alpha_phase)
    }

    pub fn params(&self) -> Result<ModelParams> {
        if !(self.nbar.is_finite() && self.nbar >= 0.0) {
            return Err(Error::InvalidParams(format!("nbar must be a finite non-negative number, got {}", self.nbar)));
        }
        if !self.alpha_phase.is_finite() {
            return Err(Error::InvalidParams("alpha phase must be finite".into()));
        }
        ModelParams::new(self.k, self.alpha(), self.cutoff, self.mode, self.tail_tol)
    }
}
