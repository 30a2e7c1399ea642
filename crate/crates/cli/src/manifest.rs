//! Run settings: flags, optional config file, and their serialized form.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bfd_core::adapt::{AdaptConfig, RefinementMode};
use bfd_core::nlsolve::NewtonConfig;
use bfd_core::problems::ProblemName;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Example1,
    Example2,
    Example3,
}

impl Problem {
    pub fn name(self) -> ProblemName {
        match self {
            Problem::Example1 => ProblemName::Example1,
            Problem::Example2 => ProblemName::Example2,
            Problem::Example3 => ProblemName::Example3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Uniform,
    Adaptive,
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunManifest {
    pub problem: Problem,
    pub mode: Mode,
    /// Maximum number of solved levels.
    pub levels: usize,
    pub dof_budget: Option<usize>,
    pub c_adt: f64,
    pub newton_tol: f64,
    /// Forchheimer exponent override.
    pub rho: Option<f64>,
    pub out: PathBuf,
    pub threads: Option<usize>,
    /// Seed recorded for property tests; runs themselves are deterministic.
    pub seed: u64,
}

impl Default for RunManifest {
    fn default() -> Self {
        let adapt = AdaptConfig::<f64>::default();
        RunManifest {
            problem: Problem::Example1,
            mode: Mode::Adaptive,
            levels: adapt.max_levels,
            dof_budget: None,
            c_adt: adapt.c_adt,
            newton_tol: adapt.newton.tol,
            rho: None,
            out: PathBuf::from("bfd-out"),
            threads: None,
            seed: 0,
        }
    }
}

impl RunManifest {
    /// Reads a manifest from TOML, or JSON when the extension is `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
        } else {
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels == 0 {
            bail!("--levels must be at least 1");
        }
        if self.dof_budget == Some(0) {
            bail!("--dof-budget must be positive");
        }
        if !(self.c_adt > 0.0 && self.c_adt < 1.0) {
            bail!("--c-adt must lie in (0, 1), got {}", self.c_adt);
        }
        if !(self.newton_tol > 0.0) {
            bail!("--newton-tol must be positive, got {}", self.newton_tol);
        }
        if let Some(rho) = self.rho {
            if !(3.0..=4.0).contains(&rho) {
                bail!("--rho must lie in [3, 4], got {rho}");
            }
        }
        if self.threads == Some(0) {
            bail!("--threads must be at least 1");
        }
        Ok(())
    }

    pub fn adapt_config(&self) -> AdaptConfig<f64> {
        AdaptConfig {
            mode: match self.mode {
                Mode::Uniform => RefinementMode::Uniform,
                Mode::Adaptive => RefinementMode::Adaptive,
            },
            c_adt: self.c_adt,
            max_levels: self.levels,
            dof_budget: self.dof_budget,
            theta_threshold: None,
            newton: NewtonConfig { tol: self.newton_tol, ..NewtonConfig::default() },
        }
    }
}
