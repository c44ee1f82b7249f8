//! Run configuration: defaults, an optional TOML file, then command-line
//! flags, each layer overriding the one before.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context};
use serde::{Deserialize, Serialize};
use steiner_qubo_core::anneal::{Algorithm, Interpolation, Schedule};
use steiner_qubo_core::graph::DEFAULT_BIG;
use steiner_qubo_core::qubo::{FormulationConfig, OverlapRule, DEFAULT_LAMBDA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Sampler {
    Sa,
    Sqa,
}

impl From<Sampler> for Algorithm {
    fn from(s: Sampler) -> Self {
        match s {
            Sampler::Sa => Algorithm::Sa,
            Sampler::Sqa => Algorithm::Sqa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Overlap {
    /// Each target after the first meets a path of an earlier target.
    Preceding,
    /// Each target after the first meets any other path.
    Any,
}

impl From<Overlap> for OverlapRule {
    fn from(o: Overlap) -> Self {
        match o {
            Overlap::Preceding => OverlapRule::Preceding,
            Overlap::Any => OverlapRule::AnyOther,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Linear,
    Geometric,
}

impl From<Interp> for Interpolation {
    fn from(i: Interp) -> Self {
        match i {
            Interp::Linear => Interpolation::Linear,
            Interp::Geometric => Interpolation::Geometric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
}

/// Fully resolved settings, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub instance: Option<PathBuf>,
    /// Horizon `S`; `None` means the vertex count.
    pub steps: Option<usize>,
    pub lambda: i64,
    pub big: i64,
    pub slack_bits: Option<usize>,
    pub overlap: Overlap,
    pub sampler: Sampler,
    pub reads: usize,
    pub sweeps: usize,
    pub beta: [f64; 2],
    pub beta_interpolation: Interp,
    pub gamma: [f64; 2],
    pub gamma_interpolation: Interp,
    pub trotter: usize,
    /// Energy unit for `beta` and `gamma`; `None` means `lambda / 10`.
    pub energy_scale: Option<f64>,
    pub seed: u64,
    pub format: Format,
    pub prune: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            instance: None,
            steps: None,
            lambda: DEFAULT_LAMBDA,
            big: DEFAULT_BIG,
            slack_bits: None,
            overlap: Overlap::Preceding,
            sampler: Sampler::Sqa,
            reads: 1000,
            sweeps: 200,
            beta: [0.5, 30.0],
            beta_interpolation: Interp::Geometric,
            gamma: [3.0, 0.01],
            gamma_interpolation: Interp::Linear,
            trotter: 8,
            energy_scale: None,
            seed: 0,
            format: Format::Json,
            prune: false,
        }
    }
}

/// One layer of optional settings: a config file or the parsed flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub instance: Option<PathBuf>,
    pub steps: Option<usize>,
    pub lambda: Option<i64>,
    pub big: Option<i64>,
    pub slack_bits: Option<usize>,
    pub overlap: Option<Overlap>,
    pub sampler: Option<Sampler>,
    pub reads: Option<usize>,
    pub sweeps: Option<usize>,
    pub beta: Option<[f64; 2]>,
    pub beta_interpolation: Option<Interp>,
    pub gamma: Option<[f64; 2]>,
    pub gamma_interpolation: Option<Interp>,
    pub trotter: Option<usize>,
    pub energy_scale: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub prune: Option<bool>,
}

impl Overrides {
    pub fn from_toml(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { self.$f = v; } )* };
        }
        macro_rules! take_opt {
            ($($f:ident),*) => { $( if o.$f.is_some() { self.$f = o.$f.clone(); } )* };
        }
        take!(
            lambda,
            big,
            overlap,
            sampler,
            reads,
            sweeps,
            beta,
            beta_interpolation,
            gamma,
            gamma_interpolation,
            trotter,
            seed,
            format,
            prune
        );
        take_opt!(instance, steps, slack_bits, energy_scale);
    }

    /// Defaults, then `file`, then `flags`.
    pub fn resolve(file: Option<&Overrides>, flags: &Overrides) -> anyhow::Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(f) = file {
            cfg.apply(f);
        }
        cfg.apply(flags);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        ensure!(
            self.lambda > 0,
            "lambda must be positive, got {}",
            self.lambda
        );
        ensure!(self.big > 0, "big must be positive, got {}", self.big);
        ensure!(self.reads > 0, "reads must be at least 1");
        ensure!(self.steps != Some(0), "steps must be at least 1");
        if let Err(e) = self.schedule().validate() {
            bail!("invalid schedule: {e}");
        }
        Ok(())
    }

    pub fn formulation(&self) -> FormulationConfig {
        FormulationConfig {
            steps: self.steps,
            lambda: self.lambda,
            big: self.big,
            slack_bits: self.slack_bits,
            overlap: self.overlap.into(),
        }
    }

    pub fn energy_unit(&self) -> f64 {
        self.energy_scale.unwrap_or(self.lambda as f64 / 10.0)
    }

    pub fn schedule(&self) -> Schedule {
        Schedule {
            num_sweeps: self.sweeps,
            beta_range: (self.beta[0], self.beta[1]),
            beta_interpolation: self.beta_interpolation.into(),
            gamma_range: (self.gamma[0], self.gamma[1]),
            gamma_interpolation: self.gamma_interpolation.into(),
            trotter_slices: self.trotter,
            energy_scale: Some(self.energy_unit()),
        }
    }
}
