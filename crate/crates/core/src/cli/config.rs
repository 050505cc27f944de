use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::ValidationSettings;
use crate::model::{ModelParams, QuadratureSpec};
use crate::paths::TimeGrid;
use crate::smpp::SeriesSpec;
use crate::tmpp::{BernsteinSpec, InversionSpec};

fn default_grid() -> TimeGrid {
    TimeGrid { t_max: 1.0, step: 1e-3 }
}

/// Everything a batch run reads: one TOML file, unknown keys rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    #[serde(default)]
    pub seed: u64,
    /// Grid of sampled `H` paths.
    #[serde(default = "default_grid")]
    pub grid: TimeGrid,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub series: SeriesSpec,
    #[serde(default)]
    pub fft: FftConfig,
    #[serde(default)]
    pub inversion: InversionSpec,
    #[serde(default)]
    pub evaluate: EvaluateConfig,
    #[serde(default)]
    pub simulate: SimulateConfig,
    #[serde(default)]
    pub validate: ValidationSettings,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FftConfig {
    /// Power of two; sized from the largest requested state when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransitionMethod {
    Fft,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpcrossingMethod {
    Derivative,
    Integral,
}

fn default_times() -> Vec<f64> {
    vec![1.0]
}
fn default_k_max() -> usize {
    20
}
fn default_transition_methods() -> Vec<TransitionMethod> {
    vec![TransitionMethod::Fft]
}
fn default_levels() -> Vec<usize> {
    vec![2, 3, 4, 5]
}
fn default_upcrossing_methods() -> Vec<UpcrossingMethod> {
    vec![UpcrossingMethod::Derivative, UpcrossingMethod::Integral]
}
fn default_epoch_indices() -> Vec<usize> {
    vec![1, 2, 3]
}
fn default_etas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}
fn default_waiting_indices() -> Vec<usize> {
    vec![1, 2, 3, 5]
}

/// Evaluation points of the table subcommands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    #[serde(default = "default_times")]
    pub times: Vec<f64>,
    /// Start time of `transition` tables.
    #[serde(default)]
    pub tau: f64,
    /// States `0..=k_max`.
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_transition_methods")]
    pub transition_methods: Vec<TransitionMethod>,
    #[serde(default = "default_levels")]
    pub upcrossing_levels: Vec<usize>,
    #[serde(default = "default_upcrossing_methods")]
    pub upcrossing_methods: Vec<UpcrossingMethod>,
    #[serde(default = "default_epoch_indices")]
    pub epoch_indices: Vec<usize>,
    #[serde(default = "default_waiting_indices")]
    pub waiting_indices: Vec<usize>,
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
    /// Time change of `waiting-lt`; the model's multistable subordinator when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bernstein: Option<BernsteinSpec>,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        Self {
            times: default_times(),
            tau: 0.0,
            k_max: default_k_max(),
            transition_methods: default_transition_methods(),
            upcrossing_levels: default_levels(),
            upcrossing_methods: default_upcrossing_methods(),
            epoch_indices: default_epoch_indices(),
            waiting_indices: default_waiting_indices(),
            etas: default_etas(),
            bernstein: None,
        }
    }
}

fn default_n_paths() -> usize {
    1
}
fn default_horizon() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    #[serde(default = "default_n_paths")]
    pub n_paths: usize,
    /// Observation window of SMPP and TMPP paths.
    #[serde(default = "default_horizon")]
    pub horizon: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            n_paths: default_n_paths(),
            horizon: default_horizon(),
        }
    }
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: default_out_dir() }
    }
}

impl RunConfig {
    pub fn new(model: ModelParams) -> Self {
        Self {
            model,
            seed: 0,
            grid: default_grid(),
            quadrature: QuadratureSpec::default(),
            series: SeriesSpec::default(),
            fft: FftConfig::default(),
            inversion: InversionSpec::default(),
            evaluate: EvaluateConfig::default(),
            simulate: SimulateConfig::default(),
            validate: ValidationSettings::default(),
            output: OutputConfig::default(),
        }
    }

    /// Parses and validates TOML text; relative table paths resolve against `base`.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self> {
        let mut cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if let (Some(BernsteinSpec::Custom { path, .. }), Some(base)) = (&mut cfg.evaluate.bernstein, base) {
            if Path::new(path.as_str()).is_relative() {
                *path = base.join(path.as_str()).to_string_lossy().into_owned();
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent()).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks every field before any computation.
    pub fn validate(&self) -> Result<()> {
        let wrap = |field: &str, r: Result<()>| {
            r.map_err(|e| {
                Error::Config(format!(
                    "{field}: {}",
                    e.to_string().trim_start_matches("domain error: ")
                ))
            })
        };
        wrap("model", self.model.validate())?;
        wrap("grid", self.grid.validate())?;
        wrap("quadrature", self.quadrature.validate())?;
        wrap("validate", self.validate.validate())?;
        if let Some(size) = self.fft.size {
            if size < 2 || !size.is_power_of_two() {
                return Err(Error::Config(format!(
                    "fft.size must be a power of two >= 2, got {size}"
                )));
            }
        }
        let InversionSpec::GaverStehfest { order } = self.inversion;
        if order < 2 || order % 2 == 1 || order > 16 {
            return Err(Error::Config(format!(
                "inversion.order must be even and in [2, 16], got {order}"
            )));
        }
        if self.series.r_max == 0 || !(self.series.tolerance > 0.0) {
            return Err(Error::Config(
                "series.r_max must be >= 1 and series.tolerance positive".into(),
            ));
        }
        let ev = &self.evaluate;
        if ev.times.is_empty() || ev.times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err(Error::Config(
                "evaluate.times must be a nonempty list of positive times".into(),
            ));
        }
        if !(ev.tau >= 0.0 && ev.tau.is_finite()) {
            return Err(Error::Config(format!(
                "evaluate.tau must be nonnegative, got {}",
                ev.tau
            )));
        }
        if ev.etas.is_empty() || ev.etas.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Config(
                "evaluate.etas must be a nonempty list of positive reals".into(),
            ));
        }
        for (name, list, min) in [
            ("upcrossing_levels", &ev.upcrossing_levels, 1),
            ("epoch_indices", &ev.epoch_indices, 1),
            ("waiting_indices", &ev.waiting_indices, 1),
        ] {
            if list.is_empty() || list.iter().any(|&k| k < min) {
                return Err(Error::Config(format!(
                    "evaluate.{name} must be a nonempty list of integers >= {min}"
                )));
            }
        }
        if ev.transition_methods.is_empty() || ev.upcrossing_methods.is_empty() {
            return Err(Error::Config("evaluate method lists must be nonempty".into()));
        }
        if let Some(b) = &ev.bernstein {
            if !matches!(b, BernsteinSpec::Custom { .. }) {
                wrap("evaluate.bernstein", b.validate())?;
            }
        }
        if !(self.simulate.horizon > 0.0 && self.simulate.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "simulate.horizon must be positive, got {}",
                self.simulate.horizon
            )));
        }
        Ok(())
    }
}
