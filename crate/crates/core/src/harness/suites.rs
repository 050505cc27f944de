use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::empirical::{empirical_laplace, empirical_pmf, MeanEstimate};
use super::ks::{ks_distance, ks_distance_to, ks_threshold};
use super::report::{Check, ComparisonReport, KsCheck, TrendCheck};
use crate::error::{domain, Result};
use crate::model::{bernstein_integral, CumulativeIntegral, ModelParams, QuadratureSpec};
use crate::paths::{
    sample_multistable_at, sample_tangent_pair, sample_tmpp_path, sample_tmpp_waiting_times, CountingPath, RngSpec,
    SmppSampler, TimeGrid,
};
use crate::smpp::{default_fft_size, smpp_transition_pmf};
use crate::tmpp::{tmpp_pmf, waiting_time_lt, InversionSpec};

/// Which comparisons to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Smpp,
    Tmpp,
    Localizability,
    All,
}

// Disjoint stream ranges per sampled quantity keep every suite reproducible
// on its own and independent of the others.
const SMPP_STREAMS: u64 = 1 << 40;
const WAITING_STREAMS: u64 = 2 << 40;
const TMPP_STREAMS: u64 = 3 << 40;
const H_STREAMS: u64 = 4 << 40;
const TANGENT_STREAMS: u64 = 5 << 40;

fn default_n_samples() -> usize {
    100_000
}
fn default_sigma() -> f64 {
    3.0
}
fn default_ks_coefficient() -> f64 {
    1.628
}
fn default_min_expected() -> f64 {
    5.0
}
fn default_max_tested() -> usize {
    8
}
fn default_t() -> f64 {
    1.0
}
fn default_pmf_states() -> usize {
    1024
}
fn default_epoch_indices() -> Vec<usize> {
    vec![1, 2, 3]
}
fn default_waiting_indices() -> Vec<usize> {
    vec![1, 2, 3, 5]
}
fn default_etas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}
fn default_laplace_args() -> Vec<f64> {
    vec![0.5, 1.0, 2.0]
}
fn default_path_step() -> f64 {
    0.01
}
fn default_grid_max() -> f64 {
    100.0
}

/// Sample sizes, test thresholds and evaluation points of the suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationSettings {
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_sigma")]
    pub sigma_multiplier: f64,
    /// `c` in the KS threshold `c·√(1/n)` (one sample) or `c·√(1/n + 1/m)`.
    #[serde(default = "default_ks_coefficient")]
    pub ks_coefficient: f64,
    /// States with a smaller expected count are pooled.
    #[serde(default = "default_min_expected")]
    pub min_expected_count: f64,
    /// Cap on individually tested states, which bounds the family-wise false
    /// alarm rate; later states join the pooled bucket.
    #[serde(default = "default_max_tested")]
    pub max_tested_states: usize,
    /// Observation time of the state distributions.
    #[serde(default = "default_t")]
    pub t: f64,
    /// Table length of the analytic SMPP pmf.
    #[serde(default = "default_pmf_states")]
    pub pmf_states: usize,
    /// Jump epochs whose laws are KS-tested.
    #[serde(default = "default_epoch_indices")]
    pub epoch_indices: Vec<usize>,
    #[serde(default = "default_waiting_indices")]
    pub waiting_indices: Vec<usize>,
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
    /// Arguments `u` of the `E e^{−u H(t)}` checks.
    #[serde(default = "default_laplace_args")]
    pub laplace_args: Vec<f64>,
    /// Cell width of sampled `H` paths.
    #[serde(default = "default_path_step")]
    pub path_step: f64,
    /// Extent of the `H` grid behind TMPP paths.
    #[serde(default = "default_grid_max")]
    pub grid_max: f64,
    #[serde(default)]
    pub localizability: LocalizabilitySettings,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self {
            n_samples: default_n_samples(),
            sigma_multiplier: default_sigma(),
            ks_coefficient: default_ks_coefficient(),
            min_expected_count: default_min_expected(),
            max_tested_states: default_max_tested(),
            t: default_t(),
            pmf_states: default_pmf_states(),
            epoch_indices: default_epoch_indices(),
            waiting_indices: default_waiting_indices(),
            etas: default_etas(),
            laplace_args: default_laplace_args(),
            path_step: default_path_step(),
            grid_max: default_grid_max(),
            localizability: LocalizabilitySettings::default(),
        }
    }
}

fn default_loc_n() -> usize {
    10_000
}
fn default_loc_t() -> f64 {
    0.5
}
fn default_radii() -> Vec<f64> {
    vec![0.1, 0.01, 0.001]
}
fn default_substeps() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizabilitySettings {
    #[serde(default = "default_loc_n")]
    pub n_samples: usize,
    #[serde(default = "default_loc_t")]
    pub t: f64,
    /// Window lengths `r`, largest first.
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    /// Cells per window when sampling the increment.
    #[serde(default = "default_substeps")]
    pub substeps: usize,
}

impl Default for LocalizabilitySettings {
    fn default() -> Self {
        Self {
            n_samples: default_loc_n(),
            t: default_loc_t(),
            radii: default_radii(),
            substeps: default_substeps(),
        }
    }
}

impl ValidationSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if !positive(self.sigma_multiplier) || !positive(self.ks_coefficient) || !positive(self.min_expected_count) {
            return domain("sigma_multiplier, ks_coefficient and min_expected_count must be positive");
        }
        if !positive(self.t) || !positive(self.path_step) || !positive(self.grid_max) {
            return domain("t, path_step and grid_max must be positive");
        }
        if self.n_samples == 0 || self.localizability.n_samples == 0 {
            return domain("sample sizes must be at least 1");
        }
        if self.epoch_indices.contains(&0) || self.waiting_indices.contains(&0) {
            return domain("epoch and waiting-time indices start at 1");
        }
        if !self.etas.iter().chain(&self.laplace_args).all(|&x| positive(x)) {
            return domain("Laplace arguments must be positive");
        }
        let loc = &self.localizability;
        if !(loc.t >= 0.0) || loc.substeps == 0 || !loc.radii.iter().all(|&r| positive(r)) {
            return domain("localizability needs t >= 0, positive radii and substeps >= 1");
        }
        Ok(())
    }
}

/// Runs `suite` on `params`; `All` yields the SMPP, TMPP and localizability
/// reports in that order.
pub fn run_suite(
    suite: Suite,
    params: &ModelParams,
    settings: &ValidationSettings,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<Vec<ComparisonReport>> {
    Ok(match suite {
        Suite::Smpp => vec![validate_smpp(params, settings, seed, quad)?],
        Suite::Tmpp => vec![validate_tmpp(params, settings, seed, quad)?],
        Suite::Localizability => vec![validate_localizability(params, settings, seed)?],
        Suite::All => vec![
            validate_smpp(params, settings, seed, quad)?,
            validate_tmpp(params, settings, seed, quad)?,
            validate_localizability(params, settings, seed)?,
        ],
    })
}

/// `P(Poisson(m) >= j)`.
fn poisson_at_least(m: f64, j: usize) -> f64 {
    let mut term = (-m).exp();
    let mut below = 0.0;
    for i in 0..j {
        below += term;
        term *= m / (i + 1) as f64;
    }
    (1.0 - below).clamp(0.0, 1.0)
}

/// Sampled SMPP state at `t` against the analytic pmf, and the laws of the
/// first jump epochs against `P(T_j <= x) = P(Poisson(Λ(0, x)) >= j)`.
pub fn validate_smpp(
    params: &ModelParams,
    settings: &ValidationSettings,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<ComparisonReport> {
    params.validate()?;
    settings.validate()?;
    let n = settings.n_samples;
    let t = settings.t;
    let j_max = settings.epoch_indices.iter().copied().max().unwrap_or(0);
    // Λ(0, horizon) >= 2 j_max + 10; later epochs are censored
    let (lo, hi) = params.alpha.bounds();
    let min_rate = params.lambda.powf(if params.lambda >= 1.0 { lo } else { hi });
    let horizon = t.max((2 * j_max + 10) as f64 / min_rate);
    let sampler = SmppSampler::new(params, horizon)?;
    let paths: Vec<CountingPath> = (0..n as u64)
        .into_par_iter()
        .map(|i| sampler.sample(RngSpec::new(seed, SMPP_STREAMS + i)))
        .collect::<Result<_>>()?;

    let mut report = ComparisonReport::new("smpp", n, settings.sigma_multiplier);
    let k_max = settings.pmf_states;
    let table = smpp_transition_pmf(params, 0.0, t, k_max, default_fft_size(k_max), quad)?;
    let observed = empirical_pmf(&paths, t)?;
    report.push_pmf_checks(
        &format!("t={t}"),
        &observed,
        &table.probs,
        settings.min_expected_count,
        settings.max_tested_states,
    );

    let lambda_int = CumulativeIntegral::intensity(params, horizon)?;
    for &j in &settings.epoch_indices {
        let epochs: Vec<f64> = paths
            .iter()
            .map(|p| p.epochs().get(j - 1).copied().unwrap_or(f64::INFINITY))
            .collect();
        let censored = epochs.iter().filter(|e| e.is_infinite()).count();
        if censored > 0 {
            report.note(format!("T_{j}: {censored} samples censored at {horizon}"));
        }
        let d = ks_distance_to(&epochs, |x| {
            if x.is_finite() {
                poisson_at_least(lambda_int.value(x), j)
            } else {
                1.0
            }
        })?;
        report.push_ks(KsCheck {
            label: format!("T_{j} vs analytic law"),
            statistic: d,
            n_samples: n,
            threshold: Some(ks_threshold(settings.ks_coefficient, n, None)),
        });
    }
    Ok(report)
}

/// `P(N(L(t)) = k)` from sampled TMPP paths against the inverted transform,
/// `E e^{−ηJ_n}` against the waiting-time transform, and `E e^{−uH(t)}`
/// against `exp(−∫_0^t u^{α(τ)} dτ)`.
pub fn validate_tmpp(
    params: &ModelParams,
    settings: &ValidationSettings,
    seed: u64,
    quad: &QuadratureSpec,
) -> Result<ComparisonReport> {
    params.validate()?;
    settings.validate()?;
    let n = settings.n_samples;
    let t = settings.t;
    let mut report = ComparisonReport::new("tmpp", n, settings.sigma_multiplier);

    let grid = TimeGrid::new(settings.grid_max, settings.path_step)?;
    let paths: Vec<CountingPath> = (0..n as u64)
        .into_par_iter()
        .map(|i| sample_tmpp_path(params, &grid, t, RngSpec::new(seed, TMPP_STREAMS + i)))
        .collect::<Result<_>>()?;
    let truncated = paths.iter().filter(|p| p.truncated()).count();
    if truncated > 0 {
        report.note(format!(
            "{truncated} TMPP paths ended before H passed t={t}; raise grid_max"
        ));
    }
    let observed = empirical_pmf(&paths, t)?;
    let inversion = InversionSpec::default();
    let mut expected = Vec::new();
    let mut mass = 0.0;
    for k in 0.. {
        let p = tmpp_pmf(params, k, t, &inversion, quad)?.p;
        expected.push(p);
        mass += p;
        let beyond_mode = k > 0 && p < expected[k - 1];
        if (beyond_mode && (n as f64) * p < settings.min_expected_count) || mass > 1.0 - 1e-9 || k >= 200 {
            break;
        }
    }
    report.push_pmf_checks(
        &format!("t={t}"),
        &observed,
        &expected,
        settings.min_expected_count,
        settings.max_tested_states,
    );

    let n_max = settings.waiting_indices.iter().copied().max().unwrap_or(0);
    if n_max > 0 {
        let waits: Vec<Vec<f64>> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngSpec::new(seed, WAITING_STREAMS + i).rng();
                sample_tmpp_waiting_times(params, n_max, settings.path_step, &mut rng)
            })
            .collect::<Result<_>>()?;
        for &j in &settings.waiting_indices {
            let sample: Vec<f64> = waits.iter().map(|w| w[j - 1]).collect();
            for &eta in &settings.etas {
                let est = empirical_laplace(&sample, 0.0, eta)?;
                let exact = waiting_time_lt(params, j, eta, quad)?;
                report.push_check(Check::from_estimate(format!("E exp(-{eta} J_{j})"), est, exact));
            }
        }
    }

    let h: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngSpec::new(seed, H_STREAMS + i).rng();
            sample_multistable_at(&params.alpha, &[t], settings.path_step, &mut rng).map(|v| v[0])
        })
        .collect::<Result<_>>()?;
    for &u in &settings.laplace_args {
        let est: MeanEstimate = empirical_laplace(&h, t, u)?;
        let exact = (-bernstein_integral(u, 0.0, t, &params.alpha, quad)?).exp();
        report.push_check(Check::from_estimate(format!("E exp(-{u} H({t}))"), est, exact));
    }
    Ok(report)
}

/// KS distance between `(H(t+r) − H(t))/r^{1/α(t)}` and stable(α(t)) draws
/// built from the same uniforms, for each window `r`; the distances must
/// shrink with `r`. Skipped for a constant index, where the two coincide.
pub fn validate_localizability(
    params: &ModelParams,
    settings: &ValidationSettings,
    seed: u64,
) -> Result<ComparisonReport> {
    params.validate()?;
    settings.validate()?;
    let loc = &settings.localizability;
    if params.alpha.as_constant().is_some() {
        return Ok(ComparisonReport::skipped(
            "localizability",
            "constant index: the tangent law equals the global law, so the trend is vacuous",
        ));
    }
    let n = loc.n_samples;
    let mut report = ComparisonReport::new("localizability", n, settings.sigma_multiplier);
    let mut distances = Vec::with_capacity(loc.radii.len());
    for &r in &loc.radii {
        let pairs: Vec<(f64, f64)> = (0..n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = RngSpec::new(seed, TANGENT_STREAMS + i).rng();
                sample_tangent_pair(&params.alpha, loc.t, r, loc.substeps, &mut rng)
            })
            .collect::<Result<_>>()?;
        let (inc, reference): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let d = ks_distance(&inc, &reference)?;
        distances.push(d);
        report.push_ks(KsCheck {
            label: format!("r={r}"),
            statistic: d,
            n_samples: n,
            threshold: None,
        });
    }
    report.set_trend(TrendCheck::new("KS distance as r shrinks", distances));
    report.note(format!(
        "t={}, alpha(t)={}, {} cells per window",
        loc.t,
        params.alpha.eval(loc.t),
        loc.substeps
    ));
    Ok(report)
}
