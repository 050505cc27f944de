use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, numeric, Result};
use crate::format::float;
use crate::model::{complex_power, AlphaProfile, ModelParams, ProfileNodes, QuadratureSpec};
use crate::numerics::{binomial, binomial_sequence, dft_coefficients, ln_gamma, CompensatedSum, FourierPlan};

const NEGATIVE_FLOOR: f64 = -1e-10;
const IMAG_WARN: f64 = 1e-12;

/// `E u^{X(τ+t) − X(τ)} = exp(−∫_τ^{τ+t} λ^{α(s)} (1−u)^{α(s)} ds)` for `|u| ≤ 1`.
pub fn smpp_pgf(params: &ModelParams, tau: f64, t: f64, u: Complex64, quad: &QuadratureSpec) -> Result<Complex64> {
    if !(u.norm() <= 1.0 + 1e-12) {
        return domain(format!("PGF argument must satisfy |u| <= 1, got {u}"));
    }
    let nodes = ProfileNodes::new(&params.alpha, tau, tau + t, quad)?;
    Ok(pgf_on_nodes(params.lambda, &nodes, u))
}

fn pgf_on_nodes(lambda: f64, nodes: &ProfileNodes, u: Complex64) -> Complex64 {
    let base = (Complex64::new(1.0, 0.0) - u) * lambda;
    if base.norm() == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    (-nodes.integrate(|a| complex_power(base, a))).exp()
}

/// How a [`PmfTable`] was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfMeta {
    pub tau: f64,
    pub t: f64,
    pub lambda: f64,
    pub alpha: AlphaProfile,
    pub method: String,
}

/// `P(X(τ+t) − X(τ) = k)` for `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    pub probs: Vec<f64>,
    /// `1 − Σ probs`, floored at zero.
    pub tail_bound: f64,
    pub meta: PmfMeta,
}

impl PmfTable {
    pub fn k_max(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn get(&self, k: usize) -> Option<f64> {
        self.probs.get(k).copied()
    }

    /// `P(X < k)`.
    pub fn cdf_below(&self, k: usize) -> f64 {
        self.probs[..k.min(self.probs.len())]
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
    }

    /// `state,prob` rows preceded by `#`-comment metadata lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# tau={}", self.meta.tau)?;
        writeln!(out, "# t={}", self.meta.t)?;
        writeln!(out, "# lambda={}", self.meta.lambda)?;
        writeln!(out, "# alpha={}", serde_json::to_string(&self.meta.alpha)?)?;
        writeln!(out, "# method={}", self.meta.method)?;
        writeln!(out, "# tail_bound={}", self.tail_bound)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["state", "prob"])?;
        for (k, p) in self.probs.iter().enumerate() {
            w.write_record([k.to_string(), float(*p)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Smallest admissible transform size for `k_max`: a power of two `≥ 4 (k_max + 1)`.
pub fn default_fft_size(k_max: usize) -> usize {
    (4 * (k_max + 1)).next_power_of_two().max(64)
}

/// Contour radius used by [`smpp_transition_pmf`]: aliasing is damped by `r^M = 1e-15`.
pub fn default_radius(fft_size: usize) -> f64 {
    10f64.powf(-15.0 / fft_size as f64)
}

/// Transition pmf by extracting PGF coefficients with a size-`fft_size` DFT on
/// the circle of radius [`default_radius`].
pub fn smpp_transition_pmf(
    params: &ModelParams,
    tau: f64,
    t: f64,
    k_max: usize,
    fft_size: usize,
    quad: &QuadratureSpec,
) -> Result<PmfTable> {
    smpp_transition_pmf_with_radius(params, tau, t, k_max, fft_size, default_radius(fft_size), quad)
}

pub fn smpp_transition_pmf_with_radius(
    params: &ModelParams,
    tau: f64,
    t: f64,
    k_max: usize,
    fft_size: usize,
    radius: f64,
    quad: &QuadratureSpec,
) -> Result<PmfTable> {
    params.validate()?;
    if !(tau >= 0.0 && t >= 0.0 && (tau + t).is_finite()) {
        return domain(format!("need tau >= 0 and t >= 0, got tau={tau}, t={t}"));
    }
    if fft_size < 4 * (k_max + 1) || !fft_size.is_power_of_two() {
        return domain(format!(
            "fft_size must be a power of two >= 4 (k_max + 1) = {}, got {fft_size}",
            4 * (k_max + 1)
        ));
    }
    if !(radius > 0.0 && radius <= 1.0) {
        return domain(format!("contour radius must lie in (0, 1], got {radius}"));
    }
    let plan = FourierPlan::new(fft_size)?;
    let nodes = ProfileNodes::new(&params.alpha, tau, tau + t, quad)?;
    let values: Vec<Complex64> = plan
        .roots()
        .iter()
        .map(|w| pgf_on_nodes(params.lambda, &nodes, w * radius))
        .collect();
    let coeffs = dft_coefficients(&values, &plan)?;
    let mut probs = Vec::with_capacity(k_max + 1);
    let mut scale = 1.0;
    for (k, c) in coeffs.iter().take(k_max + 1).enumerate() {
        let p = c * scale;
        if p.im.abs() > IMAG_WARN {
            log::warn!("pmf coefficient {k} has imaginary residue {:e}", p.im);
        }
        if p.re < NEGATIVE_FLOOR {
            return numeric(format!(
                "pmf entry {k} is {:e}; raise fft_size or tighten the quadrature",
                p.re
            ));
        }
        probs.push(p.re.max(0.0));
        scale /= radius;
    }
    let total: CompensatedSum = probs.iter().copied().collect();
    Ok(PmfTable {
        tail_bound: (1.0 - total.value()).max(0.0),
        probs,
        meta: PmfMeta {
            tau,
            t,
            lambda: params.lambda,
            alpha: params.alpha.clone(),
            method: format!("fft(size={fft_size})"),
        },
    })
}

/// Pmf of the homogeneous process at index `alpha`:
/// `p_n = Σ_r (−1)^{r+n}/r! λ^{αr} t^r C(αr, n)`.
pub fn homogeneous_series_pmf(alpha: f64, lambda: f64, t: f64, n: u64) -> f64 {
    let x = lambda.powf(alpha) * t;
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let mut sum = CompensatedSum::new();
    let ln_x = x.ln();
    let r_min = (n as f64 / alpha).ceil() as usize + 2 * (x.ceil() as usize) + 20;
    for r in 0..2000usize {
        let mag = (r as f64 * ln_x - ln_gamma(r as f64 + 1.0)).exp();
        let sign = if (r as u64 + n).is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = sign * mag * binomial(alpha * r as f64, n);
        sum.add(term);
        if r > r_min && term.abs() < 1e-22 {
            break;
        }
    }
    sum.value()
}

/// Truncation of the `r`-fold series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesSpec {
    pub r_max: usize,
    /// A last-term magnitude above this logs an accuracy warning.
    #[serde(default = "default_series_tol")]
    pub tolerance: f64,
}

fn default_series_tol() -> f64 {
    1e-8
}

impl Default for SeriesSpec {
    fn default() -> Self {
        Self {
            r_max: 12,
            tolerance: default_series_tol(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Magnitude of the last term kept.
    pub error_estimate: f64,
}

/// Transition probability from the `r`-fold integral series.
///
/// The `r`-fold integrand `λ^{β} C(β, n)` with `β = α(s_1) + … + α(s_r)` factorizes
/// by Vandermonde's identity, so each `r`-fold integral equals `[yⁿ] m(y)^r` with
/// `m(y) = Σ_j y^j ∫ λ^{α(s)} C(α(s), j) ds`, and no Monte Carlo is needed.
pub fn smpp_series_pmf(
    params: &ModelParams,
    tau: f64,
    t: f64,
    n: usize,
    spec: &SeriesSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesValue> {
    params.validate()?;
    if n == 0 {
        return domain("series form covers n >= 1; p_0 is exp(-Λ)");
    }
    if spec.r_max < 1 {
        return domain("r_max must be at least 1");
    }
    if !(tau >= 0.0 && t >= 0.0) {
        return domain(format!("need tau >= 0 and t >= 0, got tau={tau}, t={t}"));
    }
    let nodes = ProfileNodes::new(&params.alpha, tau, tau + t, quad)?;
    let ln_lambda = params.lambda.ln();
    let m: Vec<f64> = (0..=n)
        .map(|j| nodes.integrate(|a| (a * ln_lambda).exp() * binomial(a, j as u64)))
        .collect();
    // power holds the coefficients of m(y)^r up to y^n
    let mut power = vec![0.0; n + 1];
    power[0] = 1.0;
    let mut sum = CompensatedSum::new();
    let mut last = 0.0;
    let mut inv_fact = 1.0;
    for r in 1..=spec.r_max {
        let mut next = vec![0.0; n + 1];
        for (i, &pi) in power.iter().enumerate() {
            if pi == 0.0 {
                continue;
            }
            for (j, &mj) in m.iter().enumerate().take(n + 1 - i) {
                next[i + j] += pi * mj;
            }
        }
        power = next;
        inv_fact /= r as f64;
        let sign = if (n + r).is_multiple_of(2) { 1.0 } else { -1.0 };
        last = sign * inv_fact * power[n];
        sum.add(last);
    }
    if last.abs() > spec.tolerance {
        log::warn!(
            "series pmf at n = {n}: last term {:e} exceeds tolerance {:e}",
            last.abs(),
            spec.tolerance
        );
    }
    Ok(SeriesValue {
        value: sum.value(),
        error_estimate: last.abs(),
    })
}

/// `dp_k/dt + λ^{α(t)} Σ_{n≤k} C(α(t), n) (−1)^n p_{k−n}(t)` for `k = 0..=k_max`,
/// with `dp/dt` by a central difference of step `dt`.
pub fn governing_residual(
    params: &ModelParams,
    t: f64,
    k_max: usize,
    dt: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    if !(dt > 0.0 && t - dt >= 0.0) {
        return domain(format!("need 0 < dt <= t, got t={t}, dt={dt}"));
    }
    let size = default_fft_size(k_max).max(256);
    let at = |time| smpp_transition_pmf(params, 0.0, time, k_max, size, quad);
    let (lo, mid, hi) = (at(t - dt)?, at(t)?, at(t + dt)?);
    let a = params.alpha.eval(t);
    let rate = params.intensity(t);
    let binoms = binomial_sequence(a, k_max);
    Ok((0..=k_max)
        .map(|k| {
            let deriv = (hi.probs[k] - lo.probs[k]) / (2.0 * dt);
            let op: CompensatedSum = (0..=k)
                .map(|n| {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binoms[n] * mid.probs[k - n]
                })
                .collect();
            deriv + rate * op.value()
        })
        .collect())
}

/// Σ over atoms `n ≤ n_max` of `(1 − e^{−ηn})` times the Lévy weight, plus the
/// remaining Sibuya mass (on which `1 − e^{−ηn}` is within `e^{−η n_max}` of 1).
pub fn bernstein_from_atoms(params: &ModelParams, t: f64, eta: f64, n_max: usize) -> Result<f64> {
    if !(eta > 0.0) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    let w = super::SibuyaWeights::new(params.alpha.eval(t), n_max)?;
    let head: CompensatedSum = w
        .weights
        .iter()
        .enumerate()
        .map(|(i, &x)| -(-eta * (i + 1) as f64).exp_m1() * x)
        .collect();
    Ok(params.intensity(t) * (head.value() + w.tail_mass))
}
