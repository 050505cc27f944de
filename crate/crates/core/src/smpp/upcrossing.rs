use rayon::prelude::*;

use super::pmf::{default_fft_size, smpp_transition_pmf};
use crate::error::{domain, numeric, Result};
use crate::model::{AlphaProfile, ModelParams, ProfileNodes, QuadratureSpec};
use crate::numerics::{bell_derivatives, binomial, gauss_legendre_rule, CompensatedSum, MAX_BELL_ORDER};

const RANGE_SLACK: f64 = 1e-10;

fn check_probability(v: f64, what: &str) -> Result<f64> {
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
        return numeric(format!("{what} evaluated to {v}, outside [0, 1]"));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// `P(𝒯_k > t) = Σ_{n<k} (−λ)^n/n! ∂_λ^n e^{−Λ(λ)}`, with the derivatives of
/// `e^{−Λ}` from the Bell recurrence on `λ^m ∂_λ^m(−Λ) = −∫ (α)_m λ^{α} dτ`.
pub fn upcrossing_survival_derivative(params: &ModelParams, k: usize, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    if k == 0 {
        return domain("upcrossing level must be at least 1");
    }
    if k > MAX_BELL_ORDER {
        return domain(format!("upcrossing level capped at {MAX_BELL_ORDER}, got {k}"));
    }
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    let nodes = ProfileNodes::new(&params.alpha, 0.0, t, quad)?;
    let ln_lambda = params.lambda.ln();
    let level = nodes.integrate(|a| (a * ln_lambda).exp());
    // (α)_m via the running product α(α−1)⋯(α−m+1)
    let scaled: Vec<f64> = (1..k)
        .map(|m| {
            -nodes.integrate(|a| {
                let falling: f64 = (0..m).map(|i| a - i as f64).product();
                falling * (a * ln_lambda).exp()
            })
        })
        .collect();
    let bell = bell_derivatives(&scaled)?;
    let mut sum = CompensatedSum::new();
    let mut inv_fact = 1.0;
    for (n, b) in bell.iter().enumerate() {
        if n > 0 {
            inv_fact /= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * b * inv_fact);
    }
    check_probability((-level).exp() * sum.value(), "derivative-route upcrossing survival")
}

/// `P(𝒯_k > t) = 1 − k ∫_0^λ p_k(t; λ')/λ' dλ'`, `k ≥ 2`, with `p_k` from the
/// FFT pmf at each node.
///
/// Near `λ' = 0` the integrand behaves like `λ'^{α−1}`, so the substitution
/// `λ' = λ v^q` with `q = ⌈8/α_min⌉` is applied to make it smooth in `v`.
pub fn upcrossing_survival_integral(params: &ModelParams, k: usize, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    if k < 2 {
        return domain("integral route needs k >= 2");
    }
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    if t == 0.0 {
        return Ok(1.0);
    }
    let q = (8.0 / min_index(&params.alpha, t)).ceil();
    let (panels, points) = match *quad {
        QuadratureSpec::GaussLegendrePanels { panel_count, points } => (panel_count.max(4), points.max(16)),
        QuadratureSpec::Adaptive { .. } => (8, 32),
    };
    let rule = gauss_legendre_rule(points);
    let width = 1.0 / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let mid = (p as f64 + 0.5) * width;
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(move |(x, w)| (mid + 0.5 * width * x, 0.5 * width * w))
        })
        .collect();
    let fft = default_fft_size(k);
    let values: Vec<f64> = nodes
        .par_iter()
        .map(|&(v, w)| {
            let rate = params.lambda * v.powf(q);
            if rate < f64::MIN_POSITIVE {
                // p_k vanishes like rate^{α}, far below the other terms
                return Ok(0.0);
            }
            let scaled = ModelParams::new(rate, params.alpha.clone())?;
            let pk = smpp_transition_pmf(&scaled, 0.0, t, k, fft, quad)?.probs[k];
            Ok(w * q * pk / v)
        })
        .collect::<Result<_>>()?;
    let integral: CompensatedSum = values.into_iter().collect();
    check_probability(1.0 - k as f64 * integral.value(), "integral-route upcrossing survival")
}

/// Smallest index on `[0, t]`, read at the breakpoints and on a uniform grid.
fn min_index(alpha: &AlphaProfile, t: f64) -> f64 {
    const SAMPLES: usize = 256;
    let grid = (0..=SAMPLES).map(|i| t * i as f64 / SAMPLES as f64);
    grid.chain(alpha.breakpoints(0.0, t))
        .map(|x| alpha.eval(x))
        .fold(f64::INFINITY, f64::min)
}

/// Left side of `Σ_{n=0}^{k−1} (−1)^n C(x, n) = (−1)^{k+1} (k/x) C(x, k)`.
pub fn alternating_binomial_sum(x: f64, k: u64) -> f64 {
    (0..k)
        .map(|n| if n % 2 == 0 { binomial(x, n) } else { -binomial(x, n) })
        .collect::<CompensatedSum>()
        .value()
}

/// Right side of the alternating-binomial identity, `x ≠ 0`.
pub fn alternating_binomial_closed(x: f64, k: u64) -> f64 {
    let sign = if (k + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * k as f64 / x * binomial(x, k)
}
