use super::BernsteinSpec;
use crate::error::{domain, numeric, Result};
use crate::model::{CumulativeIntegral, ModelParams, QuadratureSpec};
use crate::numerics::{
    adaptive_gauss_legendre, gauss_legendre, gauss_legendre_rule, ln_gamma, panel_count, CompensatedSum,
};

/// `ln` of the ratio at which a Gamma weight is treated as negligible (1e-16).
const LN_CUTOFF: f64 = 36.841_361_487_904_734;

/// Point beyond the mode of the Gamma(`shape`, `rate`) density where it has
/// dropped to 1e-16 of its peak.
fn gamma_cutoff(shape: f64, rate: f64) -> f64 {
    let log_shape = |x: f64| {
        if shape == 1.0 {
            -rate * x
        } else {
            (shape - 1.0) * x.ln() - rate * x
        }
    };
    let mode = (shape - 1.0).max(0.0) / rate;
    let peak = if shape > 1.0 { log_shape(mode) } else { 0.0 };
    let below = |x: f64| log_shape(x) - peak < -LN_CUTOFF;
    let mut lo = mode;
    let mut hi = mode + 1.0 / rate;
    while !below(hi) {
        lo = hi;
        hi = mode + 2.0 * (hi - mode);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

/// `ln` of the Gamma(`shape`, `rate`) density at `x > 0`.
fn ln_gamma_density(shape: f64, rate: f64, x: f64) -> f64 {
    shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)
}

/// `∫_0^{x_hi} f` with panels cut at `breaks`.
fn integrate_truncated<F: Fn(f64) -> f64>(f: F, x_hi: f64, breaks: &[f64], quad: &QuadratureSpec) -> Result<f64> {
    let mut edges = vec![0.0];
    edges.extend(breaks.iter().copied().filter(|&b| b > 0.0 && b < x_hi));
    edges.push(x_hi);
    let mut sum = CompensatedSum::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let piece = match *quad {
            QuadratureSpec::GaussLegendrePanels {
                panel_count: per_unit,
                points,
            } => {
                let panels = panel_count(hi - lo, per_unit as f64)?;
                gauss_legendre(&f, lo, hi, panels, points)?
            }
            QuadratureSpec::Adaptive { abs_tol, rel_tol } => {
                adaptive_gauss_legendre(&f, lo, hi, abs_tol * (hi - lo) / x_hi, rel_tol)?
            }
        };
        sum.add(piece);
    }
    Ok(sum.value())
}

fn check_transform(v: f64, what: &str) -> Result<f64> {
    if !(-1e-10..=1.0 + 1e-10).contains(&v) {
        return numeric(format!("{what} evaluated to {v}, outside [0, 1]"));
    }
    Ok(v.clamp(0.0, 1.0))
}

fn check_rate(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return domain(format!("lambda must be positive, got {lambda}"));
    }
    Ok(())
}

/// `E e^{−ηJ_n}` for the inverse of the multistable subordinator.
pub fn waiting_time_lt(params: &ModelParams, n: usize, eta: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    waiting_time_lt_general(
        &BernsteinSpec::Multistable {
            alpha: params.alpha.clone(),
        },
        params.lambda,
        n,
        eta,
        quad,
    )
}

/// `E e^{−ηJ_n}` when the time change inverts a subordinator with Bernstein
/// function `f(u, t)`:
/// `∫∫_{0<u<v} λ^n e^{−λv} u^{n−2}/Γ(n−1) e^{−∫_u^v f(η,τ)dτ} du dv` (`n ≥ 2`), or
/// `∫ λ e^{−λv} e^{−∫_0^v f(η,τ)dτ} dv` (`n = 1`).
///
/// For `n ≥ 2` the inner integral `I(u) = ∫_u^∞ λ e^{−λ(v−u) − ∫_u^v f} dv` is
/// accumulated backwards across the outer nodes, which keeps every quantity in
/// `[0, 1]`.
pub fn waiting_time_lt_general(
    bernstein: &BernsteinSpec,
    lambda: f64,
    n: usize,
    eta: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    bernstein.validate()?;
    check_rate(lambda)?;
    if n == 0 {
        return domain("waiting-time index starts at 1");
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return domain(format!("eta must be positive, got {eta}"));
    }
    if n == 1 {
        return gamma_weighted_lt(bernstein, lambda, 1, eta, quad);
    }
    let shape = (n - 1) as f64;
    let x_hi = gamma_cutoff(shape, lambda);
    let tail = LN_CUTOFF / lambda;
    let table = bernstein.cumulative(eta, x_hi + tail + 1.0)?;
    let breaks = bernstein.breakpoints(0.0, x_hi);

    // outer nodes: fixed Gauss–Legendre panels in u
    let (per_unit, points) = match *quad {
        QuadratureSpec::GaussLegendrePanels { panel_count, points } => (panel_count, points),
        QuadratureSpec::Adaptive { .. } => (4, 32),
    };
    let rule = gauss_legendre_rule(points);
    let mut edges = vec![0.0];
    edges.extend(breaks.iter().copied());
    edges.push(x_hi);
    let mut nodes: Vec<(f64, f64)> = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let panels = panel_count(hi - lo, per_unit as f64)?;
        let width = (hi - lo) / panels as f64;
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * width;
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push((mid + 0.5 * width * x, 0.5 * width * wt));
            }
        }
    }

    let mut inner = vec![0.0; nodes.len()];
    let mut next_u = x_hi + tail;
    let mut next_i = 0.0;
    for (j, &(u, _)) in nodes.iter().enumerate().rev() {
        let seg = discounted_segment(&table, bernstein, lambda, u, next_u)?;
        let carry = (-lambda * (next_u - u) - table.segment(u, next_u)).exp();
        let value = seg + carry * next_i;
        inner[j] = value;
        next_u = u;
        next_i = value;
    }
    let total: CompensatedSum = nodes
        .iter()
        .zip(&inner)
        .map(|(&(u, w), &i)| w * ln_gamma_density(shape, lambda, u).exp() * i)
        .collect();
    check_transform(total.value(), "waiting-time transform")
}

/// `∫_a^b λ e^{−λ(v−a) − ∫_a^v f(η,τ)dτ} dv` on panels no wider than 1/4.
fn discounted_segment(
    table: &CumulativeIntegral,
    bernstein: &BernsteinSpec,
    lambda: f64,
    a: f64,
    b: f64,
) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let base = table.value(a);
    let f = |v: f64| lambda * (-lambda * (v - a) - (table.value(v) - base)).exp();
    let mut edges = vec![a];
    edges.extend(bernstein.breakpoints(a, b));
    edges.push(b);
    let mut sum = CompensatedSum::new();
    for w in edges.windows(2) {
        let panels = panel_count(w[1] - w[0], 4.0)?;
        sum.add(gauss_legendre(f, w[0], w[1], panels, 20)?);
    }
    Ok(sum.value())
}

/// `∫ γ_k(x) e^{−∫_0^x f(s,τ)dτ} dx` with `γ_k` the Gamma(k, λ) density.
fn gamma_weighted_lt(bernstein: &BernsteinSpec, lambda: f64, k: usize, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    let shape = k as f64;
    let x_hi = gamma_cutoff(shape, lambda);
    let table = bernstein.cumulative(s, x_hi + 1.0)?;
    let breaks = bernstein.breakpoints(0.0, x_hi);
    let v = integrate_truncated(
        |x| (ln_gamma_density(shape, lambda, x) - table.value(x)).exp(),
        x_hi,
        &breaks,
        quad,
    )?;
    check_transform(v, "epoch transform")
}

/// `E e^{−sT_k}` with `T_k = H(V_k)`; `epoch_lt(0, s) = 1`.
pub fn epoch_lt(params: &ModelParams, k: usize, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("transform variable must be positive, got {s}"));
    }
    if k == 0 {
        return Ok(1.0);
    }
    gamma_weighted_lt(
        &BernsteinSpec::Multistable {
            alpha: params.alpha.clone(),
        },
        params.lambda,
        k,
        s,
        quad,
    )
}

/// Laplace transform of `P(N(L(t)) = k)`.
///
/// `k = 0`: `(1 − E e^{−sT_1})/s`. `k ≥ 1`:
/// `∫ e^{−∫_0^x s^{α}} λ^k x^k e^{−λx} (k/x − λ) / (s k!) dx`, with the factor
/// `(k − λx)` kept whole.
pub fn state_prob_lt(params: &ModelParams, k: usize, s: f64, quad: &QuadratureSpec) -> Result<f64> {
    params.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("transform variable must be positive, got {s}"));
    }
    if k == 0 {
        return Ok((1.0 - epoch_lt(params, 1, s, quad)?) / s);
    }
    let lambda = params.lambda;
    let kf = k as f64;
    let x_hi = gamma_cutoff(kf + 1.0, lambda);
    let table = CumulativeIntegral::bernstein(s, &params.alpha, x_hi + 1.0)?;
    let breaks = params.alpha.breakpoints(0.0, x_hi);
    let ln_front = kf * lambda.ln() - ln_gamma(kf + 1.0) - s.ln();
    let v = integrate_truncated(
        |x| (ln_front + (kf - 1.0) * x.ln() - lambda * x - table.value(x)).exp() * (kf - lambda * x),
        x_hi,
        &breaks,
        quad,
    )?;
    if !v.is_finite() {
        return numeric(format!("state transform at k={k}, s={s} is not finite"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AlphaProfile;
    use crate::tmpp::BernsteinTable;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn half() -> ModelParams {
        ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap()
    }

    fn varying() -> ModelParams {
        ModelParams::new(1.3, AlphaProfile::sinusoidal(0.55, 0.3, 1.7, 0.2).unwrap()).unwrap()
    }

    #[test]
    fn cutoff_is_where_weight_vanishes() {
        for (shape, rate) in [(1.0, 1.0), (3.0, 2.0), (10.0, 0.5)] {
            let x = gamma_cutoff(shape, rate);
            let mode = (shape - 1.0) / rate;
            let drop = ln_gamma_density(shape, rate, x) - ln_gamma_density(shape, rate, mode.max(1e-300));
            assert!((drop + LN_CUTOFF).abs() < 1e-6 || shape == 1.0);
        }
        assert!((gamma_cutoff(1.0, 2.0) - LN_CUTOFF / 2.0).abs() < 1e-9);
    }

    #[test]
    fn constant_index_waiting_times() {
        for n in [1, 2, 3, 5] {
            for eta in [0.5, 1.0, 2.0] {
                let v = waiting_time_lt(&half(), n, eta, &q()).unwrap();
                let exact = 1.0 / (eta.sqrt() + 1.0);
                assert!((v - exact).abs() < 1e-10, "n={n} η={eta}: {v} vs {exact}");
            }
        }
        assert!((waiting_time_lt(&half(), 1, 1.0, &q()).unwrap() - 0.5).abs() < 1e-12);
        assert!((waiting_time_lt(&half(), 2, 4.0, &q()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(waiting_time_lt(&half(), 0, 1.0, &q()).is_err());
    }

    #[test]
    fn general_form_reductions() {
        let lam = 2.0;
        for n in [1, 3] {
            let v = waiting_time_lt_general(&BernsteinSpec::Stable { alpha: 1.0 }, lam, n, 0.7, &q()).unwrap();
            assert!((v - lam / (lam + 0.7)).abs() < 1e-10);
            let v = waiting_time_lt_general(&BernsteinSpec::Stable { alpha: 0.3 }, lam, n, 0.7, &q()).unwrap();
            assert!((v - lam / (lam + 0.7f64.powf(0.3))).abs() < 1e-10);
        }
    }

    #[test]
    fn custom_table_matches_multistable() {
        let params = varying();
        let mut blocks = Vec::new();
        for i in 0..=400 {
            let t = i as f64 * 0.05;
            let rows: Vec<(f64, f64)> = (0..=300)
                .map(|j| {
                    let u = j as f64 * 0.01;
                    (u, if u == 0.0 { 0.0 } else { u.powf(params.alpha.eval(t)) })
                })
                .collect();
            blocks.push((t, rows));
        }
        let spec = BernsteinSpec::custom(BernsteinTable::new(blocks).unwrap());
        for n in [1, 2] {
            let a = waiting_time_lt(&params, n, 1.0, &q()).unwrap();
            let b = waiting_time_lt_general(&spec, params.lambda, n, 1.0, &q()).unwrap();
            assert!((a - b).abs() < 1e-4, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn transforms_bounded_and_decreasing() {
        let p = varying();
        let mut last = [1.0f64; 3];
        for i in 1..=12 {
            let s = 0.25 * i as f64;
            let vals = [
                waiting_time_lt(&p, 2, s, &q()).unwrap(),
                epoch_lt(&p, 1, s, &q()).unwrap(),
                epoch_lt(&p, 3, s, &q()).unwrap(),
            ];
            for (v, l) in vals.iter().zip(last.iter_mut()) {
                assert!(*v > 0.0 && *v < *l);
                *l = *v;
            }
        }
        assert!(epoch_lt(&p, 3, 1.0, &q()).unwrap() < epoch_lt(&p, 2, 1.0, &q()).unwrap());
        // 1 − E e^{−sT} decays like s^{α} near the origin
        let gaps: Vec<f64> = [1e-3, 1e-6, 1e-9]
            .iter()
            .map(|&s| 1.0 - epoch_lt(&p, 2, s, &q()).unwrap())
            .collect();
        assert!(
            gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] > 0.0 && gaps[2] < 0.05,
            "{gaps:?}"
        );
    }

    #[test]
    fn epoch_constant_index_and_first_wait() {
        assert!((epoch_lt(&half(), 2, 1.0, &q()).unwrap() - 0.25).abs() < 1e-12);
        let p = varying();
        for s in [0.5, 1.0, 3.0] {
            let a = epoch_lt(&p, 1, s, &q()).unwrap();
            let b = waiting_time_lt(&p, 1, s, &q()).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn state_transforms_constant_index() {
        assert!((state_prob_lt(&half(), 0, 1.0, &q()).unwrap() - 0.5).abs() < 1e-12);
        assert!((state_prob_lt(&half(), 1, 1.0, &q()).unwrap() - 0.25).abs() < 1e-12);
        let (lam, s, a) = (1.0f64, 2.5f64, 0.5f64);
        for k in 0..6 {
            let exact = lam.powi(k as i32) * s.powf(a - 1.0) / (s.powf(a) + lam).powi(k as i32 + 1);
            assert!(
                (state_prob_lt(&half(), k, s, &q()).unwrap() - exact).abs() < 1e-12,
                "k={k}"
            );
        }
    }

    #[test]
    fn structural_identity_varying_profile() {
        let p = varying();
        for s in [0.5, 1.0, 2.0, 4.0] {
            for k in 0..=3 {
                let lhs = s * state_prob_lt(&p, k, s, &q()).unwrap();
                let rhs = epoch_lt(&p, k, s, &q()).unwrap() - epoch_lt(&p, k + 1, s, &q()).unwrap();
                assert!((lhs - rhs).abs() < 1e-8, "s={s} k={k}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn laplace_normalization() {
        let p = varying();
        let s = 1.5;
        let total: f64 = (0..80).map(|k| state_prob_lt(&p, k, s, &q()).unwrap()).sum();
        let tail = epoch_lt(&p, 80, s, &q()).unwrap() / s;
        assert!((total + tail - 1.0 / s).abs() < 1e-8, "{total} + {tail}");
    }
}
