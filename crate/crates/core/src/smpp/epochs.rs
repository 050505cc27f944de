use crate::error::{domain, Result};
use crate::model::{lambda_alpha_integral, CumulativeIntegral, ModelParams, QuadratureSpec};
use crate::numerics::{gauss_legendre, ln_gamma, CompensatedSum};

/// Density of the `j`-th jump epoch:
/// `Λ(0,t)^{j−1} e^{−Λ(0,t)} λ^{α(t)} / Γ(j)`.
pub fn epoch_density(params: &ModelParams, j: usize, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    if j == 0 {
        return domain("epoch index starts at 1");
    }
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    let l = lambda_alpha_integral(params, 0.0, t, quad)?;
    Ok(density_from_level(params, j, t, l))
}

fn density_from_level(params: &ModelParams, j: usize, t: f64, level: f64) -> f64 {
    if level == 0.0 {
        return if j == 1 { params.intensity(t) } else { 0.0 };
    }
    let ln = (j as f64 - 1.0) * level.ln() - level - ln_gamma(j as f64) + params.alpha.eval(t) * params.lambda.ln();
    ln.exp()
}

/// `∫_0^∞` of [`epoch_density`] by Gauss–Legendre in `t`, on panels whose ends
/// are the times where `Λ(0,·)` crosses multiples of 1/2, cut where the Gamma
/// tail drops below 1e-16.
pub fn epoch_density_mass(params: &ModelParams, j: usize) -> Result<f64> {
    if j == 0 {
        return domain("epoch index starts at 1");
    }
    params.validate()?;
    let jf = j as f64;
    let level_max = jf + 45.0 + 10.0 * jf.sqrt();
    let (lo, hi) = params.alpha.bounds();
    let slowest = params.lambda.powf(lo).min(params.lambda.powf(hi));
    let table = CumulativeIntegral::intensity(params, level_max / slowest + 1.0)?;
    let mut edges: Vec<f64> = Vec::new();
    let mut level = 0.0;
    while level < level_max {
        edges.push(table.inverse(level)?);
        level += 0.5;
    }
    edges.push(table.inverse(level_max)?);
    edges.extend(params.alpha.breakpoints(0.0, edges[edges.len() - 1]));
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut sum = CompensatedSum::new();
    for w in edges.windows(2) {
        let piece: f64 = gauss_legendre(|t| density_from_level(params, j, t, table.value(t)), w[0], w[1], 1, 24)?;
        sum.add(piece);
    }
    Ok(sum.value())
}
