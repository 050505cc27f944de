use rand::Rng;

use crate::error::{domain, Result};
use crate::model::ModelParams;
use crate::numerics::ln_gamma;

/// Survival terms `P(X > n)` are walked one at a time up to here; further out
/// a two-term asymptotic form of the Gamma ratio is bisected instead.
const SEQUENTIAL_LIMIT: u64 = 1000;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("Sibuya index must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

/// `(−1)^{n+1} C(α, n)` for `n ≥ 1`.
pub fn sibuya_pmf(alpha: f64, n: u64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return domain("Sibuya law has no mass at 0");
    }
    // w_1 = α, w_{j+1} = w_j (j − α)/(j + 1)
    let mut w = alpha;
    for j in 1..n {
        w *= (j as f64 - alpha) / (j + 1) as f64;
    }
    Ok(w)
}

/// Atom of the Lévy measure at `n`: `λ^{α(t)}` times the Sibuya weight at `α(t)`.
pub fn levy_weight(params: &ModelParams, t: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return domain("Lévy measure has no atom at 0");
    }
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    Ok(params.intensity(t) * sibuya_pmf(params.alpha.eval(t), n)?)
}

/// Sibuya weights `w_1..w_{n_max}` and the mass left beyond `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SibuyaWeights {
    pub alpha: f64,
    pub weights: Vec<f64>,
    pub tail_mass: f64,
}

impl SibuyaWeights {
    pub fn new(alpha: f64, n_max: usize) -> Result<Self> {
        check_alpha(alpha)?;
        let mut weights = Vec::with_capacity(n_max);
        // the survival product gives the tail without summing the head
        let mut survival = 1.0;
        let mut w = alpha;
        for j in 1..=n_max {
            if j > 1 {
                w *= (j as f64 - 1.0 - alpha) / j as f64;
            }
            weights.push(w);
            survival *= 1.0 - alpha / j as f64;
        }
        Ok(Self {
            alpha,
            weights,
            tail_mass: survival,
        })
    }

    /// `P(X = n)`, `n ≥ 1`, for `n ≤ n_max`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.weights.get(i)).copied()
    }
}

/// `ln P(X > n)` for large `n` from the Stirling series of `Γ(x−α)/Γ(x)`, `x = n+1`.
fn ln_survival_asymptotic(alpha: f64, n: f64) -> f64 {
    let x = n + 1.0;
    -alpha * x.ln() + alpha * (1.0 + alpha) / (2.0 * x) + alpha * (alpha + 1.0) * (alpha + 0.5) / (6.0 * x * x)
        - ln_gamma(1.0 - alpha)
}

/// Exact-in-law draw by inversion of the survival function. Sizes beyond
/// `u64::MAX` saturate.
pub fn sibuya_sample<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<u64> {
    check_alpha(alpha)?;
    // v in (0, 1]; X = min{n : P(X > n) < v}
    let v = 1.0 - rng.random::<f64>();
    let mut survival = 1.0;
    for n in 1..=SEQUENTIAL_LIMIT {
        survival *= 1.0 - alpha / n as f64;
        if survival < v {
            return Ok(n);
        }
    }
    let target = v.ln();
    let mut lo = SEQUENTIAL_LIMIT;
    let mut hi = SEQUENTIAL_LIMIT.saturating_mul(2);
    while ln_survival_asymptotic(alpha, hi as f64) >= target {
        if hi == u64::MAX {
            return Ok(u64::MAX);
        }
        lo = hi;
        hi = hi.saturating_mul(2);
    }
    // invariant: S(lo) >= v > S(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ln_survival_asymptotic(alpha, mid as f64) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}
