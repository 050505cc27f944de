use std::f64::consts::PI;

use rand::Rng;

use crate::error::{domain, Result};

/// One-sided stable draw with `E e^{−uS} = e^{−u^α}` (Kanter's representation),
/// evaluated in logs so small indices do not overflow early.
pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return domain(format!("stable index must lie in (0, 1), got {alpha}"));
    }
    let (u, w) = kanter_inputs(rng);
    Ok(kanter(alpha, u, w))
}

/// Uniform angle in `(0, π)` and a unit exponential.
pub(crate) fn kanter_inputs<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u = loop {
        let x: f64 = rng.random();
        if x > 0.0 {
            break x * PI;
        }
    };
    let w = -(1.0 - rng.random::<f64>()).ln();
    (u, w.max(f64::MIN_POSITIVE))
}

/// Deterministic map from the Kanter inputs to the stable variate.
pub(crate) fn kanter(alpha: f64, u: f64, w: f64) -> f64 {
    ln_kanter(alpha, u, w).exp().clamp(f64::MIN_POSITIVE, f64::MAX)
}

pub(crate) fn ln_kanter(alpha: f64, u: f64, w: f64) -> f64 {
    (alpha * u).sin().ln() - u.sin().ln() / alpha + (1.0 - alpha) / alpha * (((1.0 - alpha) * u).sin().ln() - w.ln())
}

/// Increment of a stable subordinator of index `alpha` over a step `dt`,
/// i.e. `dt^{1/α} S`.
pub(crate) fn scaled_stable(alpha: f64, dt: f64, u: f64, w: f64) -> f64 {
    (dt.ln() / alpha + ln_kanter(alpha, u, w)).exp().min(f64::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn laplace_check(alpha: f64, u: f64, n: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals: Vec<f64> = (0..n)
            .map(|_| (-u * sample_stable(alpha, &mut rng).unwrap()).exp())
            .collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let target = (-u.powf(alpha)).exp();
        assert!(
            (mean - target).abs() <= 3.0 * se,
            "α={alpha} u={u}: {mean} vs {target} (se {se})"
        );
    }

    #[test]
    fn laplace_transform_at_one() {
        laplace_check(0.5, 1.0, 1_000_000, 1);
        assert!(((-1f64).exp() - 0.367_879).abs() < 1e-6);
    }

    #[test]
    fn laplace_transform_at_four() {
        laplace_check(0.5, 4.0, 1_000_000, 2);
        assert!(((-2f64).exp() - 0.135_335).abs() < 1e-6);
    }

    #[test]
    fn laplace_transform_small_index() {
        laplace_check(0.15, 2.0, 200_000, 3);
    }

    #[test]
    fn near_one_concentrates_at_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut v: Vec<f64> = (0..100_000).map(|_| sample_stable(0.999, &mut rng).unwrap()).collect();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        assert!((0.8..=1.3).contains(&median), "median {median}");
    }

    #[test]
    fn positive_and_rejects_bad_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            assert!(sample_stable(0.05, &mut rng).unwrap() > 0.0);
        }
        assert!(sample_stable(1.0, &mut rng).is_err());
        assert!(sample_stable(0.0, &mut rng).is_err());
    }
}
