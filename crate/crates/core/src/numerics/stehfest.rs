use crate::error::{domain, numeric, Result};
use crate::numerics::CompensatedSum;

/// Orders above this need extended precision; the weights reach ~1e10.
pub const MAX_STEHFEST_ORDER: usize = 16;

/// Gaver–Stehfest weights for a fixed even order.
#[derive(Debug, Clone)]
pub struct StehfestWeights {
    order: usize,
    weights: Vec<f64>,
}

impl StehfestWeights {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 || order % 2 == 1 || order > MAX_STEHFEST_ORDER {
            return domain(format!(
                "Stehfest order must be even and in [2, {MAX_STEHFEST_ORDER}], got {order}"
            ));
        }
        let half = order / 2;
        let fact: Vec<f64> = (0..=2 * order)
            .scan(1.0, |acc, k| {
                if k > 0 {
                    *acc *= k as f64;
                }
                Some(*acc)
            })
            .collect();
        let weights: Vec<f64> = (1..=order)
            .map(|k| {
                let mut s = CompensatedSum::new();
                for j in k.div_ceil(2)..=k.min(half) {
                    let num = (j as f64).powi(half as i32) * fact[2 * j];
                    let den = fact[half - j] * fact[j] * fact[j - 1] * fact[k - j] * fact[2 * j - k];
                    s.add(num / den);
                }
                let sign = if (k + half).is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * s.value()
            })
            .collect();

        let total: CompensatedSum = weights.iter().copied().collect();
        let scale: f64 = weights.iter().map(|w| w.abs()).sum();
        if total.value().abs() > 1e-12 * scale {
            return numeric(format!("Stehfest weights of order {order} do not sum to zero"));
        }
        Ok(Self { order, weights })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Real-axis abscissae `j ln2 / t`, `j = 1..=order`.
    pub fn nodes(&self, t: f64) -> Result<Vec<f64>> {
        if !(t > 0.0 && t.is_finite()) {
            return domain(format!("inversion time must be positive, got {t}"));
        }
        let a = std::f64::consts::LN_2 / t;
        Ok((1..=self.order).map(|j| j as f64 * a).collect())
    }

    /// Combines transform values taken at [`Self::nodes`].
    pub fn combine(&self, values: &[f64], t: f64) -> Result<f64> {
        if values.len() != self.order {
            return domain(format!(
                "expected {} transform values, got {}",
                self.order,
                values.len()
            ));
        }
        let a = std::f64::consts::LN_2 / t;
        let s: CompensatedSum = self.weights.iter().zip(values).map(|(w, v)| w * v).collect();
        let out = a * s.value();
        if !out.is_finite() {
            return numeric(format!("Stehfest inversion at t = {t} is not finite"));
        }
        Ok(out)
    }

    pub fn invert<F>(&self, f: F, t: f64) -> Result<f64>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let values = self.nodes(t)?.into_iter().map(&f).collect::<Result<Vec<_>>>()?;
        self.combine(&values, t)
    }
}

/// `Σ_j w_j F(j ln2/t) · ln2/t`.
pub fn stehfest_invert<F>(f: F, t: f64, order: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    StehfestWeights::new(order)?.invert(f, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_validation() {
        assert!(StehfestWeights::new(13).is_err());
        assert!(StehfestWeights::new(18).is_err());
        assert!(StehfestWeights::new(0).is_err());
        assert!(StehfestWeights::new(14).is_ok());
    }

    #[test]
    fn weights_alternate_and_sum_to_zero() {
        for order in (2..=16).step_by(2) {
            let w = StehfestWeights::new(order).unwrap();
            assert!(w.weights().windows(2).all(|p| p[0] * p[1] < 0.0), "order {order}");
        }
        // classical order-2 weights: 2, -2
        assert_eq!(StehfestWeights::new(2).unwrap().weights(), &[2.0, -2.0]);
    }

    #[test]
    fn unit_step() {
        for t in [0.1, 0.5, 1.0, 3.0, 10.0] {
            let v = stehfest_invert(|s| Ok(1.0 / s), t, 14).unwrap();
            // weights near 1e8 amplify the rounding of each F(s) sample to ~1e-9
            assert!((v - 1.0).abs() < 5e-9, "t={t}: {v}");
        }
    }

    #[test]
    fn ramp() {
        let v = stehfest_invert(|s| Ok(1.0 / (s * s)), 2.0, 14).unwrap();
        // truncation error of order 14 on the ramp is ~7e-7 in double precision
        assert!((v - 2.0).abs() < 1e-6, "{v}");
    }

    #[test]
    fn exponential_decay() {
        // order 14 bottoms out near 5e-5 on e^{-t}; order 16 is a bit better
        let worst = |order| {
            (1..=50)
                .map(|i| {
                    let t = 0.1 * i as f64;
                    let v = stehfest_invert(|s| Ok(1.0 / (s + 1.0)), t, order).unwrap();
                    (v - (-t).exp()).abs()
                })
                .fold(0.0, f64::max)
        };
        let e14 = worst(14);
        assert!(e14 < 1e-4, "{e14}");
        assert!(worst(16) < e14);
        assert!(e14 < worst(10));
    }

    #[test]
    fn propagates_transform_failure() {
        let r = stehfest_invert(|_| crate::error::numeric("boom"), 1.0, 8);
        assert!(r.is_err());
    }
}
