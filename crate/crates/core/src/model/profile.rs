use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

fn default_clamp_min() -> f64 {
    0.05
}

fn default_clamp_max() -> f64 {
    0.95
}

/// Stability index `t ↦ α(t)` with values in a closed sub-interval of `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlphaProfile {
    Constant {
        value: f64,
    },
    /// `clamp(intercept + slope·t, min, max)`.
    LinearClamped {
        intercept: f64,
        slope: f64,
        #[serde(default = "default_clamp_min")]
        min: f64,
        #[serde(default = "default_clamp_max")]
        max: f64,
    },
    /// `mean + amplitude·sin(2πt/period + phase)`.
    Sinusoidal {
        mean: f64,
        amplitude: f64,
        period: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Linear interpolation between `(t, α)` knots, held constant after the last one.
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return domain(format!("{name} must lie in (0, 1), got {v}"));
    }
    Ok(())
}

impl AlphaProfile {
    pub fn constant(value: f64) -> Result<Self> {
        let p = Self::Constant { value };
        p.validate()?;
        Ok(p)
    }

    pub fn linear_clamped(intercept: f64, slope: f64, min: f64, max: f64) -> Result<Self> {
        let p = Self::LinearClamped {
            intercept,
            slope,
            min,
            max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn sinusoidal(mean: f64, amplitude: f64, period: f64, phase: f64) -> Result<Self> {
        let p = Self::Sinusoidal {
            mean,
            amplitude,
            period,
            phase,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn piecewise_linear(knots: Vec<(f64, f64)>) -> Result<Self> {
        let p = Self::PiecewiseLinear { knots };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { value } => check_open_unit("alpha", *value),
            Self::LinearClamped {
                intercept,
                slope,
                min,
                max,
            } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return domain("linear profile coefficients must be finite");
                }
                check_open_unit("alpha min", *min)?;
                check_open_unit("alpha max", *max)?;
                if min > max {
                    return domain(format!("alpha min {min} exceeds alpha max {max}"));
                }
                Ok(())
            }
            Self::Sinusoidal {
                mean,
                amplitude,
                period,
                phase,
            } => {
                if !(period.is_finite() && *period > 0.0) {
                    return domain(format!("sinusoid period must be positive, got {period}"));
                }
                if !phase.is_finite() || !amplitude.is_finite() {
                    return domain("sinusoid amplitude and phase must be finite");
                }
                check_open_unit("alpha min", mean - amplitude.abs())?;
                check_open_unit("alpha max", mean + amplitude.abs())
            }
            Self::PiecewiseLinear { knots } => {
                let Some(first) = knots.first() else {
                    return domain("piecewise-linear profile needs at least one knot");
                };
                if first.0 != 0.0 {
                    return domain(format!("first knot must sit at t = 0, got {}", first.0));
                }
                if knots.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                    return domain("knot times must be strictly increasing");
                }
                if knots.iter().any(|k| !k.0.is_finite()) {
                    return domain("knot times must be finite");
                }
                knots.iter().try_for_each(|k| check_open_unit("knot alpha", k.1))
            }
        }
    }

    /// `(α_min, α_max)`; every evaluation lies in this range.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Self::Constant { value } => (*value, *value),
            Self::LinearClamped { min, max, .. } => (*min, *max),
            Self::Sinusoidal { mean, amplitude, .. } => (mean - amplitude.abs(), mean + amplitude.abs()),
            Self::PiecewiseLinear { knots } => knots.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
                (lo.min(k.1), hi.max(k.1))
            }),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Self::Constant { value } => Some(*value),
            Self::LinearClamped { min, max, slope, .. } if *slope == 0.0 || min == max => Some(self.eval(0.0)),
            Self::Sinusoidal { mean, amplitude, .. } if *amplitude == 0.0 => Some(*mean),
            Self::PiecewiseLinear { knots } if knots.iter().all(|k| k.1 == knots[0].1) => Some(knots[0].1),
            _ => None,
        }
    }

    /// `α(t)`; negative times are evaluated at `t = 0`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        let (lo, hi) = self.bounds();
        let raw = match self {
            Self::Constant { value } => *value,
            Self::LinearClamped { intercept, slope, .. } => intercept + slope * t,
            Self::Sinusoidal {
                mean,
                amplitude,
                period,
                phase,
            } => mean + amplitude * (2.0 * PI * t / period + phase).sin(),
            Self::PiecewiseLinear { knots } => {
                let idx = knots.partition_point(|k| k.0 <= t);
                if idx >= knots.len() {
                    knots[knots.len() - 1].1
                } else {
                    let (t0, a0) = knots[idx - 1];
                    let (t1, a1) = knots[idx];
                    a0 + (a1 - a0) * (t - t0) / (t1 - t0)
                }
            }
        };
        raw.clamp(lo, hi)
    }

    /// Points in the open interval `(s, t)` where `α` is not smooth.
    pub fn breakpoints(&self, s: f64, t: f64) -> Vec<f64> {
        let mut out = match self {
            Self::Constant { .. } | Self::Sinusoidal { .. } => Vec::new(),
            Self::LinearClamped {
                intercept,
                slope,
                min,
                max,
            } => {
                if *slope == 0.0 {
                    Vec::new()
                } else {
                    vec![(min - intercept) / slope, (max - intercept) / slope]
                }
            }
            Self::PiecewiseLinear { knots } => knots.iter().map(|k| k.0).collect(),
        };
        out.retain(|&b| b > s && b < t);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }
}
