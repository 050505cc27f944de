//! Model parameters and the time integrals of `λ^{α(t)}` and `u^{α(t)}`.

mod integrals;
mod profile;

use serde::{Deserialize, Serialize};

pub use integrals::{
    bernstein_integral, bernstein_integral_complex, complex_power, lambda_alpha_integral, CumulativeIntegral,
    ProfileNodes, QuadratureSpec,
};
pub use profile::AlphaProfile;

use crate::error::{domain, Result};

/// Poisson rate `λ` and stability profile `α(·)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub lambda: f64,
    pub alpha: AlphaProfile,
}

impl ModelParams {
    pub fn new(lambda: f64, alpha: AlphaProfile) -> Result<Self> {
        let p = Self { lambda, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return domain(format!("lambda must be positive and finite, got {}", self.lambda));
        }
        self.alpha.validate()
    }

    /// `λ^{α(t)}`, the instantaneous rate of the time-changed process.
    pub fn intensity(&self, t: f64) -> f64 {
        (self.alpha.eval(t) * self.lambda.ln()).exp()
    }
}
