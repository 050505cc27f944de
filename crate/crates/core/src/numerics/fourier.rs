use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{domain, Result};

/// Power-of-two DFT plan with cached roots of unity `ω^m`, `ω = e^{2πi/size}`.
#[derive(Clone)]
pub struct FourierPlan {
    size: usize,
    roots: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FourierPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierPlan").field("size", &self.size).finish()
    }
}

impl FourierPlan {
    pub fn new(size: usize) -> Result<Self> {
        if size < 2 || !size.is_power_of_two() {
            return domain(format!("DFT size must be a power of two >= 2, got {size}"));
        }
        let roots = (0..size)
            .map(|m| {
                let theta = 2.0 * PI * m as f64 / size as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            size,
            roots,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The sample points `ω^m`, `m = 0..size`.
    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Evaluates the polynomial with the given coefficients at every `ω^m`.
    pub fn synthesize(&self, coefficients: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_len(coefficients.len())?;
        let mut buf = coefficients.to_vec();
        self.inverse.process(&mut buf);
        Ok(buf)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.size {
            return domain(format!("expected {} values, got {len}", self.size));
        }
        Ok(())
    }
}

/// Coefficients `c_n = (1/M) Σ_m v_m ω^{-mn}` of the polynomial sampled on the unit circle.
pub fn dft_coefficients(values: &[Complex64], plan: &FourierPlan) -> Result<Vec<Complex64>> {
    plan.check_len(values.len())?;
    let mut buf = values.to_vec();
    plan.forward.process(&mut buf);
    let scale = 1.0 / plan.size as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    Ok(buf)
}
