// Probability that the SMPP has not reached level `k`, by two formulas.

use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::smpp::{
    default_fft_size, smpp_transition_pmf, upcrossing_survival_derivative, upcrossing_survival_integral,
};

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let model = ModelParams::new(1.2, AlphaProfile::linear_clamped(0.3, 0.5, 0.05, 0.95)?)?;
    let table = smpp_transition_pmf(&model, 0.0, 1.0, 5, default_fft_size(5), &quad)?;
    for k in 2..=5 {
        let d = upcrossing_survival_derivative(&model, k, 1.0, &quad)?;
        let i = upcrossing_survival_integral(&model, k, 1.0, &quad)?;
        let cdf: f64 = table.probs[..k].iter().sum();
        println!("k={k}: derivative {d:.10}  integral {i:.10}  pmf sum {cdf:.10}");
        assert!((d - i).abs() < 1e-5 && (d - cdf).abs() < 1e-5);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
