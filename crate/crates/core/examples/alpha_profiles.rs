// Stability-index profiles and the integrated intensity `Λ(0, t)`.

use multistable_poisson::model::{lambda_alpha_integral, AlphaProfile, ModelParams, QuadratureSpec};

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let profiles = [
        ("constant", AlphaProfile::constant(0.5)?),
        ("linear", AlphaProfile::linear_clamped(0.3, 0.8, 0.05, 0.95)?),
        ("sinusoidal", AlphaProfile::sinusoidal(0.55, 0.3, 1.0, 0.0)?),
        (
            "piecewise",
            AlphaProfile::piecewise_linear(vec![(0.0, 0.2), (0.5, 0.8), (1.0, 0.4)])?,
        ),
    ];
    for (name, alpha) in profiles {
        let (lo, hi) = alpha.bounds();
        let model = ModelParams::new(2.0, alpha)?;
        let big_lambda = lambda_alpha_integral(&model, 0.0, 1.0, &quad)?;
        println!(
            "{name:>10}: alpha in [{lo:.3}, {hi:.3}], alpha(0.5) = {:.3}, Lambda(0,1) = {big_lambda:.6}",
            model.alpha.eval(0.5)
        );
    }
    // with a constant index the integral is λ^α t
    let model = ModelParams::new(2.0, AlphaProfile::constant(0.5)?)?;
    let exact = 2f64.sqrt();
    let got = lambda_alpha_integral(&model, 0.0, 1.0, &quad)?;
    assert!((got - exact).abs() < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
