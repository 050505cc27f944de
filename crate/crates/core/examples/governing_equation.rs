// Residual of the forward equations `dp_k/dt` at a time-varying index.

use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::smpp::governing_residual;

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    for (name, alpha) in [
        ("constant", AlphaProfile::constant(0.6)?),
        ("sinusoidal", AlphaProfile::sinusoidal(0.5, 0.25, 1.0, 0.3)?),
    ] {
        let model = ModelParams::new(1.0, alpha)?;
        let residuals = governing_residual(&model, 1.0, 10, 1e-3, &quad)?;
        let worst = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        println!("{name}: largest residual over k <= 10 is {worst:.2e}");
        assert!(worst < 1e-3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
