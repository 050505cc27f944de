// Densities of the SMPP jump epochs and their total mass.

use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::smpp::{epoch_density, epoch_density_mass};

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let model = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.55, 0.3, 1.0, 0.0)?)?;
    for j in 1..=3 {
        let row: Vec<String> = [0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&t| epoch_density(&model, j, t, &quad).map(|d| format!("{d:.5}")))
            .collect::<multistable_poisson::Result<_>>()?;
        let mass = epoch_density_mass(&model, j)?;
        println!(
            "T_{j}: density at 0.25, 0.5, 1, 2 = [{}], total mass {mass:.10}",
            row.join(", ")
        );
        assert!((mass - 1.0).abs() < 1e-8);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
