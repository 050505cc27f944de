// A multistable subordinator path `H` and its inverse `L`, written as CSV.

use multistable_poisson::model::{AlphaProfile, ModelParams};
use multistable_poisson::paths::{invert_path, sample_multistable_path, InverseTime, RngSpec, TimeGrid};

pub fn run_example() -> multistable_poisson::Result<()> {
    let model = ModelParams::new(1.0, AlphaProfile::linear_clamped(0.3, 0.6, 0.05, 0.95)?)?;
    let grid = TimeGrid::new(1.0, 1e-3)?;
    let path = sample_multistable_path(&model, &grid, RngSpec::new(3, 0))?;
    assert_eq!(path.values().len(), 1001);
    println!("H(0.5) = {:.5}, H(1) = {:.5}", path.value_at(0.5), path.terminal());
    for x in [0.01, 0.1, 1.0] {
        match invert_path(&path, x)? {
            InverseTime::At(t) => println!("L({x}) = {t:.4}"),
            InverseTime::BeyondHorizon => println!("L({x}) is beyond the grid horizon"),
        }
    }
    let mut csv = Vec::new();
    path.write_csv(&mut csv)?;
    let text = String::from_utf8(csv).expect("utf-8");
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
