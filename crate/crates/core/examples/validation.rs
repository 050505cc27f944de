// Monte Carlo comparison suites at small sample sizes.

use multistable_poisson::harness::{exit_code, run_suite, LocalizabilitySettings, Suite, ValidationSettings};
use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};

pub fn run_example() -> multistable_poisson::Result<()> {
    let settings = ValidationSettings {
        n_samples: 5_000,
        localizability: LocalizabilitySettings {
            n_samples: 2_000,
            substeps: 8,
            ..Default::default()
        },
        ..Default::default()
    };
    settings.validate()?;
    let model = ModelParams::new(1.0, AlphaProfile::linear_clamped(0.3, 0.8, 0.05, 0.95)?)?;
    let reports = run_suite(Suite::All, &model, &settings, 21, &QuadratureSpec::default())?;
    for r in &reports {
        println!("{r}");
    }
    println!("exit code {}", exit_code(&reports));
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
