// Sampled SMPP paths: the no-jump frequency against `e^{−Λ(0,t)}`.

use multistable_poisson::harness::{empirical_pmf, MeanEstimate};
use multistable_poisson::model::{lambda_alpha_integral, AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::paths::{RngSpec, SmppSampler};

pub fn run_example() -> multistable_poisson::Result<()> {
    let model = ModelParams::new(1.5, AlphaProfile::sinusoidal(0.55, 0.3, 1.0, 0.0)?)?;
    let sampler = SmppSampler::new(&model, 1.0)?;
    let paths = (0..20_000)
        .map(|i| sampler.sample(RngSpec::new(11, i)))
        .collect::<multistable_poisson::Result<Vec<_>>>()?;
    let pmf = empirical_pmf(&paths, 1.0)?;
    let exact = (-lambda_alpha_integral(&model, 0.0, 1.0, &QuadratureSpec::default())?).exp();
    println!(
        "P(N(1) = 0): empirical {:.4} ± {:.4}, exact {exact:.4}",
        pmf.prob(0),
        pmf.std_error(0)
    );
    assert!((pmf.prob(0) - exact).abs() < 5.0 * pmf.std_error(0));
    let jumps = MeanEstimate::from_samples(&paths.iter().map(|p| p.n_jumps() as f64).collect::<Vec<_>>())?;
    println!(
        "mean number of jump epochs {:.4}, Lambda(0,1) = {:.4}",
        jumps.mean,
        sampler.total_intensity()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
