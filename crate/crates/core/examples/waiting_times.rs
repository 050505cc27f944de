// Laplace transforms of TMPP waiting times: closed form, quadrature and Monte Carlo.

use multistable_poisson::harness::MeanEstimate;
use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::paths::{sample_tmpp_waiting_times, RngSpec};
use multistable_poisson::tmpp::waiting_time_lt;

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let constant = ModelParams::new(1.0, AlphaProfile::constant(0.5)?)?;
    for eta in [0.5, 1.0, 2.0] {
        let v = waiting_time_lt(&constant, 2, eta, &quad)?;
        let exact = 1.0 / (eta.powf(0.5) + 1.0);
        println!("constant index, eta={eta}: {v:.10} vs {exact:.10}");
        assert!((v - exact).abs() < 1e-6);
    }

    let varying = ModelParams::new(1.0, AlphaProfile::linear_clamped(0.4, 0.3, 0.05, 0.95)?)?;
    let n_max = 3;
    let mut rng = RngSpec::new(9, 0).rng();
    let draws = (0..5_000)
        .map(|_| sample_tmpp_waiting_times(&varying, n_max, 0.01, &mut rng))
        .collect::<multistable_poisson::Result<Vec<_>>>()?;
    for n in 1..=n_max {
        let v = waiting_time_lt(&varying, n, 1.0, &quad)?;
        let mc = MeanEstimate::from_samples(&draws.iter().map(|j| (-j[n - 1]).exp()).collect::<Vec<_>>())?;
        println!(
            "varying index, n={n}: quadrature {v:.5}, Monte Carlo {:.5} ± {:.5}",
            mc.mean, mc.std_error
        );
        assert!((v - mc.mean).abs() < 5.0 * mc.std_error);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
