// One-sided stable variables and their Laplace transform `E e^{−sX} = e^{−s^α}`.

use multistable_poisson::harness::MeanEstimate;
use multistable_poisson::paths::{sample_stable, RngSpec};

pub fn run_example() -> multistable_poisson::Result<()> {
    let n = 20_000;
    for alpha in [0.3, 0.5, 0.8] {
        let mut rng = RngSpec::new(7, 0).rng();
        let xs = (0..n)
            .map(|_| sample_stable(alpha, &mut rng))
            .collect::<multistable_poisson::Result<Vec<f64>>>()?;
        for s in [0.5, 1.0, 2.0] {
            let est = MeanEstimate::from_samples(&xs.iter().map(|x| (-s * x).exp()).collect::<Vec<_>>())?;
            let exact = (-s.powf(alpha)).exp();
            let z = (est.mean - exact) / est.std_error;
            println!(
                "alpha={alpha} s={s}: empirical {:.4} ± {:.4}, exact {exact:.4}",
                est.mean, est.std_error
            );
            assert!(z.abs() < 5.0);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
