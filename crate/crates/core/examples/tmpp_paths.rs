// Sampled TMPP paths `N(L(t))` and the empty-interval probability `E_α(−λ t^α)`.

use multistable_poisson::harness::empirical_pmf;
use multistable_poisson::model::{AlphaProfile, ModelParams};
use multistable_poisson::paths::{sample_tmpp_path, RngSpec, TimeGrid};
use multistable_poisson::tmpp::mittag_leffler;

pub fn run_example() -> multistable_poisson::Result<()> {
    let model = ModelParams::new(1.0, AlphaProfile::constant(0.5)?)?;
    let grid = TimeGrid::new(100.0, 0.05)?;
    let paths = (0..4_000)
        .map(|i| sample_tmpp_path(&model, &grid, 1.0, RngSpec::new(5, i)))
        .collect::<multistable_poisson::Result<Vec<_>>>()?;
    let pmf = empirical_pmf(&paths, 1.0)?;
    let exact = mittag_leffler(0.5, -1.0)?;
    println!(
        "P(N(L(1)) = 0): empirical {:.4} ± {:.4}, exact {exact:.4}",
        pmf.prob(0),
        pmf.std_error(0)
    );
    assert!((pmf.prob(0) - exact).abs() < 5.0 * pmf.std_error(0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
