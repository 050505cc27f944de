// TMPP state probabilities by Gaver–Stehfest inversion, and the Laplace-domain identity behind them.

use multistable_poisson::model::{AlphaProfile, ModelParams, QuadratureSpec};
use multistable_poisson::tmpp::{epoch_lt, mittag_leffler, state_prob_lt, tmpp_pmf, InversionSpec};

pub fn run_example() -> multistable_poisson::Result<()> {
    let quad = QuadratureSpec::default();
    let inversion = InversionSpec::default();
    let constant = ModelParams::new(1.0, AlphaProfile::constant(0.5)?)?;
    for t in [0.25, 1.0, 4.0] {
        let p0 = tmpp_pmf(&constant, 0, t, &inversion, &quad)?;
        let exact = mittag_leffler(0.5, -t.sqrt())?;
        println!("t={t}: P(N(L(t)) = 0) = {:.6}, Mittag-Leffler {exact:.6}", p0.p);
        assert!((p0.p - exact).abs() < 1e-4);
    }

    let varying = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.5, 0.2, 1.0, 0.0)?)?;
    let row: Vec<String> = (0..4)
        .map(|k| tmpp_pmf(&varying, k, 1.0, &inversion, &quad).map(|v| format!("{:.5}", v.p)))
        .collect::<multistable_poisson::Result<_>>()?;
    println!("varying index, t=1, k=0..3: {}", row.join(", "));
    // s p̃_k(s) = E e^{−sT_k} − E e^{−sT_{k+1}}
    for k in 1..=3 {
        let lhs = 2.0 * state_prob_lt(&varying, k, 2.0, &quad)?;
        let rhs = epoch_lt(&varying, k, 2.0, &quad)? - epoch_lt(&varying, k + 1, 2.0, &quad)?;
        assert!((lhs - rhs).abs() < 1e-8);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
