// Mittag-Leffler function on the negative axis, checked against closed forms.

use multistable_poisson::tmpp::mittag_leffler;

pub fn run_example() -> multistable_poisson::Result<()> {
    for x in [0.1, 1.0, 4.0, 9.0] {
        let e1 = mittag_leffler(1.0, -x)?;
        assert!((e1 - (-x).exp()).abs() < 1e-12);
        let half = mittag_leffler(0.5, -x)?;
        println!("E_1(-{x}) = {e1:.10}, E_1/2(-{x}) = {half:.10}");
    }
    // E_{1/2}(−√t) = e^t erfc(√t); at t = 1 this is 0.4275835762…
    let v = mittag_leffler(0.5, -1.0)?;
    assert!((v - 0.427_583_576_155_807).abs() < 1e-10);
    for alpha in [0.3, 0.7] {
        let row: Vec<String> = [0.5, 2.0, 8.0]
            .iter()
            .map(|&x| mittag_leffler(alpha, -x).map(|v| format!("{v:.8}")))
            .collect::<multistable_poisson::Result<_>>()?;
        println!("alpha={alpha}: E(-0.5), E(-2), E(-8) = {}", row.join(", "));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
