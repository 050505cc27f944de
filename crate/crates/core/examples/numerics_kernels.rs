// Numerical building blocks: quadrature, Bell polynomials, DFT coefficients, Stehfest inversion.

use multistable_poisson::numerics::{
    adaptive_gauss_legendre, bell_derivatives, binomial, dft_coefficients, gauss_legendre, stehfest_invert,
    CompensatedSum, FourierPlan,
};
use num_complex::Complex64;

pub fn run_example() -> multistable_poisson::Result<()> {
    let g: f64 = gauss_legendre(|x: f64| x.sin(), 0.0, std::f64::consts::PI, 4, 16)?;
    let a: f64 = adaptive_gauss_legendre(|x: f64| x.sqrt(), 0.0, 1.0, 1e-14, 1e-12)?;
    println!("∫ sin over [0, π] = {g:.15}, ∫ √x over [0, 1] = {a:.15}");
    assert!((g - 2.0).abs() < 1e-13 && (a - 2.0 / 3.0).abs() < 1e-10);

    // d^n/dx^n e^{2x} at 0 is 2^n
    let b = bell_derivatives(&[2.0, 0.0, 0.0, 0.0, 0.0])?;
    println!("Bell derivatives of e^(2x): {b:?}");
    assert_eq!(b[5], 32.0);

    // coefficients of (1 + u)^4 from samples on the unit circle
    let plan = FourierPlan::new(8)?;
    let values: Vec<Complex64> = plan.roots().iter().map(|u| (1.0 + u).powu(4)).collect();
    let c = dft_coefficients(&values, &plan)?;
    for (n, c) in c.iter().take(5).enumerate() {
        assert!((c.re - binomial(4.0, n as u64)).abs() < 1e-12);
    }

    // 1/(s + 1) inverts to e^{−t}
    let f = stehfest_invert(|s| Ok(1.0 / (s + 1.0)), 1.0, 14)?;
    println!("Stehfest e^-1 = {f:.8}");
    assert!((f - (-1f64).exp()).abs() < 1e-6);

    let s: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
    assert_eq!(s.value(), 1.0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> multistable_poisson::Result<()> {
    run_example()
}
