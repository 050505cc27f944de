/// Natural log of |Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// Generalized binomial coefficient `C(x, n)` by the multiplicative recurrence.
pub fn binomial(x: f64, n: u64) -> f64 {
    let mut c = 1.0;
    for j in 0..n {
        c *= (x - j as f64) / (j + 1) as f64;
    }
    c
}

/// `C(x, 0), C(x, 1), …, C(x, n_max)`.
pub fn binomial_sequence(x: f64, n_max: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = 1.0;
    out.push(c);
    for j in 0..n_max {
        c *= (x - j as f64) / (j + 1) as f64;
        out.push(c);
    }
    out
}

/// Falling factorial `x (x-1) ⋯ (x-m+1)`; magnitude and sign accumulated separately.
pub fn falling_factorial(x: f64, m: usize) -> f64 {
    let mut magnitude = 1.0;
    let mut negative = false;
    for j in 0..m {
        let factor = x - j as f64;
        if factor == 0.0 {
            return 0.0;
        }
        if factor < 0.0 {
            negative = !negative;
        }
        magnitude *= factor.abs();
    }
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_binomials() {
        assert_eq!(binomial(0.5, 0), 1.0);
        assert_eq!(binomial(0.5, 1), 0.5);
        assert_eq!(binomial(0.5, 2), -0.125);
        assert_eq!(binomial(0.5, 3), 0.0625);
        assert_eq!(binomial_sequence(0.5, 3), vec![1.0, 0.5, -0.125, 0.0625]);
    }

    #[test]
    fn integer_argument_terminates() {
        assert_eq!(binomial(3.0, 5), 0.0);
        assert_eq!(binomial(5.0, 2), 10.0);
    }

    #[test]
    fn binomial_agrees_with_gamma_ratio() {
        for &(x, n) in &[(0.3, 4u64), (2.7, 6), (0.9, 10)] {
            let via_gamma = gamma(x + 1.0) / (gamma(n as f64 + 1.0) * gamma(x - n as f64 + 1.0));
            assert!((binomial(x, n) - via_gamma).abs() < 1e-12, "x={x} n={n}");
        }
    }

    #[test]
    fn falling_factorial_signs() {
        assert_eq!(falling_factorial(0.5, 0), 1.0);
        assert_eq!(falling_factorial(0.5, 1), 0.5);
        assert_eq!(falling_factorial(0.5, 2), -0.25);
        assert!((falling_factorial(0.5, 3) - 0.375).abs() < 1e-16);
        assert_eq!(falling_factorial(2.0, 3), 0.0);
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-10);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }
}
