use crate::error::{domain, numeric, Result};

pub const MAX_BELL_ORDER: usize = 64;

/// Complete Bell polynomials `B_0..=B_n` evaluated at `a_1..=a_n`, via
/// `B_{m+1} = Σ_{j=0}^{m} C(m, j) B_{m-j} a_{j+1}`.
///
/// With `a_m = g^{(m)}(x)` this gives `d^n/dx^n e^{g(x)} = e^{g(x)} B_n`.
pub fn bell_derivatives(a: &[f64]) -> Result<Vec<f64>> {
    let n = a.len();
    if n > MAX_BELL_ORDER {
        return domain(format!("Bell recurrence capped at order {MAX_BELL_ORDER}, got {n}"));
    }
    let mut b = Vec::with_capacity(n + 1);
    b.push(1.0);
    // Pascal row C(m, ·), updated in place
    let mut row = vec![1.0];
    for m in 0..n {
        let next: f64 = (0..=m).map(|j| row[j] * b[m - j] * a[j]).sum();
        if !next.is_finite() {
            return numeric(format!("Bell polynomial B_{} overflowed", m + 1));
        }
        b.push(next);
        let mut new_row = vec![1.0; m + 2];
        for j in 1..=m {
            new_row[j] = row[j - 1] + row[j];
        }
        row = new_row;
    }
    Ok(b)
}
