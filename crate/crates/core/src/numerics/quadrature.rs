use std::collections::HashMap;
use std::ops::{Add, Mul, Sub};
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{numeric, Error, Result};
use crate::format::float;

/// Values that can be accumulated by the quadrature rules (real or complex).
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn is_finite_value(&self) -> bool;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendreRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendreRule {
    /// Newton iteration on the three-term Legendre recurrence.
    pub fn new(points: usize) -> Self {
        assert!(points >= 1, "Gauss-Legendre rule needs at least one point");
        let n = points;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d.is_finite() { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates over `[a, b]` with a single panel.
    pub fn integrate<V, F>(&self, f: &F, a: f64, b: f64) -> Result<V>
    where
        V: QuadValue,
        F: Fn(f64) -> V + ?Sized,
    {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = mid + half * x;
            let v = f(t);
            if !v.is_finite_value() {
                return Err(Error::Numeric(format!("non-finite integrand at x = {}", float(t))));
            }
            acc = acc + v * *w;
        }
        Ok(acc * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const CACHED_RULES: usize = 129;

/// Shared, lazily built rule of the given size.
pub fn gauss_legendre_rule(points: usize) -> &'static GaussLegendreRule {
    static SMALL: [OnceLock<GaussLegendreRule>; CACHED_RULES] = [const { OnceLock::new() }; CACHED_RULES];
    static LARGE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendreRule>>> = OnceLock::new();
    if points < CACHED_RULES {
        return SMALL[points].get_or_init(|| GaussLegendreRule::new(points));
    }
    let cache = LARGE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(points)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendreRule::new(points))))
}

/// Composite Gauss–Legendre rule with `panels` equal panels of `points` nodes.
pub fn gauss_legendre<V, F>(f: F, a: f64, b: f64, panels: usize, points: usize) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(a <= b) {
        return Err(Error::Domain(format!("quadrature bounds out of order: [{a}, {b}]")));
    }
    if panels == 0 || points == 0 {
        return Err(Error::Domain("panels and points must be at least 1".into()));
    }
    let rule = gauss_legendre_rule(points);
    let width = (b - a) / panels as f64;
    let mut acc = V::zero();
    for p in 0..panels {
        let lo = a + width * p as f64;
        let hi = if p + 1 == panels { b } else { lo + width };
        acc = acc + rule.integrate(&f, lo, hi)?;
    }
    Ok(acc)
}

/// Largest number of panels a fixed composite rule may use.
pub const MAX_PANELS: usize = 1 << 20;

/// Panels needed to cover `width` at `per_unit` panels per unit length, at least one.
pub fn panel_count(width: f64, per_unit: f64) -> Result<usize> {
    let panels = (width * per_unit).ceil();
    if !(panels <= MAX_PANELS as f64) {
        return numeric(format!(
            "interval of width {} needs more than {MAX_PANELS} panels",
            float(width)
        ));
    }
    Ok((panels as usize).max(1))
}

const ADAPTIVE_POINTS: usize = 16;
const ADAPTIVE_MAX_DEPTH: u32 = 40;
const ADAPTIVE_MAX_PANELS: usize = 1 << 15;

/// Globally adaptive bisection comparing a 16-point panel against its two halves.
pub fn adaptive_gauss_legendre<V, F>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    if !(a <= b) {
        return Err(Error::Domain(format!("quadrature bounds out of order: [{a}, {b}]")));
    }
    if !(abs_tol > 0.0 && rel_tol > 0.0) {
        return Err(Error::Domain("tolerances must be strictly positive".into()));
    }
    if a == b {
        return Ok(V::zero());
    }
    let rule = gauss_legendre_rule(ADAPTIVE_POINTS);
    let whole = rule.integrate(&f, a, b)?;
    // coarse estimate of the total sets the relative target
    let mut stack = vec![(a, b, whole, 0u32)];
    let mut total = V::zero();
    let mut scale = whole.magnitude();
    let mut panels = 0usize;
    while let Some((lo, hi, coarse, depth)) = stack.pop() {
        panels += 1;
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&f, lo, mid)?;
        let right = rule.integrate(&f, mid, hi)?;
        let fine = left + right;
        scale = scale.max(fine.magnitude());
        let share = (hi - lo) / (b - a);
        let target = (abs_tol.max(rel_tol * scale)) * share;
        let exhausted = depth >= ADAPTIVE_MAX_DEPTH || panels >= ADAPTIVE_MAX_PANELS;
        if (fine - coarse).magnitude() <= target || exhausted {
            if exhausted {
                log::warn!("adaptive quadrature hit its refinement limit on [{lo}, {hi}]");
            }
            total = total + fine;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if !total.is_finite_value() {
        return numeric("adaptive quadrature produced a non-finite value");
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn square_on_unit_interval() {
        let v: f64 = gauss_legendre(|x| x * x, 0.0, 1.0, 1, 64).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_is_exact() {
        let v: f64 = gauss_legendre(|_| 1.0, 0.0, 1.0, 1, 64).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exponential() {
        let v: f64 = gauss_legendre(f64::exp, 0.0, 1.0, 1, 64).unwrap();
        assert!((v - (E - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn polynomial_exactness_per_panel() {
        // degree 2n-1 is exact for an n-point rule
        let v: f64 = gauss_legendre(|x| x.powi(7) - 3.0 * x.powi(4), -1.0, 2.0, 3, 4).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - 3.0 * (2f64.powi(5) + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn convergence_order_on_exp() {
        // a 6-point rule has error O(h^12); halving the width must gain at least 2^10
        let err = |panels| {
            let v: f64 = gauss_legendre(f64::exp, 0.0, 4.0, panels, 6).unwrap();
            (v - (4f64.exp() - 1.0)).abs()
        };
        let (e1, e2) = (err(1), err(2));
        assert!(e1 / e2 >= 2f64.powi(10), "ratio {}", e1 / e2);
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 64, 128] {
            let r = GaussLegendreRule::new(n);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn reports_non_finite_abscissa() {
        let err = gauss_legendre(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, 1, 8).unwrap_err();
        assert!(matches!(err, Error::Numeric(msg) if msg.contains("x =")));
    }

    #[test]
    fn rejects_reversed_bounds() {
        assert!(gauss_legendre(|x| x, 1.0, 0.0, 1, 8).is_err());
    }

    #[test]
    fn adaptive_handles_kink() {
        let v: f64 = adaptive_gauss_legendre(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-13, 1e-13).unwrap();
        let exact = 0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0;
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn complex_integrand() {
        let v: Complex64 = gauss_legendre(|x| Complex64::new(0.0, x).exp(), 0.0, std::f64::consts::PI, 1, 32).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-14);
    }
}
