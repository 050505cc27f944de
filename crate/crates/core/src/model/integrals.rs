use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AlphaProfile, ModelParams};
use crate::error::{domain, Error, Result};
use crate::numerics::{adaptive_gauss_legendre, gauss_legendre, gauss_legendre_rule, panel_count, QuadValue};

fn default_panel_count() -> usize {
    1
}

fn default_points() -> usize {
    64
}

/// Quadrature rule for integrals over time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum QuadratureSpec {
    /// Gauss–Legendre with `panel_count` panels per unit of time (at least one
    /// per smooth piece of the profile) and `points` nodes per panel.
    GaussLegendrePanels {
        #[serde(default = "default_panel_count")]
        panel_count: usize,
        #[serde(default = "default_points")]
        points: usize,
    },
    Adaptive {
        abs_tol: f64,
        rel_tol: f64,
    },
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::GaussLegendrePanels {
            panel_count: 1,
            points: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::GaussLegendrePanels {
                panel_count: per_unit,
                points,
            } => {
                if per_unit < 1 || points < 1 {
                    return domain("panel_count and points must be at least 1");
                }
            }
            Self::Adaptive { abs_tol, rel_tol } => {
                if !(abs_tol > 0.0 && rel_tol > 0.0) {
                    return domain("quadrature tolerances must be strictly positive");
                }
            }
        }
        Ok(())
    }

    /// Integrates `f` over `[a, b]` with the interior points in `breaks` used
    /// as panel boundaries.
    pub fn integrate<V, F>(&self, f: F, a: f64, b: f64, breaks: &[f64]) -> Result<V>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
    {
        self.validate()?;
        if !(a <= b) {
            return domain(format!("integration bounds out of order: [{a}, {b}]"));
        }
        let mut edges = Vec::with_capacity(breaks.len() + 2);
        edges.push(a);
        edges.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
        edges.push(b);
        let mut acc = V::zero();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            acc = acc
                + match *self {
                    Self::GaussLegendrePanels {
                        panel_count: per_unit,
                        points,
                    } => {
                        let panels = panel_count(hi - lo, per_unit as f64)?;
                        gauss_legendre(&f, lo, hi, panels, points)?
                    }
                    Self::Adaptive { abs_tol, rel_tol } => {
                        let share = (hi - lo) / (b - a);
                        adaptive_gauss_legendre(&f, lo, hi, abs_tol * share, rel_tol)?
                    }
                };
        }
        Ok(acc)
    }
}

fn check_interval(s: f64, t: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite() && t.is_finite()) {
        return domain(format!("interval endpoints must be finite and nonnegative: [{s}, {t}]"));
    }
    if s > t {
        return domain(format!("interval start {s} exceeds end {t}"));
    }
    Ok(())
}

/// `Λ(s, t) = ∫_s^t λ^{α(τ)} dτ`.
pub fn lambda_alpha_integral(params: &ModelParams, s: f64, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_interval(s, t)?;
    let breaks = params.alpha.breakpoints(s, t);
    let v: f64 = quad.integrate(|tau| params.intensity(tau), s, t, &breaks)?;
    if !v.is_finite() {
        return Err(Error::Numeric(format!("Λ({s}, {t}) is not finite")));
    }
    Ok(v)
}

/// `Φ(u; s, t) = ∫_s^t u^{α(τ)} dτ` for real `u ≥ 0`.
pub fn bernstein_integral(u: f64, s: f64, t: f64, alpha: &AlphaProfile, quad: &QuadratureSpec) -> Result<f64> {
    check_interval(s, t)?;
    if !(u >= 0.0 && u.is_finite()) {
        return domain(format!("Bernstein argument must be finite and nonnegative, got {u}"));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    let ln_u = u.ln();
    let breaks = alpha.breakpoints(s, t);
    quad.integrate(|tau| (alpha.eval(tau) * ln_u).exp(), s, t, &breaks)
}

/// Principal-branch `u^α`, with `0^α = 0`.
pub fn complex_power(u: Complex64, alpha: f64) -> Complex64 {
    if u.re == 0.0 && u.im == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    (u.ln() * alpha).exp()
}

/// `Φ(u; s, t)` for complex `u` with `Re u ≥ 0` (principal branch).
pub fn bernstein_integral_complex(
    u: Complex64,
    s: f64,
    t: f64,
    alpha: &AlphaProfile,
    quad: &QuadratureSpec,
) -> Result<Complex64> {
    check_interval(s, t)?;
    if !(u.re >= 0.0) || !u.im.is_finite() {
        return domain(format!("complex Bernstein argument needs Re u >= 0, got {u}"));
    }
    if u.re == 0.0 && u.im == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln_u = u.ln();
    let breaks = alpha.breakpoints(s, t);
    quad.integrate(|tau| (ln_u * alpha.eval(tau)).exp(), s, t, &breaks)
}

/// Quadrature nodes on `[s, t]` reduced to the index values `α(τ_i)` and weights,
/// for integrands that depend on time only through `α`. An adaptive spec is
/// mapped to four 64-point panels per unit time.
#[derive(Debug, Clone)]
pub struct ProfileNodes {
    alphas: Vec<f64>,
    weights: Vec<f64>,
}

impl ProfileNodes {
    pub fn new(alpha: &AlphaProfile, s: f64, t: f64, quad: &QuadratureSpec) -> Result<Self> {
        check_interval(s, t)?;
        quad.validate()?;
        let (per_unit, points) = match *quad {
            QuadratureSpec::GaussLegendrePanels { panel_count, points } => (panel_count, points),
            QuadratureSpec::Adaptive { .. } => (4, 64),
        };
        let rule = gauss_legendre_rule(points);
        let mut edges = vec![s];
        edges.extend(alpha.breakpoints(s, t));
        edges.push(t);
        let mut alphas = Vec::new();
        let mut weights = Vec::new();
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let panels = panel_count(hi - lo, per_unit as f64)?;
            let width = (hi - lo) / panels as f64;
            for p in 0..panels {
                let a = lo + width * p as f64;
                let half = 0.5 * width;
                for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                    alphas.push(alpha.eval(a + half + half * x));
                    weights.push(wt * half);
                }
            }
        }
        Ok(Self { alphas, weights })
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// `∫ f(α(τ)) dτ`.
    pub fn integrate<V: QuadValue>(&self, f: impl Fn(f64) -> V) -> V {
        self.alphas
            .iter()
            .zip(&self.weights)
            .fold(V::zero(), |acc, (&a, &w)| acc + f(a) * w)
    }
}

const CELL: f64 = 1.0 / 16.0;
const CELL_POINTS: usize = 20;

/// Tabulated running integral `G(x) = ∫_0^x g(τ) dτ` of a positive rate.
///
/// Values at cell edges are stored; evaluation between edges integrates the
/// remaining partial cell. Kinks listed in `breaks` are honoured as panel edges.
pub struct CumulativeIntegral {
    g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    breaks: Vec<f64>,
    cum: Vec<f64>,
}

impl std::fmt::Debug for CumulativeIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CumulativeIntegral")
            .field("cells", &(self.cum.len() - 1))
            .finish()
    }
}

impl CumulativeIntegral {
    pub fn new<G>(g: G, mut breaks: Vec<f64>, x_max: f64) -> Result<Self>
    where
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(x_max >= 0.0 && x_max.is_finite()) {
            return domain(format!("table extent must be finite and nonnegative, got {x_max}"));
        }
        breaks.retain(|b| *b > 0.0 && b.is_finite());
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let cells = panel_count(x_max, 1.0 / CELL)? + 1;
        let mut table = Self {
            g: Box::new(g),
            breaks,
            cum: Vec::with_capacity(cells + 1),
        };
        table.cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..cells {
            let lo = i as f64 * CELL;
            acc += table.piece(lo, lo + CELL);
            if !acc.is_finite() {
                return Err(Error::Numeric(format!("running integral overflowed near {lo}")));
            }
            table.cum.push(acc);
        }
        Ok(table)
    }

    /// For `λ^{α(τ)}`.
    pub fn intensity(params: &ModelParams, x_max: f64) -> Result<Self> {
        let p = params.clone();
        let breaks = params.alpha.breakpoints(0.0, x_max + 1.0);
        Self::new(move |tau| p.intensity(tau), breaks, x_max)
    }

    /// For `u^{α(τ)}`, `u > 0`.
    pub fn bernstein(u: f64, alpha: &AlphaProfile, x_max: f64) -> Result<Self> {
        if !(u > 0.0 && u.is_finite()) {
            return domain(format!("Bernstein argument must be positive, got {u}"));
        }
        let a = alpha.clone();
        let ln_u = u.ln();
        let breaks = alpha.breakpoints(0.0, x_max + 1.0);
        Self::new(move |tau| (a.eval(tau) * ln_u).exp(), breaks, x_max)
    }

    pub fn rate(&self, x: f64) -> f64 {
        (self.g)(x)
    }

    pub fn extent(&self) -> f64 {
        (self.cum.len() - 1) as f64 * CELL
    }

    /// `∫_a^b g` for `b - a` at most a cell or so.
    fn piece(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let rule = gauss_legendre_rule(CELL_POINTS);
        let first = self.breaks.partition_point(|&x| x <= a);
        let mut lo = a;
        let mut acc = 0.0;
        for &brk in self.breaks[first..].iter().take_while(|&&x| x < b) {
            acc += rule.integrate(&*self.g, lo, brk).unwrap_or(f64::NAN);
            lo = brk;
        }
        acc + rule.integrate(&*self.g, lo, b).unwrap_or(f64::NAN)
    }

    /// `G(x)`.
    pub fn value(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let last = self.cum.len() - 1;
        let idx = ((x / CELL).floor() as usize).min(last);
        let edge = idx as f64 * CELL;
        if idx < last {
            return self.cum[idx] + self.piece(edge, x);
        }
        // past the table: march on in cell-sized steps
        let mut acc = self.cum[last];
        let mut lo = edge;
        while lo < x {
            let hi = (lo + CELL).min(x);
            acc += self.piece(lo, hi);
            lo = hi;
        }
        acc
    }

    /// `∫_a^b g`.
    pub fn segment(&self, a: f64, b: f64) -> f64 {
        self.value(b) - self.value(a)
    }

    /// Smallest `x` with `G(x) = y`, for `0 <= y <= G(extent)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        let last = self.cum.len() - 1;
        if !(y >= 0.0) || y > self.cum[last] {
            return domain(format!("level {y} outside the tabulated range [0, {}]", self.cum[last]));
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        let idx = self.cum.partition_point(|&c| c < y).max(1) - 1;
        let (mut lo, mut hi) = (idx as f64 * CELL, (idx + 1) as f64 * CELL);
        let base = self.cum[idx];
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let f = base + self.piece(idx as f64 * CELL, x) - y;
            if f == 0.0 {
                return Ok(x);
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - f / (self.g)(x);
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            // residuals carry rounding of order eps·y, so steps below a few ulps are noise
            let tol = 8.0 * f64::EPSILON * x.max(CELL);
            if (next - x).abs() <= tol || hi - lo <= tol {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn params(lambda: f64, alpha: AlphaProfile) -> ModelParams {
        ModelParams::new(lambda, alpha).unwrap()
    }

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn unit_rate_gives_length() {
        let p = params(1.0, AlphaProfile::sinusoidal(0.5, 0.3, 1.3, 0.0).unwrap());
        let v = lambda_alpha_integral(&p, 0.0, 2.5, &quad()).unwrap();
        assert!((v - 2.5).abs() < 1e-13);
    }

    #[test]
    fn linear_profile_against_riemann_sum() {
        // λ = e and α(τ) = τ on [0.05, 0.95] makes the integrand e^τ
        let p = params(E, AlphaProfile::linear_clamped(0.0, 1.0, 0.05, 0.95).unwrap());
        let v = lambda_alpha_integral(&p, 0.05, 0.95, &quad()).unwrap();
        let n = 200_000;
        let h = 0.9 / n as f64;
        let riemann: f64 = (0..n).map(|i| (0.05 + (i as f64 + 0.5) * h).exp() * h).sum();
        let exact = 0.95f64.exp() - 0.05f64.exp();
        assert!((riemann - exact).abs() < 1e-9);
        assert!((v - exact).abs() < 1e-13, "{v} vs {exact}");
        assert!((v - 1.534_438_56).abs() < 1e-8);
    }

    #[test]
    fn constant_profile_collapse() {
        let p = params(4.0, AlphaProfile::constant(0.5).unwrap());
        let v = lambda_alpha_integral(&p, 0.0, 3.0, &quad()).unwrap();
        assert!((v - 6.0).abs() <= 1e-12 * 6.0);
        let a = AlphaProfile::constant(0.3).unwrap();
        let phi = bernstein_integral(2.0, 0.0, 1.0, &a, &quad()).unwrap();
        assert!((phi - 2f64.powf(0.3)).abs() <= 1e-12 * phi);
        assert!((phi - 1.231_144).abs() < 1e-6);
    }

    #[test]
    fn bernstein_trivial_values() {
        let a = AlphaProfile::sinusoidal(0.5, 0.3, 1.0, 0.4).unwrap();
        assert!((bernstein_integral(1.0, 1.0, 4.0, &a, &quad()).unwrap() - 3.0).abs() < 1e-13);
        assert_eq!(bernstein_integral(0.0, 0.3, 2.0, &a, &quad()).unwrap(), 0.0);
        assert!(bernstein_integral(-1.0, 0.0, 1.0, &a, &quad()).is_err());
        let z = bernstein_integral_complex(Complex64::new(1.0, 0.0), 0.0, 2.0, &a, &quad()).unwrap();
        assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-13);
        assert!(bernstein_integral_complex(Complex64::new(-0.1, 0.5), 0.0, 2.0, &a, &quad()).is_err());
    }

    #[test]
    fn reversed_interval_is_domain_error() {
        let p = params(2.0, AlphaProfile::constant(0.5).unwrap());
        assert!(matches!(
            lambda_alpha_integral(&p, 2.0, 1.0, &quad()),
            Err(Error::Domain(_))
        ));
        assert_eq!(lambda_alpha_integral(&p, 1.5, 1.5, &quad()).unwrap(), 0.0);
    }

    #[test]
    fn adaptive_rule_with_knots() {
        let p = params(
            3.0,
            AlphaProfile::piecewise_linear(vec![(0.0, 0.2), (0.7, 0.8), (1.9, 0.4)]).unwrap(),
        );
        let adaptive = QuadratureSpec::Adaptive {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
        };
        let a = lambda_alpha_integral(&p, 0.0, 3.0, &adaptive).unwrap();
        let b = lambda_alpha_integral(&p, 0.0, 3.0, &quad()).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn cumulative_table_matches_direct_quadrature() {
        let p = params(2.5, AlphaProfile::linear_clamped(0.1, 0.4, 0.2, 0.8).unwrap());
        let table = CumulativeIntegral::intensity(&p, 5.0).unwrap();
        for &x in &[0.0, 0.013, 0.5, 0.25, 1.749, 3.0, 4.99, 7.3] {
            let direct = lambda_alpha_integral(&p, 0.0, x, &quad()).unwrap();
            assert!((table.value(x) - direct).abs() < 1e-13 * direct.max(1.0), "x={x}");
        }
        for &y in &[1e-6, 0.3, 2.0, 6.0] {
            let x = table.inverse(y).unwrap();
            assert!((table.value(x) - y).abs() < 1e-12 * y.max(1.0), "y={y}");
        }
        assert!(table.inverse(-1.0).is_err());
    }

    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn additive_and_monotone(a in 0.0f64..3.0, d1 in 0.0f64..2.0, d2 in 1e-3f64..2.0, lambda in 0.1f64..10.0) {
            let p = params(lambda, AlphaProfile::sinusoidal(0.5, 0.35, 1.7, 0.2).unwrap());
            let q = quad();
            let (b, c) = (a + d1, a + d1 + d2);
            let ab = lambda_alpha_integral(&p, a, b, &q).unwrap();
            let bc = lambda_alpha_integral(&p, b, c, &q).unwrap();
            let ac = lambda_alpha_integral(&p, a, c, &q).unwrap();
            prop_assert!((ab + bc - ac).abs() <= 2e-12 * ac.max(1.0));
            prop_assert!(ac > ab);
        }
    }
}
