use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::stable::{kanter_inputs, scaled_stable};
use super::RngSpec;
use crate::error::{domain, Result};
use crate::format::float;
use crate::model::{AlphaProfile, ModelParams};

/// Largest number of cells a time grid may have.
pub const MAX_GRID_CELLS: usize = 1 << 26;

/// Uniform grid `0, step, 2 step, …` closed at `t_max` (the last cell may be short).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_max: f64,
    pub step: f64,
}

impl TimeGrid {
    pub fn new(t_max: f64, step: f64) -> Result<Self> {
        let g = Self { t_max, step };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return domain(format!("grid step must be positive, got {}", self.step));
        }
        if !(self.t_max >= self.step && self.t_max.is_finite()) {
            return domain(format!("grid horizon {} must be at least one step", self.t_max));
        }
        if self.t_max / self.step > MAX_GRID_CELLS as f64 {
            return domain(format!("grid has more than {MAX_GRID_CELLS} cells"));
        }
        Ok(())
    }

    /// Number of cells; a relative slack of 1e-9 absorbs `t_max/step` round-off.
    pub fn cells(&self) -> usize {
        ((self.t_max / self.step) * (1.0 - 1e-9)).ceil() as usize
    }

    /// Number of grid points, `cells + 1`.
    pub fn len(&self) -> usize {
        self.cells() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, i: usize) -> f64 {
        if i >= self.cells() {
            self.t_max
        } else {
            i as f64 * self.step
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time(i)).collect()
    }
}

/// `H(t_i)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    grid: TimeGrid,
    values: Vec<f64>,
}

/// Result of inverting a sampled path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTime {
    At(f64),
    /// The level is not exceeded before the grid horizon.
    BeyondHorizon,
}

impl InverseTime {
    pub fn time(&self) -> Option<f64> {
        match self {
            Self::At(t) => Some(*t),
            Self::BeyondHorizon => None,
        }
    }
}

impl SubordinatorPath {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `H` at the last grid time not after `t`.
    pub fn value_at(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let idx = ((t / self.grid.step) * (1.0 + 1e-12)).floor() as usize;
        self.values[idx.min(self.values.len() - 1)]
    }

    /// Writes `t,h` rows, one per grid point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "h"])?;
        for (i, v) in self.values.iter().enumerate() {
            w.write_record([float(self.grid.time(i)), float(*v)])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `L` as a step function: on `[x_{i}, x_{i+1})` with `x_i = H(t_{i−1})` it equals `t_i`.
    pub fn write_inverse_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "l"])?;
        for i in 1..self.values.len() {
            w.write_record([float(self.values[i - 1]), float(self.grid.time(i))])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Increment of `H` over `[a, b]` with the index frozen at the midpoint.
pub fn sample_increment<R: Rng + ?Sized>(alpha: &AlphaProfile, a: f64, b: f64, rng: &mut R) -> f64 {
    let (u, w) = kanter_inputs(rng);
    if b <= a {
        return 0.0;
    }
    scaled_stable(alpha.eval(0.5 * (a + b)), b - a, u, w)
}

/// One path of the multistable subordinator on `grid`.
pub fn sample_multistable_path(params: &ModelParams, grid: &TimeGrid, rng: RngSpec) -> Result<SubordinatorPath> {
    params.validate()?;
    grid.validate()?;
    let mut r = rng.rng();
    let mut values = Vec::with_capacity(grid.len());
    values.push(0.0);
    let mut h = 0.0;
    for i in 1..grid.len() {
        h += sample_increment(&params.alpha, grid.time(i - 1), grid.time(i), &mut r);
        values.push(h);
    }
    Ok(SubordinatorPath { grid: *grid, values })
}

/// `H` at each of the sorted `times`, sampled on a grid of width `step`
/// refined to contain them.
pub fn sample_multistable_at<R: Rng + ?Sized>(
    alpha: &AlphaProfile,
    times: &[f64],
    step: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return domain(format!("step must be positive, got {step}"));
    }
    if times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || times.windows(2).any(|w| w[1] < w[0]) {
        return domain("evaluation times must be finite, nonnegative and sorted");
    }
    let mut out = Vec::with_capacity(times.len());
    let (mut now, mut h) = (0.0, 0.0);
    for &target in times {
        while now < target {
            let next = ((now / step).floor() + 1.0) * step;
            let next = if next <= now { now + step } else { next };
            let next = next.min(target);
            h += sample_increment(alpha, now, next, rng);
            now = next;
        }
        out.push(h);
    }
    Ok(out)
}

/// Rescaled increment `(H(t+r) − H(t)) / r^{1/α(t)}` sampled with `substeps`
/// cells, paired with the stable(α(t)) variable built from the same uniforms.
/// The pair converges as `r → 0` when the index is continuous at `t`.
pub fn sample_tangent_pair<R: Rng + ?Sized>(
    alpha: &AlphaProfile,
    t: f64,
    r: f64,
    substeps: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !(t >= 0.0 && r > 0.0 && r.is_finite()) || substeps == 0 {
        return domain(format!(
            "need t >= 0, r > 0 and substeps >= 1, got t={t}, r={r}, substeps={substeps}"
        ));
    }
    let a0 = alpha.eval(t);
    let dt = r / substeps as f64;
    let (mut inc, mut reference) = (0.0, 0.0);
    for j in 0..substeps {
        let (u, w) = kanter_inputs(rng);
        inc += scaled_stable(alpha.eval(t + (j as f64 + 0.5) * dt), dt, u, w);
        reference += scaled_stable(a0, dt, u, w);
    }
    let scale = r.powf(1.0 / a0);
    Ok((inc / scale, reference / scale))
}

/// `L(x) = min{t_i : H(t_i) > x}` on the path's grid.
pub fn invert_path(path: &SubordinatorPath, x: f64) -> Result<InverseTime> {
    if !(x >= 0.0) {
        return domain(format!("inverse level must be nonnegative, got {x}"));
    }
    let idx = path.values.partition_point(|&v| v <= x);
    Ok(if idx < path.values.len() {
        InverseTime::At(path.grid.time(idx))
    } else {
        InverseTime::BeyondHorizon
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tangent_pair_collapses_for_constant_index() {
        let alpha = AlphaProfile::constant(0.6).unwrap();
        let mut rng = RngSpec::new(3, 0).rng();
        for r in [0.1, 1e-3] {
            let (a, b) = sample_tangent_pair(&alpha, 0.5, r, 8, &mut rng).unwrap();
            assert!((a - b).abs() <= 1e-12 * b);
        }
        assert!(sample_tangent_pair(&alpha, 0.5, 0.0, 8, &mut rng).is_err());
        assert!(sample_tangent_pair(&alpha, 0.5, 0.1, 0, &mut rng).is_err());
    }

    #[test]
    fn tangent_reference_is_standard_stable() {
        // E e^{-S} = e^{-1} for the one-sided stable law with unit scale
        let alpha = AlphaProfile::linear_clamped(-0.1, 1.0, 0.05, 0.95).unwrap();
        let n = 40_000;
        let mut rng = RngSpec::new(4, 0).rng();
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let (_, s) = sample_tangent_pair(&alpha, 0.5, 0.01, 16, &mut rng).unwrap();
            let v = (-s).exp();
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((mean - (-1f64).exp()).abs() < 4.0 * se, "{mean} ± {se}");
    }
    use crate::model::bernstein_integral;
    use crate::model::QuadratureSpec;

    fn mean_se(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    }

    #[test]
    fn grid_shape() {
        let g = TimeGrid::new(1.0, 1e-3).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g.time(1000), 1.0);
        let g = TimeGrid::new(1.05, 0.1).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(g.time(11), 1.05);
        assert!(TimeGrid::new(0.5, 1.0).is_err());
        assert!(TimeGrid::new(1.0, 0.0).is_err());
    }

    #[test]
    fn paths_start_at_zero_and_increase() {
        let g = TimeGrid::new(2.0, 1e-3).unwrap();
        let strict = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.6, 0.2, 1.0, 0.0).unwrap()).unwrap();
        // at α = 0.2 an increment step^5 · S can vanish against H in f64
        let low = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.5, 0.3, 1.0, 0.0).unwrap()).unwrap();
        for stream in 0..20 {
            let path = sample_multistable_path(&strict, &g, RngSpec::new(1, stream)).unwrap();
            assert_eq!(path.values()[0], 0.0);
            assert!(path.values().windows(2).all(|w| w[1] > w[0]));
            let path = sample_multistable_path(&low, &g, RngSpec::new(1, stream)).unwrap();
            assert!(path.values().windows(2).all(|w| w[1] >= w[0]));
        }
    }

    #[test]
    fn same_spec_same_path() {
        let p = ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap();
        let g = TimeGrid::new(1.0, 0.01).unwrap();
        let a = sample_multistable_path(&p, &g, RngSpec::new(9, 2)).unwrap();
        let b = sample_multistable_path(&p, &g, RngSpec::new(9, 2)).unwrap();
        let c = sample_multistable_path(&p, &g, RngSpec::new(9, 3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    fn laplace_of_terminal(alpha: AlphaProfile, t: f64, step: f64, us: &[f64], n: u64, seed: u64) {
        let quad = QuadratureSpec::default();
        let mut samples = vec![Vec::with_capacity(n as usize); us.len()];
        for stream in 0..n {
            let mut rng = RngSpec::new(seed, stream).rng();
            let h = sample_multistable_at(&alpha, &[t], step, &mut rng).unwrap()[0];
            for (k, u) in us.iter().enumerate() {
                samples[k].push((-u * h).exp());
            }
        }
        for (k, &u) in us.iter().enumerate() {
            let (m, se) = mean_se(&samples[k]);
            let target = (-bernstein_integral(u, 0.0, t, &alpha, &quad).unwrap()).exp();
            assert!((m - target).abs() <= 3.0 * se, "u={u}: {m} vs {target} ± {se}");
        }
    }

    #[test]
    fn constant_index_laplace() {
        laplace_of_terminal(
            AlphaProfile::constant(0.5).unwrap(),
            1.0,
            0.01,
            &[1.0, 2.0],
            100_000,
            21,
        );
        assert!(((-(2f64.sqrt())).exp() - 0.243_117).abs() < 1e-6);
    }

    #[test]
    fn varying_index_laplace() {
        laplace_of_terminal(
            AlphaProfile::linear_clamped(0.0, 1.0, 0.2, 0.8).unwrap(),
            1.0,
            0.01,
            &[0.5, 1.0, 2.0],
            100_000,
            22,
        );
        laplace_of_terminal(
            AlphaProfile::sinusoidal(0.5, 0.3, 1.0, 0.0).unwrap(),
            1.0,
            0.01,
            &[0.5, 1.0, 2.0],
            100_000,
            23,
        );
    }

    #[test]
    fn halving_the_step_moves_laplace_less_than_noise() {
        let alpha = AlphaProfile::linear_clamped(0.1, 0.8, 0.1, 0.9).unwrap();
        let quad = QuadratureSpec::default();
        let target = (-bernstein_integral(2.0, 0.0, 1.0, &alpha, &quad).unwrap()).exp();
        for step in [0.02, 0.01] {
            let v: Vec<f64> = (0..50_000)
                .map(|s| {
                    let mut rng = RngSpec::new(31, s).rng();
                    (-2.0 * sample_multistable_at(&alpha, &[1.0], step, &mut rng).unwrap()[0]).exp()
                })
                .collect();
            let (m, se) = mean_se(&v);
            assert!((m - target).abs() <= 3.0 * se, "step {step}: {m} vs {target}");
        }
    }

    #[test]
    fn inverse_basics() {
        let p = ModelParams::new(1.0, AlphaProfile::constant(0.6).unwrap()).unwrap();
        let g = TimeGrid::new(1.0, 0.01).unwrap();
        let path = sample_multistable_path(&p, &g, RngSpec::new(3, 0)).unwrap();
        assert_eq!(invert_path(&path, 0.0).unwrap(), InverseTime::At(0.01));
        assert_eq!(invert_path(&path, path.terminal()).unwrap(), InverseTime::BeyondHorizon);
        assert!(invert_path(&path, -1.0).is_err());
        let mut last = 0.0;
        for i in 0..200 {
            let x = path.terminal() * i as f64 / 200.0;
            let t = invert_path(&path, x).unwrap().time().unwrap();
            assert!(t >= last);
            last = t;
        }
    }

    #[test]
    fn inverse_duality_on_lattice() {
        let p = ModelParams::new(1.0, AlphaProfile::sinusoidal(0.5, 0.2, 0.7, 0.0).unwrap()).unwrap();
        let g = TimeGrid::new(1.0, 0.01).unwrap();
        for stream in 0..50 {
            let path = sample_multistable_path(&p, &g, RngSpec::new(4, stream)).unwrap();
            for xi in 0..40 {
                let x = 0.1 * xi as f64;
                let inv = invert_path(&path, x).unwrap();
                for (i, &h) in path.values().iter().enumerate() {
                    let t = g.time(i);
                    let later = match inv {
                        InverseTime::At(l) => l > t,
                        InverseTime::BeyondHorizon => true,
                    };
                    assert_eq!(later, h <= x, "stream {stream} x {x} t {t}");
                }
            }
        }
    }

    #[test]
    fn csv_rows() {
        let p = ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap();
        let g = TimeGrid::new(1.0, 1e-3).unwrap();
        let path = sample_multistable_path(&p, &g, RngSpec::new(1, 0)).unwrap();
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1002);
        assert!(text.starts_with("t,h\n0,0\n"));
    }
}
