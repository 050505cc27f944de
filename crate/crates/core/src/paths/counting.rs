use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Exp, Exp1};

use super::subordinator::{sample_increment, TimeGrid};
use super::RngSpec;
use crate::error::{domain, numeric, Error, Result};
use crate::format::float;
use crate::model::{CumulativeIntegral, ModelParams};
use crate::smpp::sibuya_sample;

/// Jump epochs and sizes of a counting process observed on `[0, horizon]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingPath {
    epochs: Vec<f64>,
    sizes: Vec<u64>,
    horizon: f64,
    truncated: bool,
}

impl CountingPath {
    pub fn new(epochs: Vec<f64>, sizes: Vec<u64>, horizon: f64, truncated: bool) -> Result<Self> {
        if epochs.len() != sizes.len() {
            return domain("epochs and sizes differ in length");
        }
        if epochs.windows(2).any(|w| !(w[1] > w[0])) {
            return domain("epochs must be strictly increasing");
        }
        if epochs.iter().any(|&e| !(e >= 0.0 && e <= horizon)) {
            return domain("epochs must lie in [0, horizon]");
        }
        if sizes.contains(&0) {
            return domain("jump sizes must be at least 1");
        }
        Ok(Self {
            epochs,
            sizes,
            horizon,
            truncated,
        })
    }

    pub fn epochs(&self) -> &[f64] {
        &self.epochs
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Set when the driving subordinator did not reach the horizon, so epochs
    /// near the end may be missing.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn n_jumps(&self) -> usize {
        self.epochs.len()
    }

    /// Sum of sizes of jumps at or before `t` (saturating).
    pub fn state_at(&self, t: f64) -> u64 {
        let k = self.epochs.partition_point(|&e| e <= t);
        self.sizes[..k].iter().fold(0u64, |acc, &s| acc.saturating_add(s))
    }

    /// Writes `epoch,size` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["epoch", "size"])?;
        for (e, s) in self.epochs.iter().zip(&self.sizes) {
            w.write_record([float(*e), s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reusable SMPP sampler: compound Poisson with rate `λ^{α(t)}` and Sibuya(`α(t)`)
/// sizes, epochs placed by inverting the tabulated `Λ(0, ·)`.
#[derive(Debug)]
pub struct SmppSampler {
    params: ModelParams,
    horizon: f64,
    table: CumulativeIntegral,
    total: f64,
}

impl SmppSampler {
    pub fn new(params: &ModelParams, horizon: f64) -> Result<Self> {
        params.validate()?;
        if !(horizon > 0.0 && horizon.is_finite()) {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        let table = CumulativeIntegral::intensity(params, horizon)?;
        let total = table.value(horizon);
        if total > MAX_EXPECTED_EVENTS {
            return numeric(format!(
                "expected {} events exceeds the limit {}",
                float(total),
                float(MAX_EXPECTED_EVENTS)
            ));
        }
        Ok(Self {
            params: params.clone(),
            horizon,
            table,
            total,
        })
    }

    /// `Λ(0, horizon)`.
    pub fn total_intensity(&self) -> f64 {
        self.total
    }

    pub fn sample(&self, rng: RngSpec) -> Result<CountingPath> {
        self.sample_with(&mut rng.rng())
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CountingPath> {
        let mut epochs = Vec::new();
        let mut sizes = Vec::new();
        let mut level = 0.0;
        loop {
            let e: f64 = Exp1.sample(rng);
            level += e;
            if level > self.total {
                break;
            }
            let t = self.table.inverse(level)?.min(self.horizon);
            if epochs.last().is_some_and(|&prev| t <= prev) {
                // two levels closer than the inversion resolution; merge the jumps
                let size = sibuya_sample(self.params.alpha.eval(t), rng)?;
                let last = sizes.len() - 1;
                sizes[last] = u64::saturating_add(sizes[last], size);
                continue;
            }
            sizes.push(sibuya_sample(self.params.alpha.eval(t), rng)?);
            epochs.push(t);
        }
        CountingPath::new(epochs, sizes, self.horizon, false)
    }
}

/// Largest expected number of events a single sampled path may carry.
pub const MAX_EXPECTED_EVENTS: f64 = 1e8;

/// One SMPP path on `[0, horizon]`.
pub fn sample_smpp_path(params: &ModelParams, horizon: f64, rng: RngSpec) -> Result<CountingPath> {
    SmppSampler::new(params, horizon)?.sample(rng)
}

/// One TMPP path: Poisson arrival times `V_n` are read through one sampled
/// multistable path, `T_n = H(V_n)`. `H` is sampled on `grid` refined at each `V_n`.
pub fn sample_tmpp_path(params: &ModelParams, grid: &TimeGrid, horizon: f64, rng: RngSpec) -> Result<CountingPath> {
    params.validate()?;
    grid.validate()?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return domain(format!("horizon must be positive, got {horizon}"));
    }
    let expected = params.lambda * grid.t_max;
    if expected > MAX_EXPECTED_EVENTS {
        return numeric(format!(
            "expected {} arrivals exceeds the limit {}",
            float(expected),
            float(MAX_EXPECTED_EVENTS)
        ));
    }
    let mut r = rng.rng();
    let arrivals = Exp::new(params.lambda).map_err(|e| Error::Domain(e.to_string()))?;
    let mut epochs = Vec::new();
    let (mut now, mut h) = (0.0, 0.0);
    let mut next_arrival: f64 = arrivals.sample(&mut r);
    let mut cell = 1;
    let cells = grid.cells();
    while cell <= cells {
        let grid_time = grid.time(cell);
        let target = next_arrival.min(grid_time);
        h += sample_increment(&params.alpha, now, target, &mut r);
        now = target;
        if h > horizon {
            break;
        }
        if target == next_arrival {
            if epochs.last().is_none_or(|&prev| h > prev) {
                epochs.push(h);
            } else {
                log::debug!("coincident TMPP epochs at {h}; the later one dropped");
            }
            next_arrival += arrivals.sample(&mut r);
        }
        if target == grid_time {
            cell += 1;
        }
    }
    let truncated = h <= horizon;
    let sizes = vec![1; epochs.len()];
    CountingPath::new(epochs, sizes, horizon, truncated)
}

/// Waiting times `J_1..J_n` of the TMPP, from `H` sampled on `[0, V_n]` with
/// cells of width `step` refined at each arrival.
pub fn sample_tmpp_waiting_times<R: Rng + ?Sized>(
    params: &ModelParams,
    n: usize,
    step: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    params.validate()?;
    if !(step > 0.0) {
        return domain(format!("step must be positive, got {step}"));
    }
    let arrivals = Exp::new(params.lambda).map_err(|e| Error::Domain(e.to_string()))?;
    let mut out = Vec::with_capacity(n);
    let mut now = 0.0;
    for _ in 0..n {
        let v = now + arrivals.sample(rng);
        let mut j = 0.0;
        while now < v {
            let next = (((now / step).floor() + 1.0) * step).max(now + f64::EPSILON * now);
            let next = next.min(v);
            j += sample_increment(&params.alpha, now, next, rng);
            now = next;
        }
        out.push(j);
    }
    Ok(out)
}
