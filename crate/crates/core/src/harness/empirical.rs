use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::numerics::CompensatedSum;
use crate::paths::{CountingPath, SubordinatorPath};

/// State counts of `N` sampled paths at one time.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalPmf {
    counts: BTreeMap<u64, u64>,
    n: u64,
}

impl EmpiricalPmf {
    pub fn from_states<I: IntoIterator<Item = u64>>(states: I) -> Self {
        let mut pmf = Self::default();
        for s in states {
            *pmf.counts.entry(s).or_insert(0) += 1;
            pmf.n += 1;
        }
        pmf
    }

    /// Count-wise sum of two samples.
    pub fn merge(&self, other: &Self) -> Self {
        let mut counts = self.counts.clone();
        for (&k, &c) in &other.counts {
            *counts.entry(k).or_insert(0) += c;
        }
        Self {
            counts,
            n: self.n + other.n,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn count(&self, state: u64) -> u64 {
        self.counts.get(&state).copied().unwrap_or(0)
    }

    /// Observed `(state, count)` pairs in increasing state order.
    pub fn counts(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn prob(&self, state: u64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.count(state) as f64 / self.n as f64
    }

    /// `√(p̂(1 − p̂)/N)`.
    pub fn std_error(&self, state: u64) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        let p = self.prob(state);
        (p * (1.0 - p) / self.n as f64).sqrt()
    }

    /// Number of samples in states `>= state`.
    pub fn count_at_least(&self, state: u64) -> u64 {
        self.counts.range(state..).map(|(_, &c)| c).sum()
    }
}

/// Path states at `t` tallied into an [`EmpiricalPmf`].
pub fn empirical_pmf(paths: &[CountingPath], t: f64) -> Result<EmpiricalPmf> {
    if paths.is_empty() {
        return domain("empirical pmf needs at least one path");
    }
    if !(t >= 0.0) {
        return domain(format!("time must be nonnegative, got {t}"));
    }
    if let Some(p) = paths.iter().find(|p| p.horizon() < t) {
        return domain(format!("path horizon {} is before t={t}", p.horizon()));
    }
    Ok(EmpiricalPmf::from_states(paths.iter().map(|p| p.state_at(t))))
}

/// Paths that can be read at a time point.
pub trait PathValue {
    fn value(&self, t: f64) -> f64;
}

impl PathValue for SubordinatorPath {
    fn value(&self, t: f64) -> f64 {
        self.value_at(t)
    }
}

impl PathValue for CountingPath {
    fn value(&self, t: f64) -> f64 {
        self.state_at(t) as f64
    }
}

impl PathValue for f64 {
    fn value(&self, _t: f64) -> f64 {
        *self
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
}

impl MeanEstimate {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return domain("mean of an empty sample");
        }
        if samples.iter().all(|&x| x == samples[0]) {
            return Ok(Self {
                mean: samples[0],
                std_error: 0.0,
            });
        }
        let n = samples.len() as f64;
        let mean = samples.iter().copied().collect::<CompensatedSum>().value() / n;
        if samples.len() == 1 {
            return Ok(Self { mean, std_error: 0.0 });
        }
        let ss = samples
            .iter()
            .map(|x| (x - mean).powi(2))
            .collect::<CompensatedSum>()
            .value();
        Ok(Self {
            mean,
            std_error: (ss / (n - 1.0) / n).sqrt(),
        })
    }
}

/// Mean and standard error of `e^{−u·value(t)}` over `paths`.
pub fn empirical_laplace<P: PathValue>(paths: &[P], t: f64, u: f64) -> Result<MeanEstimate> {
    if !(u > 0.0 && u.is_finite()) {
        return domain(format!("Laplace argument must be positive, got {u}"));
    }
    let samples: Vec<f64> = paths.iter().map(|p| (-u * p.value(t)).exp()).collect();
    MeanEstimate::from_samples(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(epochs: &[f64], sizes: &[u64]) -> CountingPath {
        CountingPath::new(epochs.to_vec(), sizes.to_vec(), 2.0, false).unwrap()
    }

    #[test]
    fn trivial_pmfs() {
        let p = empirical_pmf(&[path(&[1.5], &[2])], 1.0).unwrap();
        assert_eq!((p.n(), p.count(0), p.prob(0)), (1, 1, 1.0));
        let paths = vec![path(&[0.1, 0.3], &[1, 4]); 7];
        let p = empirical_pmf(&paths, 0.0).unwrap();
        assert_eq!(p.count(0), 7);
        let p = empirical_pmf(&paths, 1.0).unwrap();
        assert_eq!(p.count(5), 7);
        assert_eq!(p.std_error(5), 0.0);
        assert!(empirical_pmf(&[], 1.0).is_err());
        assert!(empirical_pmf(&paths, 3.0).is_err());
    }

    #[test]
    fn pooling_adds_counts() {
        let a = vec![path(&[0.1], &[1]), path(&[], &[]), path(&[0.5, 0.7], &[3, 1])];
        let b = vec![path(&[0.2], &[1]), path(&[0.9], &[4])];
        let whole: Vec<_> = a.iter().chain(&b).cloned().collect();
        let merged = empirical_pmf(&a, 1.0).unwrap().merge(&empirical_pmf(&b, 1.0).unwrap());
        assert_eq!(merged, empirical_pmf(&whole, 1.0).unwrap());
        assert_eq!(merged.count(1), 2);
        assert_eq!(merged.count_at_least(2), 2);
        let counts: u64 = merged.counts().map(|(_, c)| c).sum();
        assert_eq!(counts, merged.n());
    }

    #[test]
    fn laplace_limits() {
        let values = [0.5, 1.0, 7.0, 0.0];
        let tiny = empirical_laplace(&values, 1.0, 1e-12).unwrap();
        assert!((tiny.mean - 1.0).abs() < 1e-11 && tiny.std_error < 1e-11);
        let flat = empirical_laplace(&[2.0; 10], 1.0, 0.7).unwrap();
        assert_eq!(flat.std_error, 0.0);
        assert!((flat.mean - (-1.4f64).exp()).abs() < 1e-15);
        assert!(empirical_laplace(&values, 1.0, 0.0).is_err());
        assert!(empirical_laplace::<f64>(&[], 1.0, 1.0).is_err());
    }
}
