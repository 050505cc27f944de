use std::fmt;

use serde::{Deserialize, Serialize};

use super::empirical::{EmpiricalPmf, MeanEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One observed-versus-expected comparison with its z-score. Non-finite
/// z-scores serialize as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub observed: f64,
    pub expected: f64,
    pub std_error: f64,
    pub z: f64,
    /// Set for the bucket collecting states with too few expected counts.
    pub pooled: bool,
}

impl Check {
    pub fn new(label: impl Into<String>, observed: f64, expected: f64, std_error: f64) -> Self {
        let diff = observed - expected;
        let z = if std_error > 0.0 {
            diff / std_error
        } else if diff.abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY.copysign(diff)
        };
        Self {
            label: label.into(),
            observed,
            expected,
            std_error,
            z,
            pooled: false,
        }
    }

    /// Sample mean against a target, scaled by the sample standard error.
    pub fn from_estimate(label: impl Into<String>, estimate: MeanEstimate, expected: f64) -> Self {
        Self::new(label, estimate.mean, expected, estimate.std_error)
    }

    fn pooled(mut self) -> Self {
        self.pooled = true;
        self
    }
}

/// Kolmogorov–Smirnov statistic, compared to `threshold` when one is given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsCheck {
    pub label: String,
    pub statistic: f64,
    pub n_samples: usize,
    pub threshold: Option<f64>,
}

impl KsCheck {
    pub fn passes(&self) -> bool {
        self.threshold.is_none_or(|t| self.statistic <= t)
    }
}

/// A sequence required to decrease strictly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub label: String,
    pub values: Vec<f64>,
    pub decreasing: bool,
}

impl TrendCheck {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        Self {
            label: label.into(),
            values,
            decreasing,
        }
    }
}

/// Outcome of one validation suite. `pass` holds exactly when every
/// `|z| <= sigma_multiplier`, every thresholded KS statistic is within its
/// threshold and the trend, if any, decreases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub name: String,
    pub status: Status,
    pub pass: bool,
    pub n_samples: usize,
    pub sigma_multiplier: f64,
    pub max_abs_z: Option<f64>,
    pub checks: Vec<Check>,
    pub ks: Vec<KsCheck>,
    pub trend: Option<TrendCheck>,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn new(name: impl Into<String>, n_samples: usize, sigma_multiplier: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::Pass,
            pass: true,
            n_samples,
            sigma_multiplier,
            max_abs_z: None,
            checks: Vec::new(),
            ks: Vec::new(),
            trend: None,
            notes: Vec::new(),
        }
    }

    /// A report for a comparison that does not apply; it counts as passing.
    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut r = Self::new(name, 0, 0.0);
        r.status = Status::Skipped;
        r.notes.push(reason.into());
        r
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn push_check(&mut self, check: Check) {
        self.checks.push(check);
        self.refresh();
    }

    pub fn push_ks(&mut self, ks: KsCheck) {
        self.ks.push(ks);
        self.refresh();
    }

    pub fn set_trend(&mut self, trend: TrendCheck) {
        self.trend = Some(trend);
        self.refresh();
    }

    /// Per-state checks of `observed` against `expected[k] = P(state = k)` for
    /// at most `max_states` states, each with expected count `>= min_expected`.
    /// Every other state goes to one pooled bucket holding the remaining mass,
    /// including states beyond the table.
    pub fn push_pmf_checks(
        &mut self,
        label: &str,
        observed: &EmpiricalPmf,
        expected: &[f64],
        min_expected: f64,
        max_states: usize,
    ) {
        let n = observed.n() as f64;
        let mut tested_p = 0.0;
        let mut tested_count = 0u64;
        let mut tested = 0;
        for (k, &p) in expected.iter().enumerate() {
            if n * p < min_expected || tested == max_states {
                continue;
            }
            tested += 1;
            let c = observed.count(k as u64);
            tested_p += p;
            tested_count += c;
            self.push_check(Check::new(
                format!("{label} P(N={k})"),
                c as f64 / n,
                p,
                (p * (1.0 - p) / n).sqrt(),
            ));
        }
        let pool_p = (1.0 - tested_p).max(0.0);
        let pool_obs = (observed.n() - tested_count) as f64 / n;
        let any = tested > 0;
        if !any {
            self.note(format!(
                "{label}: insufficient expected counts, no state reaches {min_expected}; only the pooled bucket is compared"
            ));
        }
        if n * pool_p >= min_expected || !any {
            let se = (pool_p * (1.0 - pool_p) / n).sqrt();
            self.push_check(Check::new(format!("{label} pooled rare states"), pool_obs, pool_p, se).pooled());
        } else {
            self.note(format!(
                "{label}: pooled bucket expected count {:.2} is below {min_expected}; not tested",
                n * pool_p
            ));
        }
    }

    /// Two independent samples of one law, state by state, with rare states
    /// pooled by their combined frequency.
    pub fn push_two_sample_pmf_checks(
        &mut self,
        label: &str,
        a: &EmpiricalPmf,
        b: &EmpiricalPmf,
        min_expected: f64,
        max_states: usize,
    ) {
        let (na, nb) = (a.n() as f64, b.n() as f64);
        let joint = a.merge(b);
        let total = joint.n() as f64;
        let (mut ca_pool, mut cb_pool) = (a.n(), b.n());
        let mut tested = 0;
        for (k, c) in joint.counts() {
            let p = c as f64 / total;
            if na.min(nb) * p < min_expected || tested == max_states {
                continue;
            }
            tested += 1;
            let (ca, cb) = (a.count(k), b.count(k));
            ca_pool -= ca;
            cb_pool -= cb;
            let se = (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
            self.push_check(Check::new(
                format!("{label} P(N={k})"),
                ca as f64 / na,
                cb as f64 / nb,
                se,
            ));
        }
        let p = (ca_pool + cb_pool) as f64 / total;
        if na.min(nb) * p >= min_expected {
            let se = (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
            self.push_check(
                Check::new(
                    format!("{label} pooled rare states"),
                    ca_pool as f64 / na,
                    cb_pool as f64 / nb,
                    se,
                )
                .pooled(),
            );
        }
    }

    fn refresh(&mut self) {
        if self.status == Status::Skipped {
            return;
        }
        self.max_abs_z = self.checks.iter().map(|c| c.z.abs()).reduce(f64::max);
        let z_ok = self.max_abs_z.is_none_or(|z| z <= self.sigma_multiplier);
        let ks_ok = self.ks.iter().all(KsCheck::passes);
        let trend_ok = self.trend.as_ref().is_none_or(|t| t.decreasing);
        self.pass = z_ok && ks_ok && trend_ok;
        self.status = if self.pass { Status::Pass } else { Status::Fail };
    }
}

fn fmt_num(x: f64) -> String {
    if x == 0.0 || (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.6}")
    } else {
        format!("{x:.4e}")
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        };
        writeln!(
            f,
            "== {} [{status}] N={} sigma={}",
            self.name, self.n_samples, self.sigma_multiplier
        )?;
        if !self.checks.is_empty() {
            let width = self.checks.iter().map(|c| c.label.len()).max().unwrap_or(0).max(5);
            writeln!(
                f,
                "  {:<width$}  {:>12}  {:>12}  {:>12}  {:>8}",
                "check", "observed", "expected", "std_error", "z"
            )?;
            for c in &self.checks {
                writeln!(
                    f,
                    "  {:<width$}  {:>12}  {:>12}  {:>12}  {:>8.3}",
                    c.label,
                    fmt_num(c.observed),
                    fmt_num(c.expected),
                    fmt_num(c.std_error),
                    c.z
                )?;
            }
            if let Some(z) = self.max_abs_z {
                writeln!(f, "  max |z| = {z:.3}")?;
            }
        }
        if !self.ks.is_empty() {
            let width = self.ks.iter().map(|k| k.label.len()).max().unwrap_or(0).max(2);
            writeln!(f, "  {:<width$}  {:>12}  {:>12}", "ks", "statistic", "threshold")?;
            for k in &self.ks {
                let t = k.threshold.map_or("-".to_string(), fmt_num);
                writeln!(f, "  {:<width$}  {:>12}  {:>12}", k.label, fmt_num(k.statistic), t)?;
            }
        }
        if let Some(t) = &self.trend {
            let vals: Vec<String> = t.values.iter().map(|v| fmt_num(*v)).collect();
            writeln!(
                f,
                "  trend {}: [{}] decreasing={}",
                t.label,
                vals.join(", "),
                t.decreasing
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
