use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::model::{AlphaProfile, CumulativeIntegral};

/// Bernstein function `f(u, t)` of the time-change subordinator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BernsteinSpec {
    /// `u^{α(t)}`.
    Multistable { alpha: AlphaProfile },
    /// `u^α`, `α ∈ (0, 1]`.
    Stable { alpha: f64 },
    /// Tabulated `f(u, t)`, see [`BernsteinTable`].
    Custom {
        #[serde(skip)]
        table: Arc<BernsteinTable>,
        path: String,
    },
}

impl BernsteinSpec {
    pub fn custom(table: BernsteinTable) -> Self {
        Self::Custom {
            table: Arc::new(table),
            path: String::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Multistable { alpha } => alpha.validate(),
            Self::Stable { alpha } if !(*alpha > 0.0 && *alpha <= 1.0) => {
                domain(format!("stable index must lie in (0, 1], got {alpha}"))
            }
            Self::Stable { .. } => Ok(()),
            Self::Custom { table, path } if table.times.is_empty() => {
                domain(format!("custom Bernstein table `{path}` was never loaded"))
            }
            Self::Custom { .. } => Ok(()),
        }
    }

    /// Loads the table of a `Custom` spec read from config.
    pub fn load(self) -> Result<Self> {
        match self {
            Self::Custom { path, .. } => {
                let table = BernsteinTable::from_file(&path)?;
                Ok(Self::Custom {
                    table: Arc::new(table),
                    path,
                })
            }
            other => Ok(other),
        }
    }

    pub fn eval(&self, u: f64, t: f64) -> f64 {
        match self {
            Self::Multistable { alpha } => u.powf(alpha.eval(t)),
            Self::Stable { alpha } => u.powf(*alpha),
            Self::Custom { table, .. } => table.eval(u, t),
        }
    }

    pub fn breakpoints(&self, s: f64, t: f64) -> Vec<f64> {
        match self {
            Self::Multistable { alpha } => alpha.breakpoints(s, t),
            Self::Stable { .. } => Vec::new(),
            Self::Custom { table, .. } => table.times.iter().copied().filter(|&x| x > s && x < t).collect(),
        }
    }

    /// `x ↦ ∫_0^x f(u, τ) dτ` tabulated up to `x_max`.
    pub fn cumulative(&self, u: f64, x_max: f64) -> Result<CumulativeIntegral> {
        self.validate()?;
        if !(u > 0.0 && u.is_finite()) {
            return domain(format!("Bernstein argument must be positive, got {u}"));
        }
        let breaks = self.breakpoints(0.0, x_max + 1.0);
        match self {
            Self::Multistable { alpha } => CumulativeIntegral::bernstein(u, alpha, x_max),
            Self::Stable { alpha } => {
                let rate = u.powf(*alpha);
                CumulativeIntegral::new(move |_| rate, breaks, x_max)
            }
            Self::Custom { table, .. } => {
                if u > table.u_limit() {
                    return domain(format!(
                        "argument {u} beyond the custom table's u range (max {})",
                        table.u_limit()
                    ));
                }
                let table = Arc::clone(table);
                CumulativeIntegral::new(move |t| table.eval(u, t), breaks, x_max)
            }
        }
    }
}

/// `f(u, t)` on a lattice of times, each with its own increasing `u` grid.
///
/// Text format: blocks headed by a line `# t=<time>`, followed by `u,f` rows.
/// Blank lines and other `#` lines are ignored. Every block must start at
/// `u = 0` with `f = 0`. Values are interpolated linearly in `u` and in `t`,
/// and held constant outside the time lattice.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BernsteinTable {
    times: Vec<f64>,
    rows: Vec<Vec<(f64, f64)>>,
}

impl BernsteinTable {
    pub fn new(blocks: Vec<(f64, Vec<(f64, f64)>)>) -> Result<Self> {
        let mut blocks = blocks;
        blocks.sort_by(|a, b| a.0.total_cmp(&b.0));
        if blocks.is_empty() {
            return domain("Bernstein table has no time blocks");
        }
        if blocks.windows(2).any(|w| w[0].0 == w[1].0) {
            return domain("Bernstein table repeats a time");
        }
        for (t, rows) in &blocks {
            if !(*t >= 0.0 && t.is_finite()) {
                return domain(format!("table time must be finite and nonnegative, got {t}"));
            }
            if rows.len() < 2 {
                return domain(format!("block t={t} needs at least two rows"));
            }
            if rows[0] != (0.0, 0.0) {
                return domain(format!("block t={t} must start with u=0, f=0"));
            }
            if rows.windows(2).any(|w| !(w[1].0 > w[0].0)) {
                return domain(format!("block t={t}: u values must increase"));
            }
            if rows.iter().any(|r| !(r.1 >= 0.0 && r.1.is_finite())) {
                return domain(format!("block t={t}: f must be finite and nonnegative"));
            }
            if rows.windows(2).any(|w| w[1].1 < w[0].1) {
                return domain(format!("block t={t}: f must be nondecreasing in u"));
            }
        }
        let (times, rows) = blocks.into_iter().unzip();
        Ok(Self { times, rows })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Config(format!("Bernstein table line {}: {msg}", lineno + 1));
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("t=") {
                    let t = v.trim().parse::<f64>().map_err(|_| bad("unreadable time"))?;
                    blocks.push((t, Vec::new()));
                }
                continue;
            }
            let Some(block) = blocks.last_mut() else {
                return Err(bad("row before any `# t=` header"));
            };
            let mut parts = line.split(',').map(str::trim);
            let (Some(u), Some(f), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected two comma-separated values"));
            };
            let u = u.parse::<f64>().map_err(|_| bad("unreadable u"))?;
            let f = f.parse::<f64>().map_err(|_| bad("unreadable f"))?;
            block.1.push((u, f));
        }
        Self::new(blocks)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Largest `u` covered by every block.
    pub fn u_limit(&self) -> f64 {
        self.rows.iter().map(|r| r[r.len() - 1].0).fold(f64::INFINITY, f64::min)
    }

    fn eval_block(rows: &[(f64, f64)], u: f64) -> f64 {
        let i = rows.partition_point(|r| r.0 <= u);
        if i == 0 {
            return rows[0].1;
        }
        if i >= rows.len() {
            return rows[rows.len() - 1].1;
        }
        let (u0, f0) = rows[i - 1];
        let (u1, f1) = rows[i];
        f0 + (f1 - f0) * (u - u0) / (u1 - u0)
    }

    pub fn eval(&self, u: f64, t: f64) -> f64 {
        let i = self.times.partition_point(|&x| x <= t);
        if i == 0 {
            return Self::eval_block(&self.rows[0], u);
        }
        if i >= self.times.len() {
            return Self::eval_block(&self.rows[self.rows.len() - 1], u);
        }
        let (t0, t1) = (self.times[i - 1], self.times[i]);
        let f0 = Self::eval_block(&self.rows[i - 1], u);
        let f1 = Self::eval_block(&self.rows[i], u);
        f0 + (f1 - f0) * (t - t0) / (t1 - t0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# t=0\n0,0\n1,1\n2,1.5\n\n# t=1\n0,0\n1,1\n2,2\n";

    #[test]
    fn parse_and_interpolate() {
        let t = BernsteinTable::parse(SAMPLE).unwrap();
        assert_eq!(t.eval(1.0, 0.5), 1.0);
        assert!((t.eval(2.0, 0.5) - 1.75).abs() < 1e-15);
        assert!((t.eval(1.5, 0.0) - 1.25).abs() < 1e-15);
        assert_eq!(t.eval(2.0, 7.0), 2.0);
        assert_eq!(t.u_limit(), 2.0);
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(BernsteinTable::parse("0,0\n1,1\n").is_err());
        assert!(BernsteinTable::parse("# t=0\n0,0.1\n1,1\n").is_err());
        assert!(BernsteinTable::parse("# t=0\n0,0\n1,1\n2,0.5\n").is_err());
        assert!(BernsteinTable::parse("# t=0\n0,0\n1,-1\n").is_err());
        assert!(BernsteinTable::parse("# t=0\n0,0\n1,1,3\n").is_err());
        assert!(BernsteinTable::parse("").is_err());
    }

    #[test]
    fn custom_spec_needs_argument_in_range() {
        let spec = BernsteinSpec::custom(BernsteinTable::parse(SAMPLE).unwrap());
        assert!(spec.cumulative(1.5, 2.0).is_ok());
        assert!(spec.cumulative(3.0, 2.0).is_err());
        let unloaded: BernsteinSpec = toml::from_str("family = \"custom\"\npath = \"x.csv\"\n").unwrap();
        assert!(unloaded.validate().is_err());
    }

    #[test]
    fn stable_and_multistable_agree_for_constant_index() {
        let a = BernsteinSpec::Stable { alpha: 0.4 };
        let b = BernsteinSpec::Multistable {
            alpha: AlphaProfile::constant(0.4).unwrap(),
        };
        assert!((a.eval(3.0, 1.0) - b.eval(3.0, 2.0)).abs() < 1e-15);
        assert!(BernsteinSpec::Stable { alpha: 1.0 }.validate().is_ok());
        assert!(BernsteinSpec::Stable { alpha: 0.0 }.validate().is_err());
    }
}
