use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::state_prob_lt;
use crate::error::{domain, numeric, Result};
use crate::format::float;
use crate::model::{ModelParams, QuadratureSpec};
use crate::numerics::StehfestWeights;

/// Raw inverted values further than this outside `[0, 1]` count as divergence.
pub const INVERSION_SLACK: f64 = 1e-3;

fn default_order() -> usize {
    14
}

/// Numerical Laplace inversion settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InversionSpec {
    GaverStehfest {
        #[serde(default = "default_order")]
        order: usize,
    },
}

impl Default for InversionSpec {
    fn default() -> Self {
        Self::GaverStehfest { order: default_order() }
    }
}

/// One inverted state probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TmppPmfValue {
    pub k: usize,
    pub t: f64,
    /// Clipped to `[0, 1]`.
    pub p: f64,
    pub raw_p: f64,
    pub order: usize,
}

/// `P(N(L(t)) = k)` by Gaver–Stehfest inversion of [`state_prob_lt`]; the
/// transform evaluations at the inversion nodes run in parallel.
pub fn tmpp_pmf(
    params: &ModelParams,
    k: usize,
    t: f64,
    inversion: &InversionSpec,
    quad: &QuadratureSpec,
) -> Result<TmppPmfValue> {
    if !(t > 0.0 && t.is_finite()) {
        return domain(format!("time must be positive, got {t}"));
    }
    let InversionSpec::GaverStehfest { order } = *inversion;
    let weights = StehfestWeights::new(order)?;
    let values = weights
        .nodes(t)?
        .into_par_iter()
        .map(|s| state_prob_lt(params, k, s, quad))
        .collect::<Result<Vec<_>>>()?;
    let raw = weights.combine(&values, t)?;
    if !(-INVERSION_SLACK..=1.0 + INVERSION_SLACK).contains(&raw) {
        return numeric(format!(
            "inversion diverged for k={k}, t={t}: raw value {raw} (order {order}); try a lower order"
        ));
    }
    let p = raw.clamp(0.0, 1.0);
    if p != raw {
        log::info!("tmpp pmf k={k} t={t}: raw {raw:e} clipped to {p}");
    }
    Ok(TmppPmfValue {
        k,
        t,
        p,
        raw_p: raw,
        order,
    })
}

/// Writes `k,t,p,raw_p,method,order` rows.
pub fn write_tmpp_pmf_csv<W: Write>(rows: &[TmppPmfValue], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "t", "p", "raw_p", "method", "order"])?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            float(r.t),
            float(r.p),
            float(r.raw_p),
            "gaver-stehfest".to_string(),
            r.order.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AlphaProfile;
    use crate::tmpp::mittag_leffler;

    #[test]
    fn zero_state_matches_mittag_leffler() {
        let p = ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap();
        let q = QuadratureSpec::default();
        for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let v = tmpp_pmf(&p, 0, t, &InversionSpec::default(), &q).unwrap();
            let exact = mittag_leffler(0.5, -t.sqrt()).unwrap();
            assert!((v.p - exact).abs() < 1e-4, "t={t}: {} vs {exact}", v.p);
        }
        let v = tmpp_pmf(&p, 0, 1.0, &InversionSpec::default(), &q).unwrap();
        assert!((v.p - 0.4276).abs() < 1e-4);
    }

    #[test]
    fn near_unit_index_approaches_poisson() {
        let q = QuadratureSpec::default();
        let dist = |a: f64| {
            let p = ModelParams::new(1.0, AlphaProfile::constant(a).unwrap()).unwrap();
            (0..4)
                .map(|k| {
                    let fact: f64 = (1..=k).map(|i| i as f64).product();
                    let poisson = (-1f64).exp() / fact;
                    (tmpp_pmf(&p, k, 1.0, &InversionSpec::default(), &q).unwrap().p - poisson).abs()
                })
                .fold(0.0, f64::max)
        };
        let (d7, d9, d95) = (dist(0.7), dist(0.9), dist(0.95));
        assert!(d7 > d9 && d9 > d95, "{d7} {d9} {d95}");
        assert!(d95 < 0.05);
    }

    #[test]
    fn rejects_bad_inputs() {
        let p = ModelParams::new(1.0, AlphaProfile::constant(0.5).unwrap()).unwrap();
        let q = QuadratureSpec::default();
        assert!(tmpp_pmf(&p, 0, 0.0, &InversionSpec::default(), &q).is_err());
        assert!(tmpp_pmf(&p, 0, 1.0, &InversionSpec::GaverStehfest { order: 15 }, &q).is_err());
    }

    #[test]
    fn csv_columns() {
        let rows = [TmppPmfValue {
            k: 0,
            t: 1.0,
            p: 0.5,
            raw_p: 0.5,
            order: 14,
        }];
        let mut buf = Vec::new();
        write_tmpp_pmf_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,t,p,raw_p,method,order\n0,1,0.5,0.5,gaver-stehfest,14\n"
        );
    }
}
