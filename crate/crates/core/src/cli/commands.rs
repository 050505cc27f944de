use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{RunConfig, TransitionMethod, UpcrossingMethod};
use crate::error::{Error, Result};
use crate::format::float;
use crate::harness::{run_suite, ComparisonReport, Suite};
use crate::model::lambda_alpha_integral;
use crate::paths::{sample_multistable_path, sample_smpp_path, sample_tmpp_path, RngSpec};
use crate::smpp::{
    default_fft_size, epoch_density, smpp_series_pmf, smpp_transition_pmf, upcrossing_survival_derivative,
    upcrossing_survival_integral, SeriesValue,
};
use crate::tmpp::{tmpp_pmf, waiting_time_lt_general, write_tmpp_pmf_csv, BernsteinSpec};

/// Sampled path families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulateKind {
    HPath,
    LPath,
    Smpp,
    Tmpp,
}

impl SimulateKind {
    fn file_stem(self) -> &'static str {
        match self {
            Self::HPath => "h_path",
            Self::LPath => "l_path",
            Self::Smpp => "smpp_path",
            Self::Tmpp => "tmpp_path",
        }
    }
}

/// CSV tables computed from the evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Pmf,
    Transition,
    Epochs,
    Upcrossing,
    TmppPmf,
    WaitingLt,
}

impl TableKind {
    pub fn file_name(self) -> &'static str {
        match self {
            Self::Pmf => "pmf.csv",
            Self::Transition => "transition.csv",
            Self::Epochs => "epochs.csv",
            Self::Upcrossing => "upcrossing.csv",
            Self::TmppPmf => "tmpp_pmf.csv",
            Self::WaitingLt => "waiting_lt.csv",
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// Writes one CSV file per path, `<kind>_<stream>.csv`, for streams
/// `0..n_paths`; paths are sampled in parallel and written in stream order.
pub fn simulate(cfg: &RunConfig, kind: SimulateKind, n_paths: usize, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let model = &cfg.model;
    let horizon = cfg.simulate.horizon;
    let files: Vec<Vec<u8>> = (0..n_paths as u64)
        .into_par_iter()
        .map(|stream| {
            let rng = RngSpec::new(cfg.seed, stream);
            let mut buf = Vec::new();
            match kind {
                SimulateKind::HPath => sample_multistable_path(model, &cfg.grid, rng)?.write_csv(&mut buf)?,
                SimulateKind::LPath => sample_multistable_path(model, &cfg.grid, rng)?.write_inverse_csv(&mut buf)?,
                SimulateKind::Smpp => sample_smpp_path(model, horizon, rng)?.write_csv(&mut buf)?,
                SimulateKind::Tmpp => {
                    let path = sample_tmpp_path(model, &cfg.grid, horizon, rng)?;
                    if path.truncated() {
                        log::warn!("stream {stream}: H stayed below {horizon} on the grid; raise grid.t_max");
                    }
                    path.write_csv(&mut buf)?
                }
            }
            Ok(buf)
        })
        .collect::<Result<_>>()?;
    let mut written = Vec::with_capacity(files.len());
    for (stream, bytes) in files.iter().enumerate() {
        let path = out_dir.join(format!("{}_{stream:05}.csv", kind.file_stem()));
        let mut f = create(&path)?;
        f.write_all(bytes)?;
        f.flush()?;
        written.push(path);
    }
    Ok(written)
}

fn fft_size(cfg: &RunConfig) -> usize {
    cfg.fft.size.unwrap_or_else(|| default_fft_size(cfg.evaluate.k_max))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, float)
}

/// Computes one table and writes it as CSV.
pub fn write_table<W: Write>(cfg: &RunConfig, kind: TableKind, out: W) -> Result<()> {
    let model = &cfg.model;
    let quad = &cfg.quadrature;
    let ev = &cfg.evaluate;
    let mut w = csv::Writer::from_writer(out);
    match kind {
        TableKind::Pmf => {
            w.write_record(["t", "k", "p", "method", "fft_size"])?;
            let size = fft_size(cfg);
            for &t in &ev.times {
                let table = smpp_transition_pmf(model, 0.0, t, ev.k_max, size, quad)
                    .map_err(|e| e.at(format!("t={}", float(t))))?;
                for (k, p) in table.probs.iter().enumerate() {
                    w.write_record([float(t), k.to_string(), float(*p), "fft".into(), size.to_string()])?;
                }
            }
        }
        TableKind::Transition => {
            w.write_record(["tau", "t", "k", "fft", "series", "series_error"])?;
            let tau = ev.tau;
            for &t in &ev.times {
                let fft = if ev.transition_methods.contains(&TransitionMethod::Fft) {
                    let table = smpp_transition_pmf(model, tau, t, ev.k_max, fft_size(cfg), quad)
                        .map_err(|e| e.at(format!("tau={}, t={}", float(tau), float(t))))?;
                    Some(table.probs)
                } else {
                    None
                };
                for k in 0..=ev.k_max {
                    let series = if !ev.transition_methods.contains(&TransitionMethod::Series) {
                        None
                    } else if k == 0 {
                        // the series starts at n = 1; p_0 = exp(−Λ(τ, τ+t)) exactly
                        let big_lambda = lambda_alpha_integral(model, tau, tau + t, quad)?;
                        Some(SeriesValue {
                            value: (-big_lambda).exp(),
                            error_estimate: 0.0,
                        })
                    } else {
                        let v = smpp_series_pmf(model, tau, t, k, &cfg.series, quad)
                            .map_err(|e| e.at(format!("tau={}, t={}, k={k}", float(tau), float(t))))?;
                        Some(v)
                    };
                    w.write_record([
                        float(tau),
                        float(t),
                        k.to_string(),
                        opt(fft.as_ref().map(|p| p[k])),
                        opt(series.map(|s| s.value)),
                        opt(series.map(|s| s.error_estimate)),
                    ])?;
                }
            }
        }
        TableKind::Epochs => {
            w.write_record(["j", "t", "density"])?;
            for &j in &ev.epoch_indices {
                for &t in &ev.times {
                    let d = epoch_density(model, j, t, quad).map_err(|e| e.at(format!("j={j}, t={}", float(t))))?;
                    w.write_record([j.to_string(), float(t), float(d)])?;
                }
            }
        }
        TableKind::Upcrossing => {
            w.write_record(["k", "t", "derivative", "integral", "difference"])?;
            let methods = &ev.upcrossing_methods;
            for &k in &ev.upcrossing_levels {
                for &t in &ev.times {
                    let cell = |e: Error| e.at(format!("k={k}, t={}", float(t)));
                    let d = if methods.contains(&UpcrossingMethod::Derivative) {
                        Some(upcrossing_survival_derivative(model, k, t, quad).map_err(cell)?)
                    } else {
                        None
                    };
                    let i = if methods.contains(&UpcrossingMethod::Integral) {
                        Some(upcrossing_survival_integral(model, k, t, quad).map_err(cell)?)
                    } else {
                        None
                    };
                    let diff = d.zip(i).map(|(d, i)| (d - i).abs());
                    w.write_record([k.to_string(), float(t), opt(d), opt(i), opt(diff)])?;
                }
            }
        }
        TableKind::TmppPmf => {
            let mut rows = Vec::new();
            for &t in &ev.times {
                for k in 0..=ev.k_max {
                    rows.push(
                        tmpp_pmf(model, k, t, &cfg.inversion, quad)
                            .map_err(|e| e.at(format!("k={k}, t={}", float(t))))?,
                    );
                }
            }
            return write_tmpp_pmf_csv(&rows, w.into_inner().map_err(|e| Error::Io(e.into_error()))?);
        }
        TableKind::WaitingLt => {
            w.write_record(["n", "eta", "value", "bernstein"])?;
            let spec = match &ev.bernstein {
                Some(b) => b.clone().load()?,
                None => BernsteinSpec::Multistable {
                    alpha: model.alpha.clone(),
                },
            };
            let family = match spec {
                BernsteinSpec::Multistable { .. } => "multistable",
                BernsteinSpec::Stable { .. } => "stable",
                BernsteinSpec::Custom { .. } => "custom",
            };
            for &n in &ev.waiting_indices {
                for &eta in &ev.etas {
                    let v = waiting_time_lt_general(&spec, model.lambda, n, eta, quad)
                        .map_err(|e| e.at(format!("n={n}, eta={}", float(eta))))?;
                    w.write_record([n.to_string(), float(eta), float(v), family.to_string()])?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `kind` to `<out_dir>/<file name>` and returns the path.
pub fn write_table_file(cfg: &RunConfig, kind: TableKind, out_dir: &Path) -> Result<PathBuf> {
    let mut buf = Vec::new();
    write_table(cfg, kind, &mut buf)?;
    let path = out_dir.join(kind.file_name());
    let mut f = create(&path)?;
    f.write_all(&buf)?;
    f.flush()?;
    Ok(path)
}

/// Runs a validation suite and writes `report_<name>.json` and `.txt` per report.
pub fn validate(cfg: &RunConfig, suite: Suite, out_dir: &Path) -> Result<Vec<ComparisonReport>> {
    let reports = run_suite(suite, &cfg.model, &cfg.validate, cfg.seed, &cfg.quadrature)?;
    for r in &reports {
        let mut json = serde_json::to_string_pretty(r)?;
        json.push('\n');
        let mut f = create(&out_dir.join(format!("report_{}.json", r.name)))?;
        f.write_all(json.as_bytes())?;
        f.flush()?;
        let mut f = create(&out_dir.join(format!("report_{}.txt", r.name)))?;
        write!(f, "{r}")?;
        f.flush()?;
    }
    Ok(reports)
}
