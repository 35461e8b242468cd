//! Error-scaling experiments and their regressions.

use rayon::prelude::*;
use serde::Serialize;

use super::evolution::{apply_method, compare, evolve, step_time};
use super::linalg::{identity, HermitianEigen};
use super::ops::OperatorSet;
use super::HarnessError;
use crate::method::Method;
use crate::scalar::Scalar;

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub method: String,
    pub dt: f64,
    pub n: usize,
    pub t: f64,
    #[serde(rename = "E_pauli")]
    pub e_pauli: Option<f64>,
    #[serde(rename = "E_frob")]
    pub e_frob: f64,
}

impl Row {
    /// The Pauli error when defined, else the Frobenius error.
    pub fn error(&self) -> f64 {
        self.e_pauli.unwrap_or(self.e_frob)
    }
}

/// How long each run of a scaling experiment lasts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Horizon {
    Steps(usize),
    /// Steps chosen so `n D dt` is as close as possible to this time.
    Time(f64),
}

/// One row per step size.
pub fn scaling_experiment<S: Scalar + Sync>(
    name: &str,
    m: &Method<S>,
    ops: &OperatorSet,
    dts: &[f64],
    horizon: Horizon,
) -> Result<Vec<Row>, HarnessError> {
    if dts.is_empty() {
        return Err(HarnessError::NoSteps);
    }
    dts.par_iter()
        .map(|&dt| {
            let n = match horizon {
                Horizon::Steps(n) => n,
                Horizon::Time(t) => ((t / step_time(m, dt)?).round() as usize).max(1),
            };
            let r = evolve(m, ops, dt, n)?;
            Ok(Row { method: name.to_string(), dt, n, t: r.t, e_pauli: r.error_pauli, e_frob: r.error_frobenius })
        })
        .collect()
}

/// Repeated application at fixed `dt`, recording every `stride`-th step up
/// to `n_max`.
pub fn trajectory<S: Scalar>(
    name: &str,
    m: &Method<S>,
    ops: &OperatorSet,
    dt: f64,
    n_max: usize,
    stride: usize,
) -> Result<Vec<Row>, HarnessError> {
    let tau = step_time(m, dt)?;
    let step = apply_method(m, ops, dt)?;
    let exact = HermitianEigen::new(&ops.hamiltonian())?;
    let stride = stride.max(1);
    let mut u = identity(ops.dim());
    let mut rows = Vec::with_capacity(n_max / stride);
    for n in 1..=n_max {
        u = &u * &step;
        if n % stride == 0 {
            let t = n as f64 * tau;
            let r = compare(u.clone(), exact.propagator(t), dt, n, t)?;
            rows.push(Row { method: name.to_string(), dt, n, t, e_pauli: r.error_pauli, e_frob: r.error_frobenius });
        }
    }
    Ok(rows)
}

/// Least-squares fit of `log y = slope log x + intercept` over positive points.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let logs: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of the upper envelope of an oscillating error curve: the maximum
/// of each of `bins` log-spaced windows over `[t_min, t_max]`, fitted on a
/// log-log scale.
pub fn envelope_slope(points: &[(f64, f64)], t_min: f64, t_max: f64, bins: usize) -> Option<f64> {
    if !(t_min > 0.0 && t_max > t_min) || bins == 0 {
        return None;
    }
    let ratio = (t_max / t_min).ln() / bins as f64;
    let edge = |k: usize| t_min * (ratio * k as f64).exp();
    let peaks: Vec<(f64, f64)> = (0..bins)
        .filter_map(|k| {
            let (lo, hi) = (edge(k), edge(k + 1));
            points
                .iter()
                .filter(|(t, _)| *t >= lo && (*t < hi || (k + 1 == bins && *t <= hi)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .copied()
        })
        .collect();
    loglog_slope(&peaks).map(|(s, _)| s)
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialize");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}
