use serde::Serialize;

use super::solver::{Status, Trajectory};
use crate::analysis::fit::{linear_fit, log_log_slope, rms_residual};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::heat::HeatPropagator;
use crate::orlicz::{luxemburg_norm, DEFAULT_TOL};

/// Minimum number of samples in the last tenth of `[0, T_max]`.
pub const MIN_TAIL: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupFit {
    pub c1: f64,
    pub c2: f64,
    pub residual: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Fits `y = λ(‖u‖_p + ‖u‖_∞)^p` against `|log(T_max - t)|` on the tail
/// `T_max - t < T_max/10`. `C2` is the intercept lowered by the largest
/// negative residual, so the lower bound holds at every tail sample.
pub fn blowup_rate_fit(traj: &Trajectory, lambda: f64, p: f64) -> Result<BlowupFit> {
    let t_max = match traj.status {
        Status::BlewUp { t_max } => t_max,
        _ => return Err(Error::InsufficientTail { have: 0, need: MIN_TAIL }),
    };
    let (times, ys): (Vec<f64>, Vec<f64>) = traj
        .ledger
        .iter()
        .map(|e| (e.t, lambda * (e.lp + e.sup).powf(p)))
        .unzip();
    fit_log_rate(&times, &ys, t_max)
}

/// The rate fit on raw samples.
pub fn fit_log_rate(times: &[f64], ys: &[f64], t_max: f64) -> Result<BlowupFit> {
    let (xs, tail_y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(ys)
        .filter(|(t, _)| **t > 0.0 && t_max - **t > 0.0 && t_max - **t < 0.1 * t_max)
        .map(|(t, y)| ((t_max - t).ln().abs(), *y))
        .unzip();
    if xs.len() < MIN_TAIL {
        return Err(Error::InsufficientTail { have: xs.len(), need: MIN_TAIL });
    }
    let (c1, intercept) = linear_fit(&xs, &tail_y);
    let residual = rms_residual(&xs, &tail_y, c1, intercept);
    let slack = xs
        .iter()
        .zip(&tail_y)
        .map(|(x, y)| y - c1 * x - intercept)
        .fold(0.0f64, f64::min);
    let c2 = intercept + slack;
    let holds = xs.iter().zip(&tail_y).all(|(x, y)| *y >= c1 * x + c2 - 1e-12 * y.abs());
    Ok(BlowupFit { c1, c2, residual, samples: xs.len(), pass: c1 > 0.0 && holds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySummary {
    /// `sup_{t ≥ t_floor} t^σ‖u(t)‖_a` over the samples.
    pub sup_value: f64,
    /// Slope of `log‖u‖_a` against `log t` over the last decade.
    pub slope: f64,
    /// Largest `w(t_j) / min_{i<j} w(t_i)` for `w = t^σ‖u‖_a`, `t ≥ t_floor`;
    /// 1 for a non-increasing sequence.
    pub max_rebound: f64,
    pub pass: bool,
}

pub fn decay_supremum(traj: &Trajectory, a: f64, sigma: f64, t_floor: f64) -> Result<DecaySummary> {
    if traj.status != Status::Completed {
        return Err(Error::PreconditionViolated(format!("decay needs a completed run, got {:?}", traj.status)));
    }
    if !(t_floor > 0.0) {
        return Err(Error::DomainError(format!("t_floor must be positive, got {t_floor}")));
    }
    let norms = traj
        .lq_series(a)
        .ok_or_else(|| Error::PreconditionViolated(format!("ledger has no L^{a} column")))?;
    decay_of_series(&traj.times, &norms, sigma, t_floor)
}

pub fn decay_of_series(times: &[f64], norms: &[f64], sigma: f64, t_floor: f64) -> Result<DecaySummary> {
    let t_last = times.last().copied().unwrap_or(0.0);
    if t_last <= t_floor {
        return Err(Error::PreconditionViolated(format!("run ends at {t_last}, before t_floor = {t_floor}")));
    }
    let weighted: Vec<f64> = times
        .iter()
        .zip(norms)
        .filter(|(t, _)| **t >= t_floor)
        .map(|(t, n)| t.powf(sigma) * n)
        .collect();
    let sup_value = weighted.iter().copied().fold(0.0, f64::max);
    let mut running_min = f64::INFINITY;
    let mut max_rebound: f64 = 1.0;
    for w in &weighted {
        if running_min.is_finite() && running_min > 0.0 {
            max_rebound = max_rebound.max(w / running_min);
        }
        running_min = running_min.min(*w);
    }
    let (ts, ns): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(norms)
        .filter(|(t, n)| **t >= 0.1 * t_last && **n > 0.0)
        .map(|(t, n)| (*t, *n))
        .unzip();
    let slope = if ts.len() >= 2 { log_log_slope(&ts, &ns) } else { f64::NAN };
    let pass = sup_value.is_finite() && slope <= -sigma + 0.05;
    Ok(DecaySummary { sup_value, slope, max_rebound, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialLayer {
    pub times: Vec<f64>,
    /// `‖u(t) - e^{tΔ}u₀‖_{exp L^p}`.
    pub values: Vec<f64>,
    pub c1: f64,
    pub c2: f64,
    /// `1 - N/(2q)`.
    pub exponent: f64,
    pub monotone: bool,
    pub envelope_holds: bool,
    pub pass: bool,
}

/// Distance to the free evolution on the samples in `(0, 0.1]`, with the
/// envelope `C₁t + C₂t^{1-N/2q}` solved from the two earliest samples.
pub fn initial_layer_check(
    traj: &Trajectory,
    u0: &GridFunction,
    p: f64,
    q: f64,
    prop: &HeatPropagator,
) -> Result<InitialLayer> {
    let dim = u0.spec().dim() as f64;
    if !(q >= p.max(0.5 * dim)) {
        return Err(Error::PreconditionViolated(format!("q = {q} must be >= max(p, N/2)")));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (t, state) in traj.times.iter().zip(&traj.states) {
        if *t > 0.0 && *t <= 0.1 {
            let free = prop.apply(u0, *t)?;
            let d = state.sub(&free)?;
            let v = if d.is_zero() { 0.0 } else { luxemburg_norm(&d, p, DEFAULT_TOL)?.value };
            times.push(*t);
            values.push(v);
        }
    }
    if times.len() < 8 {
        return Err(Error::PreconditionViolated(format!("{} samples in (0, 0.1], need 8", times.len())));
    }
    let beta = 1.0 - dim / (2.0 * q);
    let monotone = values.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9));
    let (c1, c2) = envelope(times[0], values[0], times[1], values[1], beta);
    let envelope_holds = times
        .iter()
        .zip(&values)
        .skip(2)
        .all(|(t, v)| *v <= (c1 * t + c2 * t.powf(beta)) * (1.0 + 1e-6) + 1e-14);
    Ok(InitialLayer {
        pass: monotone && envelope_holds,
        times,
        values,
        c1,
        c2,
        exponent: beta,
        monotone,
        envelope_holds,
    })
}

// Solves c1 t + c2 t^β = d at two times.
fn envelope(t1: f64, d1: f64, t2: f64, d2: f64, beta: f64) -> (f64, f64) {
    let (a, b) = (t1.powf(beta), t2.powf(beta));
    let det = t1 * b - t2 * a;
    if det == 0.0 {
        return (0.0, d1.max(d2) / a.min(b));
    }
    ((d1 * b - d2 * a) / det, (t1 * d2 - t2 * d1) / det)
}
