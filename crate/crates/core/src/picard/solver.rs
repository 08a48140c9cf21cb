use serde::{Deserialize, Serialize};

use super::nonlinearity::{local_window, NonlinearitySpec, Sign};
use crate::error::{Error, Result};
use crate::grid::{GridFunction, EXP_LIMIT};
use crate::heat::{HeatPropagator, SemigroupMethod};
use crate::orlicz::{lebesgue_norm, luxemburg_norm, DEFAULT_TOL};

/// Norms recorded for every accepted state.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LedgerSpec {
    /// Lebesgue exponents (finite) besides the nonlinearity's `p`.
    pub lq: Vec<f64>,
    /// Exponent of the Luxemburg norm column, if wanted.
    pub orlicz_p: Option<f64>,
    /// `(a, σ)` for the weighted column `t^σ‖u‖_a`.
    pub weighted: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Largest window length.
    pub dt: f64,
    /// First window tried; defaults to `dt`.
    pub dt_initial: Option<f64>,
    /// Factor by which the window grows back after an accepted step.
    pub dt_growth: f64,
    pub substeps: usize,
    pub picard_tol: f64,
    pub picard_max_iter: usize,
    /// Sup-norm ceiling; defaults to `10³‖u₀‖_∞`, lowered to the level the
    /// nonlinearity can reach before windows fall under `dt_min`.
    pub blowup_cap: Option<f64>,
    pub dt_min: f64,
    /// Reject windows whose relative sup-norm change exceeds this.
    pub max_growth: Option<f64>,
    /// Shrink windows to the local existence time of the current state.
    pub cap_by_local_window: bool,
    pub ledger: LedgerSpec,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-2,
            dt_initial: None,
            dt_growth: 2.0,
            substeps: 4,
            picard_tol: 1e-10,
            picard_max_iter: 60,
            blowup_cap: None,
            dt_min: 1e-12,
            max_growth: None,
            cap_by_local_window: true,
            ledger: LedgerSpec::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.dt_min > 0.0 && self.dt > self.dt_min && self.dt.is_finite()) {
            bad.push(format!("need dt > dt_min > 0, got dt = {}, dt_min = {}", self.dt, self.dt_min));
        }
        if let Some(d0) = self.dt_initial {
            if !(d0 > 0.0 && d0 <= self.dt) {
                bad.push(format!("dt_initial = {d0} must lie in (0, dt]"));
            }
        }
        if !(self.dt_growth >= 1.0) {
            bad.push(format!("dt_growth = {} must be >= 1", self.dt_growth));
        }
        if self.substeps < 2 {
            bad.push(format!("substeps = {} must be >= 2", self.substeps));
        }
        if !(self.picard_tol > 0.0) {
            bad.push(format!("picard_tol = {} must be positive", self.picard_tol));
        }
        if self.picard_max_iter == 0 {
            bad.push("picard_max_iter must be positive".into());
        }
        if let Some(c) = self.blowup_cap {
            if !(c > 0.0) {
                bad.push(format!("blowup_cap = {c} must be positive"));
            }
        }
        if let Some(g) = self.max_growth {
            if !(g > 0.0) {
                bad.push(format!("max_growth = {g} must be positive"));
            }
        }
        let exps = self.ledger.lq.iter().chain(self.ledger.orlicz_p.iter());
        for q in exps {
            if !(*q >= 1.0 && q.is_finite()) {
                bad.push(format!("ledger exponent {q} must be finite and >= 1"));
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(bad))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PicardStep {
    #[serde(skip)]
    pub u_next: GridFunction,
    pub iterations: usize,
    pub contraction_factor: f64,
    /// Final iterate distance in the sup norm.
    pub distance: f64,
}

/// One window of the Duhamel fixed point
/// `v(τ) = e^{τΔ}u_n + ∫₀^τ e^{(τ-s)Δ} f(v(s)) ds`, with the integral
/// discretised by the trapezoid rule on `substeps` equal subintervals.
pub fn picard_step(
    u_n: &GridFunction,
    window: f64,
    f: &NonlinearitySpec,
    cfg: &SolverConfig,
    prop: &HeatPropagator,
) -> Result<PicardStep> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::DomainError(format!("window must be positive, got {window}")));
    }
    let s = cfg.substeps;
    let delta = window / s as f64;
    let spec = *prop.spec();
    let base: Vec<GridFunction> = (0..=s)
        .map(|k| if k == 0 { Ok(u_n.clone()) } else { prop.apply(u_n, k as f64 * delta) })
        .collect::<Result<_>>()?;
    let mut nodes: Vec<Vec<f64>> = base.iter().map(|b| b.values().to_vec()).collect();
    let eval_f = |v: &[f64]| -> Result<Vec<f64>> {
        v.iter().map(|x| f.eval(*x).ok_or(Error::OverflowDiverged { limit: EXP_LIMIT })).collect()
    };
    let mut forces: Vec<Vec<f64>> = nodes.iter().map(|v| eval_f(v)).collect::<Result<_>>()?;

    let mut prev_dist = f64::INFINITY;
    let mut ratio = 0.0;
    let mut rising = 0;
    for iter in 1..=cfg.picard_max_iter {
        let mut acc = vec![0.0; spec.len()];
        let mut dist: f64 = 0.0;
        let mut scale: f64 = 1.0;
        let mut next = Vec::with_capacity(s + 1);
        next.push(nodes[0].clone());
        for k in 1..=s {
            let w = if k == 1 { 0.5 * delta } else { delta };
            for (a, fv) in acc.iter_mut().zip(&forces[k - 1]) {
                *a += w * fv;
            }
            acc = prop.apply(&GridFunction::new(spec, acc)?, delta)?.into_values();
            let v: Vec<f64> = base[k]
                .values()
                .iter()
                .zip(&acc)
                .zip(&forces[k])
                .map(|((b, a), fv)| b + a + 0.5 * delta * fv)
                .collect();
            for (x, y) in v.iter().zip(&nodes[k]) {
                dist = dist.max((x - y).abs());
                scale = scale.max(x.abs());
            }
            next.push(v);
        }
        if next.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::OverflowDiverged { limit: EXP_LIMIT });
        }
        nodes = next;
        if iter > 1 {
            ratio = if prev_dist > 0.0 { dist / prev_dist } else { 0.0 };
            rising = if dist > prev_dist { rising + 1 } else { 0 };
            if rising >= 3 {
                return Err(Error::NoContraction { iterations: iter });
            }
        }
        if dist <= cfg.picard_tol * scale {
            let u_next = GridFunction::new(spec, nodes.pop().expect("window has nodes"))?;
            return Ok(PicardStep { u_next, iterations: iter, contraction_factor: ratio, distance: dist });
        }
        prev_dist = dist;
        forces = nodes.iter().map(|v| eval_f(v)).collect::<Result<_>>()?;
    }
    Err(Error::IterLimit { iterations: cfg.picard_max_iter, distance: prev_dist })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub t: f64,
    pub sup: f64,
    /// `‖u‖_p` for the nonlinearity's exponent.
    pub lp: f64,
    /// Same order as `LedgerSpec::lq`.
    pub lq: Vec<f64>,
    pub orlicz: Option<f64>,
    pub weighted: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Completed,
    BlewUp { t_max: f64 },
    Stalled,
}

/// Window statistics of an accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t_end: f64,
    pub window: f64,
    pub iterations: usize,
    pub contraction_factor: f64,
    /// `2 C window e^{λM^p}` for the local-existence radius of the start state.
    pub window_factor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<GridFunction>,
    pub ledger: Vec<LedgerEntry>,
    pub steps: Vec<StepRecord>,
    pub status: Status,
    pub f: NonlinearitySpec,
    pub ledger_spec: LedgerSpec,
    /// Ceiling actually used for blow-up detection.
    pub cap: f64,
    /// Rejected windows, by reason.
    pub rejections: Rejections,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejections {
    pub no_contraction: usize,
    pub iter_limit: usize,
    pub overflow: usize,
    pub growth: usize,
}

impl Trajectory {
    /// Column of `‖u‖_q` for a ledger exponent.
    pub fn lq_series(&self, q: f64) -> Option<Vec<f64>> {
        let idx = self.ledger_spec.lq.iter().position(|x| *x == q)?;
        Some(self.ledger.iter().map(|e| e.lq[idx]).collect())
    }

    pub fn t_max(&self) -> Option<f64> {
        match self.status {
            Status::BlewUp { t_max } => Some(t_max),
            _ => None,
        }
    }

    pub fn final_state(&self) -> &GridFunction {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// State recorded at exactly time `t`, if any.
    pub fn state_at(&self, t: f64) -> Option<&GridFunction> {
        self.times.iter().position(|s| *s == t).map(|i| &self.states[i])
    }
}

pub(crate) fn ledger_entry(u: &GridFunction, t: f64, f: &NonlinearitySpec, spec: &LedgerSpec) -> Result<LedgerEntry> {
    let lp = lebesgue_norm(u, f.p)?;
    let lq = spec.lq.iter().map(|q| lebesgue_norm(u, *q)).collect::<Result<Vec<_>>>()?;
    let orlicz = match spec.orlicz_p {
        Some(_) if u.is_zero() => Some(0.0),
        Some(p) => Some(luxemburg_norm(u, p, DEFAULT_TOL)?.value),
        None => None,
    };
    let weighted = match spec.weighted {
        Some((a, sigma)) => Some(t.powf(sigma) * lebesgue_norm(u, a)?),
        None => None,
    };
    Ok(LedgerEntry { t, sup: u.sup_norm(), lp, lq, orlicz, weighted })
}

/// Default ceiling: `10³‖u₀‖_∞`, but no higher than the level `U` with
/// `λU^p = 0.75 log(1/dt_min)`; above it the time left before blow-up is
/// shorter than any admissible window.
pub fn default_cap(u0_sup: f64, f: &NonlinearitySpec, dt_min: f64) -> f64 {
    let reachable = (0.75 * (1.0 / dt_min).ln() / f.lambda).powf(1.0 / f.p);
    (1e3 * u0_sup).min(reachable)
}

/// Runs windows until `t_end`, blow-up, or stall.
pub fn solve(
    u0: &GridFunction,
    f: &NonlinearitySpec,
    cfg: &SolverConfig,
    t_end: f64,
    method: SemigroupMethod,
) -> Result<Trajectory> {
    let prop = HeatPropagator::new(*u0.spec(), method)?;
    solve_with(u0, f, cfg, t_end, &prop)
}

pub fn solve_with(
    u0: &GridFunction,
    f: &NonlinearitySpec,
    cfg: &SolverConfig,
    t_end: f64,
    prop: &HeatPropagator,
) -> Result<Trajectory> {
    f.validate()?;
    cfg.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::DomainError(format!("t_end must be positive, got {t_end}")));
    }
    let cap = cfg.blowup_cap.unwrap_or_else(|| default_cap(u0.sup_norm(), f, cfg.dt_min));
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u0.clone()],
        ledger: vec![ledger_entry(u0, 0.0, f, &cfg.ledger)?],
        steps: Vec::new(),
        status: Status::Stalled,
        f: *f,
        ledger_spec: cfg.ledger.clone(),
        cap,
        rejections: Rejections::default(),
    };
    let mut t = 0.0;
    let mut dt = cfg.dt_initial.unwrap_or(cfg.dt);
    let mut u = u0.clone();
    let mut entry = traj.ledger[0].clone();
    loop {
        let remaining = t_end - t;
        if remaining <= 1e-12 * t_end {
            traj.status = Status::Completed;
            break;
        }
        let (m, local) = if entry.lp + entry.sup > 0.0 {
            local_window(entry.lp, entry.sup, f)?
        } else {
            (0.0, f64::INFINITY)
        };
        let mut window = dt.min(remaining);
        if cfg.cap_by_local_window && f.sign != Sign::Off {
            window = window.min(local);
        }
        if window < cfg.dt_min {
            traj.status = if u.sup_norm() >= cap { blown(&traj) } else { Status::Stalled };
            break;
        }
        let step = match picard_step(&u, window, f, cfg, prop) {
            Ok(s) => s,
            Err(e) => {
                match e {
                    Error::NoContraction { .. } => traj.rejections.no_contraction += 1,
                    Error::IterLimit { .. } => traj.rejections.iter_limit += 1,
                    Error::OverflowDiverged { .. } => traj.rejections.overflow += 1,
                    other => return Err(other),
                }
                dt = 0.5 * window;
                continue;
            }
        };
        if let Some(g) = cfg.max_growth {
            let change = step.u_next.sub(&u)?.sup_norm();
            if change > g * u.sup_norm().max(f64::MIN_POSITIVE) {
                traj.rejections.growth += 1;
                dt = 0.5 * window;
                continue;
            }
        }
        t = if window == remaining { t_end } else { t + window };
        u = step.u_next;
        entry = ledger_entry(&u, t, f, &cfg.ledger)?;
        let window_factor = 2.0 * f.c_lip * window * (f.lambda * m.powf(f.p)).exp();
        traj.steps.push(StepRecord {
            t_end: t,
            window,
            iterations: step.iterations,
            contraction_factor: step.contraction_factor,
            window_factor,
        });
        traj.times.push(t);
        traj.states.push(u.clone());
        traj.ledger.push(entry.clone());
        if entry.sup >= cap {
            traj.status = blown(&traj);
            break;
        }
        dt = (window * cfg.dt_growth).min(cfg.dt);
    }
    Ok(traj)
}

/// `BlewUp` with the last time plus the geometric series continuing the
/// most recent windows.
fn blown(traj: &Trajectory) -> Status {
    let t = *traj.times.last().expect("non-empty");
    let w: Vec<f64> = traj.steps.iter().rev().take(6).map(|s| s.window).collect();
    let mut tail = 0.0;
    if w.len() >= 3 {
        // least-squares slope of log w_k against k
        let xs: Vec<f64> = (0..w.len()).map(|k| -(k as f64)).collect();
        let ys: Vec<f64> = w.iter().map(|x| x.ln()).collect();
        let (slope, _) = crate::analysis::fit::linear_fit(&xs, &ys);
        let q = slope.exp();
        if q < 1.0 {
            tail = w[0] * q / (1.0 - q);
        }
    }
    Status::BlewUp { t_max: t + tail }
}
