use std::path::PathBuf;

use anyhow::{bail, Result};
use expheat_core::analysis::{contraction_budget, select_params};
use expheat_core::analysis::fit::log_log_slope;
use expheat_core::grid::write_gfn;
use expheat_core::orlicz::{lebesgue_norm, luxemburg_norm};
use expheat_core::picard::{
    blowup_rate_fit, decay_supremum, initial_layer_check, local_window, solve, solve_with, write_trajectory_csv,
    LedgerSpec, SolverConfig, Status, Trajectory,
};
use expheat_core::{GridFunction, GridSpec, HeatPropagator, RadialProfile, SemigroupMethod};

use super::{full_line, nonlinearity};
use crate::config::Keys;
use crate::report::{Outcome, Record};

type Job = Box<dyn FnOnce() -> Result<Outcome>>;

/// Reads `solver.*` keys over the given defaults.
fn solver(keys: &mut Keys, d: SolverConfig) -> Result<SolverConfig> {
    let dt_initial = keys.f64("solver.dt_initial", d.dt_initial.unwrap_or(0.0))?;
    let cap = keys.f64("solver.blowup_cap", d.blowup_cap.unwrap_or(0.0))?;
    let max_growth = keys.f64("solver.max_growth", d.max_growth.unwrap_or(0.0))?;
    let cap_by = keys.string("solver.cap_by_local_window", if d.cap_by_local_window { "yes" } else { "no" })?;
    let cfg = SolverConfig {
        dt: keys.positive("solver.dt", d.dt)?,
        dt_initial: (dt_initial > 0.0).then_some(dt_initial),
        dt_growth: keys.f64("solver.dt_growth", d.dt_growth)?,
        substeps: keys.usize("solver.substeps", d.substeps)?,
        picard_tol: keys.positive("solver.picard_tol", d.picard_tol)?,
        picard_max_iter: keys.usize("solver.picard_max_iter", d.picard_max_iter)?,
        blowup_cap: (cap > 0.0).then_some(cap),
        dt_min: keys.positive("solver.dt_min", d.dt_min)?,
        max_growth: (max_growth > 0.0).then_some(max_growth),
        cap_by_local_window: match cap_by.as_str() {
            "yes" => true,
            "no" => false,
            other => bail!("key `solver.cap_by_local_window`: expected yes or no, got `{other}`"),
        },
        ledger: d.ledger,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn gaussian(keys: &mut Keys, spec: GridSpec, amplitude: f64, s: f64) -> Result<GridFunction> {
    let amplitude = keys.positive("u0.amplitude", amplitude)?;
    let s = keys.positive("u0.s", s)?;
    Ok(GridFunction::sample(RadialProfile::Gaussian { s, amplitude }, spec)?)
}

fn export(out: &mut Outcome, traj: &Trajectory, stem: &str, every: usize) -> Result<()> {
    let mut csv = Vec::new();
    write_trajectory_csv(traj, &mut csv)?;
    out.files.push((PathBuf::from(format!("{stem}.csv")), csv));
    if every > 0 {
        let last = traj.states.len() - 1;
        for (i, u) in traj.states.iter().enumerate().filter(|(i, _)| i % every == 0 || *i == last) {
            let mut bytes = Vec::new();
            write_gfn(u, &mut bytes)?;
            out.files.push((PathBuf::from(format!("snapshots/{stem}_{i:06}.gfn")), bytes));
        }
    }
    Ok(())
}

pub fn local(keys: &mut Keys) -> Result<Job> {
    let spec = full_line(keys, 8.0, 512)?;
    let u0 = gaussian(keys, spec, 0.1, 0.25)?;
    let f = nonlinearity(keys, 3.0, 2.0, 1.0, "+")?;
    let base = SolverConfig { substeps: 8, picard_tol: 1e-8, ..Default::default() };
    let cfg = solver(keys, base)?;
    let every = keys.usize("snapshot_every", 0)?;
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let claim = "mild solution on [0, T] by contraction of the Duhamel map";
        let lp = lebesgue_norm(&u0, f.p)?;
        let (m, window) = local_window(lp, u0.sup_norm(), &f)?;
        let factor = 2.0 * f.c_lip * window * (f.lambda * m.powf(f.p)).exp();
        out.note("radius_M", m);
        out.note("window_T", window);
        out.record(Record::at_most("window_contraction_factor", factor, 1.0, claim).with_note("2 C T e^{λM^p}"));

        let coarse_cfg = SolverConfig { dt: 0.5 * window, ..cfg.clone() };
        let fine_cfg = SolverConfig { dt: 0.25 * window, substeps: 2 * cfg.substeps, ..cfg.clone() };
        let method = SemigroupMethod::LineQuadrature;
        let coarse = solve(&u0, &f, &coarse_cfg, window, method)?;
        let fine = solve(&u0, &f, &fine_cfg, window, method)?;
        out.record(Record::verdict(
            "completed",
            coarse.status == Status::Completed && fine.status == Status::Completed,
            format!("{:?} / {:?}", coarse.status, fine.status),
            claim,
        ));
        let worst = coarse.steps.iter().chain(&fine.steps).map(|s| s.contraction_factor).fold(0.0, f64::max);
        out.record(Record::at_most("max_contraction_factor", worst, 1.0 - f64::EPSILON, claim));
        let mut diff: f64 = 0.0;
        let mut common = 0;
        for (t, u) in coarse.times.iter().zip(&coarse.states).skip(1) {
            if let Some(v) = fine.state_at(*t) {
                diff = diff.max(u.sub(v)?.sup_norm());
                common += 1;
            }
        }
        out.record(
            Record::at_most("dt_halving_agreement", diff, 10.0 * cfg.picard_tol, "plumbing")
                .with_note(format!("{common} common times; oracle: half window, twice the substeps")),
        );
        export(&mut out, &coarse, "trajectory", every)?;
        export(&mut out, &fine, "trajectory_fine", 0)?;
        Ok(out)
    }))
}

pub fn blowup(keys: &mut Keys) -> Result<Job> {
    let spec = full_line(keys, 8.0, 256)?;
    let u0 = gaussian(keys, spec, 5.0, 0.25)?;
    let f = nonlinearity(keys, 3.0, 2.0, 1.0, "+")?;
    let base = SolverConfig {
        dt: 1e-15,
        substeps: 4,
        picard_tol: 1e-10,
        picard_max_iter: 100,
        dt_min: 1e-26,
        max_growth: Some(0.002),
        cap_by_local_window: false,
        ..Default::default()
    };
    let cfg = solver(keys, base)?;
    let t_end = keys.positive("t_end", 1.0)?;
    let every = keys.usize("snapshot_every", 0)?;
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let claim = "λ‖u(t)‖^p_{L^p∩L^∞} ≥ C₁|log(T_max - t)| + C₂";
        let method = SemigroupMethod::LineQuadrature;
        let a = solve(&u0, &f, &cfg, t_end, method)?;
        let half = SolverConfig { dt: 0.5 * cfg.dt, ..cfg.clone() };
        let b = solve(&u0, &f, &half, t_end, method)?;
        out.note("cap", a.cap);
        let (Some(ta), Some(tb)) = (a.t_max(), b.t_max()) else {
            out.record(Record::verdict("blew_up", false, format!("{:?} / {:?}", a.status, b.status), claim));
            export(&mut out, &a, "trajectory", every)?;
            return Ok(out);
        };
        out.record(Record::verdict("blew_up", true, format!("T_max = {ta:.6e}"), claim));
        out.note("t_max", ta);
        out.note("t_max_half_dt", tb);
        let unit = 10f64.powf(ta.log10().floor() - 1.0);
        out.record(
            Record::at_most("t_max_two_digit_stability", (ta - tb).abs(), 0.5 * unit, "plumbing")
                .with_note(format!("T_max {ta:.4e} at dt, {tb:.4e} at dt/2")),
        );
        let fit = blowup_rate_fit(&a, f.lambda, f.p)?;
        out.note("c1", fit.c1);
        out.note("c2", fit.c2);
        out.note("fit_residual", fit.residual);
        out.record(Record::verdict(
            "rate_lower_bound",
            fit.pass,
            format!("C1 = {:.4}, C2 = {:.4}, {} tail samples", fit.c1, fit.c2, fit.samples),
            claim,
        ));
        let mut tail = crate::report::Table::new("tail", &["t", "abs_log_gap", "y", "bound"]);
        for e in a.ledger.iter().filter(|e| ta - e.t > 0.0 && ta - e.t < 0.1 * ta) {
            let x = (ta - e.t).ln().abs();
            tail.push_f64(&[e.t, x, f.lambda * (e.lp + e.sup).powf(f.p), fit.c1 * x + fit.c2]);
        }
        out.tables.push(tail);
        export(&mut out, &a, "trajectory", every)?;
        Ok(out)
    }))
}

pub fn decay(keys: &mut Keys) -> Result<Job> {
    let f = nonlinearity(keys, 4.0, 4.0, 1.0, "+")?;
    let a = keys.f64("params.a", 6.0)?;
    let ps = select_params(3, f.p, f.m, a)?;
    let l = keys.positive("grid.L", 80.0)?;
    let n = keys.usize("grid.n", 2000)?;
    let spec = GridSpec::radial(3, l, n)?;
    let s = keys.positive("u0.s", 1.0)?;
    let fraction = keys.positive("u0.eps_fraction", 1.0)?;
    let base = SolverConfig {
        dt: 0.5,
        dt_initial: Some(0.01),
        dt_growth: 1.05,
        substeps: 4,
        picard_tol: 1e-10,
        ledger: LedgerSpec { lq: vec![a], orlicz_p: Some(f.p), weighted: Some((a, ps.sigma)) },
        ..Default::default()
    };
    let cfg = solver(keys, base)?;
    let t_end = keys.positive("t_end", 100.0)?;
    let every = keys.usize("snapshot_every", 0)?;
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let eps = fraction * contraction_budget(&f, 1.0, ps.q).max_epsilon;
        for c in &contraction_budget(&f, eps, ps.q).checks {
            let rec = Record::verdict(
                format!("smallness_{}", c.name),
                c.pass,
                format!("lhs = {:.6} at ε = {eps:.6}; largest admissible ε = {:.6}", c.lhs, c.max_epsilon),
                "2qλM^p ≤ 1 with M = 2ε",
            );
            out.record(if c.gating { rec } else { rec.report_only() });
        }
        let g = GridFunction::sample(RadialProfile::Gaussian { s, amplitude: 1.0 }, spec)?;
        let u0 = g.scaled(eps / luxemburg_norm(&g, f.p, 1e-12)?.value);
        out.note("epsilon", eps);
        out.note("sigma", ps.sigma);
        out.note("q", ps.q);
        let after = contraction_budget(&f, eps, ps.q);
        out.record(Record::verdict("data_within_budget", after.pass, format!("ε = {eps:.6}"), "2qλM^p ≤ 1 with M = 2ε"));

        let prop = HeatPropagator::new(spec, SemigroupMethod::Radial3D)?;
        let traj = solve_with(&u0, &f, &cfg, t_end, &prop)?;
        let claim = "‖u(t)‖_a ≤ C t^{-σ}";
        out.record(Record::verdict("completed", traj.status == Status::Completed, format!("{:?}", traj.status), claim));
        if traj.status != Status::Completed {
            export(&mut out, &traj, "trajectory", every)?;
            return Ok(out);
        }
        let d = decay_supremum(&traj, a, ps.sigma, 1.0)?;
        out.note("sup_weighted_norm", d.sup_value);
        out.record(Record::verdict("decay_bound", d.pass, format!("sup t^σ‖u‖_a = {:.6}, slope {:.4}", d.sup_value, d.slope), claim));
        out.record(Record::at_most("weighted_norm_rebound", d.max_rebound, 1.05, claim).with_note("non-increasing after t = 1 within 5%"));
        let norms = traj.lq_series(a).expect("ledger holds ‖u‖_a");
        let (ts, ns): (Vec<f64>, Vec<f64>) =
            traj.times.iter().zip(&norms).filter(|(t, _)| **t >= 0.1 * t_end).map(|(t, n)| (*t, *n)).unzip();
        let slope = log_log_slope(&ts, &ns);
        out.record(Record::at_most("late_slope", slope, -ps.sigma + 0.05, claim).with_note("log-log slope over the last decade"));

        let q = f.p.max(1.5);
        let il = initial_layer_check(&traj, &u0, f.p, q, &prop)?;
        let shrinking = il.values.windows(2).all(|w| w[0] <= w[1]);
        out.record(Record::verdict(
            "initial_layer",
            il.pass && shrinking && il.values.first().is_some_and(|v| *v < 1e-4),
            format!("d from {:.3e} to {:.3e} on {} samples; C1 = {:.3e}, C2 = {:.3e}", il.values[0], il.values[il.values.len() - 1], il.values.len(), il.c1, il.c2),
            "‖u(t) - e^{tΔ}u₀‖_{exp L^p} ≤ C₁t + C₂t^{1-N/2q} → 0",
        ));
        let mut decay = crate::report::Table::new("decay", &["t", "norm_a", "weighted"]);
        for (e, n) in traj.ledger.iter().zip(&norms) {
            decay.push_f64(&[e.t, *n, e.weighted.unwrap_or(f64::NAN)]);
        }
        let mut layer = crate::report::Table::new("initial_layer", &["t", "distance", "envelope"]);
        for (t, v) in il.times.iter().zip(&il.values) {
            layer.push_f64(&[*t, *v, il.c1 * t + il.c2 * t.powf(il.exponent)]);
        }
        out.tables.push(decay);
        out.tables.push(layer);
        export(&mut out, &traj, "trajectory", every)?;
        Ok(out)
    }))
}
