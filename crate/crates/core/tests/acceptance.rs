//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Runs as a plain binary (`harness = false`) so the verdict table is always
//! printed. Criteria run on separate threads; the global-decay run is shared
//! by the decay and initial-layer criteria.

use std::f64::consts::LN_2;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use expheat_core::analysis::{
    contraction_budget, default_t_grid, gamma_growth_check, select_params, verify_params, DivergenceProbe,
};
use expheat_core::corpus::{mixture_corpus, random_admissible_params, seeded_rng, Families};
use expheat_core::grid::{GridFunction, GridSpec, RadialProfile};
use expheat_core::heat::{
    discontinuity_probe, kappa, kappa_integral, orlicz_semigroup_check_of, smoothing_ratio, smoothing_ratio_of, HeatPropagator,
    SemigroupMethod,
};
use expheat_core::orlicz::{embedding_check, exp_moment_bound_check, lebesgue_norm, luxemburg_norm};
use expheat_core::picard::{
    blowup_rate_fit, decay_supremum, initial_layer_check, local_window, solve, solve_with, LedgerSpec,
    NonlinearitySpec, Sign, SolverConfig, Status, Trajectory,
};
use expheat_core::{RadialMixture, Result};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

// ---------------------------------------------------------------- 1

fn closed_form_norms() -> Result<Outcome> {
    let start = Instant::now();
    let ind = GridFunction::sample(
        RadialProfile::Indicator { radius: 0.5, value: 1.0 },
        GridSpec::full(1, 2.0, 64)?,
    )?;
    let n1 = luxemburg_norm(&ind, 2.0, 1e-10)?.value;
    let e1 = (n1 - LN_2.powf(-0.5)).abs();
    let lp = GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, GridSpec::full(1, 2.0, 4096)?)?;
    let n2 = luxemburg_norm(&lp, 2.0, 1e-10)?.value;
    let e2 = (n2 - 3f64.sqrt()).abs();
    let el = start.elapsed();
    outcome(
        e1 <= 1e-6 && e2 <= 1e-4 && within(el, 5),
        format!("indicator err {e1:.1e}, log-power err {e2:.1e}, {:.2}s", el.as_secs_f64()),
    )
}

// ---------------------------------------------------------------- 2

fn embedding_suite() -> Result<Outcome> {
    let start = Instant::now();
    let corpus = mixture_corpus(2, 200, Families::ALL)?;
    let pairs = [(2.0, 2.0), (2.0, 4.0), (4.0, 4.0), (4.0, 8.0)];
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for u in &corpus {
        for (p, q) in pairs {
            let c = embedding_check(u, p, q)?;
            worst = worst.min(c.margin());
            if c.margin() < -1e-6 {
                failures += 1;
            }
        }
    }
    let el = start.elapsed();
    outcome(
        failures == 0 && within(el, 120),
        format!("800 checks, {failures} below margin, worst margin {worst:.3e}, {:.1}s", el.as_secs_f64()),
    )
}

// ---------------------------------------------------------------- 3

fn exp_moment_bound() -> Result<Outcome> {
    let corpus = mixture_corpus(3, 200, Families::ALL)?;
    let mut rng = seeded_rng(33);
    let mut failures = 0;
    for u in &corpus {
        let p = if rng.gen_bool(0.5) { 2.0 } else { 4.0 };
        let q = rng.gen_range(1.0..4.0);
        let k = luxemburg_norm(u, p, 1e-10)?.value * rng.gen_range(1.0..2.0);
        let lambda = rng.gen_range(0.1..1.0) / (q * k.powf(p));
        if !exp_moment_bound_check(u, p, q, lambda, k)?.pass {
            failures += 1;
        }
    }
    let edge = GridFunction::sample(
        RadialProfile::Indicator { radius: 0.5, value: LN_2 },
        GridSpec::full(1, 2.0, 64)?,
    )?;
    let c = exp_moment_bound_check(&edge, 1.0, 1.0, 1.0, 1.0)?;
    let ratio = c.lhs / c.rhs;
    outcome(
        failures == 0 && (0.999..=1.001).contains(&ratio),
        format!("200 random cases, {failures} failures; equality case lhs/rhs = {ratio:.6}"),
    )
}

// ---------------------------------------------------------------- 4, 5

const SEMIGROUP_TIMES: [f64; 3] = [1e-2, 1.0, 1e2];

struct Evolved {
    u: GridFunction,
    v: Vec<GridFunction>,
}

/// Confined corpus and its heat flow at the three probe times.
fn evolved_corpus() -> &'static Vec<Evolved> {
    static CELL: OnceLock<Vec<Evolved>> = OnceLock::new();
    CELL.get_or_init(|| {
        let corpus = mixture_corpus(4, 200, Families::CONFINED).expect("corpus");
        let prop = HeatPropagator::new(*corpus[0].spec(), SemigroupMethod::LineQuadrature).expect("propagator");
        corpus
            .into_iter()
            .map(|u| {
                let v = SEMIGROUP_TIMES.iter().map(|t| prop.apply(&u, *t).expect("heat")).collect();
                Evolved { u, v }
            })
            .collect()
    })
}

fn semigroup_exactness() -> Result<Outcome> {
    let spec = GridSpec::full(1, 16.0, 512)?;
    let u0 = GridFunction::from_radial_fn(spec, |x| (-x * x / 4.0).exp())?;
    let prop = HeatPropagator::new(spec, SemigroupMethod::LineQuadrature)?;
    let mut gauss_err: f64 = 0.0;
    for t in [0.1, 1.0, 10.0] {
        let v = prop.apply(&u0, t)?;
        for (i, val) in v.values().iter().enumerate() {
            let x = spec.axis_coord(i);
            let exact = (1.0 + t).powf(-0.5) * (-x * x / (4.0 * (1.0 + t))).exp();
            gauss_err = gauss_err.max((val - exact).abs());
        }
    }
    let bump = GridFunction::sample(
        RadialMixture::new(vec![
            (1.0, RadialProfile::Indicator { radius: 1.0, value: 1.0 }),
            (0.5, RadialProfile::Bump { amplitude: 1.0, width: 2.0 }),
        ])?,
        spec,
    )?;
    let two = prop.apply(&prop.apply(&bump, 0.3)?, 0.7)?;
    let one = prop.apply(&bump, 1.0)?;
    let comp_err = two.sub(&one)?.sup_norm();

    let mut worst_ratio: f64 = 0.0;
    for e in evolved_corpus() {
        for (t, v) in SEMIGROUP_TIMES.iter().zip(&e.v) {
            for (r, rho) in [(1.0, f64::INFINITY), (1.0, 2.0), (2.0, 2.0)] {
                worst_ratio = worst_ratio.max(smoothing_ratio_of(&e.u, v, *t, r, rho)?.ratio);
            }
        }
    }
    // the propagating entry point agrees with the precomputed flow
    let lib = smoothing_ratio(&evolved_corpus()[0].u, 1.0, 1.0, 2.0, SemigroupMethod::LineQuadrature)?;
    let pre = smoothing_ratio_of(&evolved_corpus()[0].u, &evolved_corpus()[0].v[1], 1.0, 1.0, 2.0)?;
    let lib = (lib.ratio - pre.ratio).abs() <= 1e-12 && lib.pass;
    outcome(
        gauss_err <= 1e-8 && comp_err <= 1e-6 && worst_ratio <= 1.0 + 1e-6 && lib,
        format!("Gaussian err {gauss_err:.1e}, composition err {comp_err:.1e}, max smoothing ratio {worst_ratio:.6}"),
    )
}

fn orlicz_semigroup() -> Result<Outcome> {
    let mut failures = 0;
    let mut checks = 0;
    let mut worst = f64::INFINITY;
    for e in evolved_corpus() {
        for (t, v) in SEMIGROUP_TIMES.iter().zip(&e.v) {
            for (p, q, r) in [(2.0, 2.0, 1.0), (4.0, 2.0, f64::INFINITY)] {
                let rep = orlicz_semigroup_check_of(&e.u, v, *t, p, q, r)?;
                for c in [rep.contraction, rep.lq_bound, rep.split_bound] {
                    checks += 1;
                    worst = worst.min(c.margin());
                    if !c.pass {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{checks} checks, {failures} failures, worst margin {worst:.3e}"))
}

// ---------------------------------------------------------------- 6

fn kappa_integrability() -> Result<Outcome> {
    let mut detail = Vec::new();
    let mut pass = true;
    for (p, n, r) in [(2.0, 5, 3.0), (4.0, 3, 2.0)] {
        let a = kappa_integral(p, n, r, f64::INFINITY, 1e-9)?;
        let b = kappa_integral(p, n, r, f64::INFINITY, 5e-10)?;
        let drift = (a.value - b.value).abs();
        pass &= a.converged && b.converged && drift <= 1e-6;
        detail.push(format!("({p},{n},{r}): {:.9} drift {drift:.1e}", b.value));
    }
    let k1 = kappa(1.0, 2.0, 5, 3.0)?;
    let e = (k1 - 1.0 / LN_2).abs();
    pass &= e <= 1e-10;
    detail.push(format!("κ(1) err {e:.1e}"));
    outcome(pass, detail.join("; "))
}

// ---------------------------------------------------------------- 7

fn local_existence() -> Result<Outcome> {
    let start = Instant::now();
    let spec = GridSpec::full(1, 8.0, 512)?;
    let u0 = GridFunction::sample(RadialProfile::Gaussian { s: 0.25, amplitude: 0.1 }, spec)?;
    let f = NonlinearitySpec::new(3.0, 2.0, 1.0, Sign::Plus, 1.0)?;
    let (_, window) = local_window(lebesgue_norm(&u0, 2.0)?, u0.sup_norm(), &f)?;
    let tol = 1e-8;
    let coarse_cfg = SolverConfig { dt: window / 2.0, substeps: 8, picard_tol: tol, ..Default::default() };
    let fine_cfg = SolverConfig { dt: window / 4.0, substeps: 16, ..coarse_cfg.clone() };
    let coarse = solve(&u0, &f, &coarse_cfg, window, SemigroupMethod::LineQuadrature)?;
    let fine = solve(&u0, &f, &fine_cfg, window, SemigroupMethod::LineQuadrature)?;
    let contracting = [&coarse, &fine]
        .iter()
        .flat_map(|tr| tr.steps.iter())
        .all(|s| s.contraction_factor < 1.0 && s.window_factor < 1.0);
    let mut agreement: f64 = 0.0;
    let mut common = 0;
    for (t, state) in coarse.times.iter().zip(&coarse.states).skip(1) {
        if let Some(other) = fine.state_at(*t) {
            agreement = agreement.max(state.sub(other)?.sup_norm());
            common += 1;
        }
    }
    let el = start.elapsed();
    let completed = coarse.status == Status::Completed && fine.status == Status::Completed;
    outcome(
        completed && contracting && common >= 2 && agreement <= 10.0 * tol && within(el, 120),
        format!("window {window:.5}, {common} common times, max diff {agreement:.1e}, {:.1}s", el.as_secs_f64()),
    )
}

// ---------------------------------------------------------------- 8

fn blowup_config(dt: f64) -> SolverConfig {
    SolverConfig {
        dt,
        substeps: 4,
        picard_tol: 1e-10,
        picard_max_iter: 100,
        dt_min: 1e-26,
        max_growth: Some(0.002),
        cap_by_local_window: false,
        ..Default::default()
    }
}

fn blowup_rate() -> Result<Outcome> {
    let start = Instant::now();
    let spec = GridSpec::full(1, 8.0, 256)?;
    let u0 = GridFunction::sample(RadialProfile::Gaussian { s: 0.25, amplitude: 5.0 }, spec)?;
    let f = NonlinearitySpec::new(3.0, 2.0, 1.0, Sign::Plus, 1.0)?;
    let a = solve(&u0, &f, &blowup_config(1e-15), 1.0, SemigroupMethod::LineQuadrature)?;
    let b = solve(&u0, &f, &blowup_config(5e-16), 1.0, SemigroupMethod::LineQuadrature)?;
    let (Some(ta), Some(tb)) = (a.t_max(), b.t_max()) else {
        return outcome(false, format!("statuses {:?}, {:?}", a.status, b.status));
    };
    // half a unit in the second significant digit
    let unit = 10f64.powf(ta.log10().floor() - 1.0);
    let stable = (ta - tb).abs() < 0.5 * unit;
    let fit = blowup_rate_fit(&a, f.lambda, f.p)?;
    let el = start.elapsed();
    outcome(
        stable && fit.c1 > 0.0 && fit.pass && within(el, 600),
        format!(
            "T_max {ta:.4e} vs {tb:.4e}, C1 = {:.3}, C2 = {:.3}, {} tail samples, {:.1}s",
            fit.c1,
            fit.c2,
            fit.samples,
            el.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------- 9, 10

struct DecayRun {
    traj: Trajectory,
    u0: GridFunction,
    prop: HeatPropagator,
    elapsed: Duration,
}

fn decay_run() -> &'static std::result::Result<DecayRun, String> {
    static CELL: OnceLock<std::result::Result<DecayRun, String>> = OnceLock::new();
    CELL.get_or_init(|| build_decay_run().map_err(|e| e.to_string()))
}

fn build_decay_run() -> Result<DecayRun> {
    let start = Instant::now();
    let ps = select_params(3, 4.0, 4.0, 6.0)?;
    let f = NonlinearitySpec::new(4.0, 4.0, 1.0, Sign::Plus, 1.0)?;
    let eps = contraction_budget(&f, 1.0, ps.q).max_epsilon;
    let spec = GridSpec::radial(3, 80.0, 2000)?;
    let g = GridFunction::sample(RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }, spec)?;
    let u0 = g.scaled(eps / luxemburg_norm(&g, 4.0, 1e-12)?.value);
    let cfg = SolverConfig {
        dt: 0.5,
        dt_initial: Some(0.01),
        dt_growth: 1.05,
        substeps: 4,
        picard_tol: 1e-10,
        ledger: LedgerSpec { lq: vec![6.0], orlicz_p: Some(4.0), weighted: Some((6.0, ps.sigma)) },
        ..Default::default()
    };
    let prop = HeatPropagator::new(spec, SemigroupMethod::Radial3D)?;
    let traj = solve_with(&u0, &f, &cfg, 100.0, &prop)?;
    Ok(DecayRun { traj, u0, prop, elapsed: start.elapsed() })
}

fn global_decay() -> Result<Outcome> {
    let run = match decay_run() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let sigma = 1.0 / 12.0;
    let d = decay_supremum(&run.traj, 6.0, sigma, 1.0)?;
    let norms = run.traj.lq_series(6.0).expect("L^6 column");
    let (ts, ns): (Vec<f64>, Vec<f64>) =
        run.traj.times.iter().zip(&norms).filter(|(t, _)| **t >= 10.0).map(|(t, n)| (*t, *n)).unzip();
    let late_slope = expheat_core::analysis::fit::log_log_slope(&ts, &ns);
    outcome(
        d.pass && d.max_rebound <= 1.05 && late_slope <= -sigma + 0.05 && within(run.elapsed, 1800),
        format!(
            "sup t^σ‖u‖₆ = {:.5}, rebound {:.4}, slope on [10,100] {late_slope:.3}, {} steps, {:.1}s",
            d.sup_value,
            d.max_rebound,
            run.traj.steps.len(),
            run.elapsed.as_secs_f64()
        ),
    )
}

fn initial_layer() -> Result<Outcome> {
    let run = match decay_run() {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let il = initial_layer_check(&run.traj, &run.u0, 4.0, 4.0, &run.prop)?;
    let first8 = &il.values[..8];
    let shrinks_toward_zero = first8.windows(2).all(|w| w[0] <= w[1]);
    outcome(
        il.pass && shrinks_toward_zero && first8[0] < 1e-4,
        format!(
            "d(t) from {:.2e} (t = {}) to {:.2e} (t = {:.3}), C1 = {:.3e}, C2 = {:.3e}",
            first8[0], il.times[0], first8[7], il.times[7], il.c1, il.c2
        ),
    )
}

// ---------------------------------------------------------------- 11

fn nonexistence() -> Result<Outcome> {
    let grid = default_t_grid(13);
    let coarse = DivergenceProbe::new(2.0, 1, &grid, 32)?;
    let fine = DivergenceProbe::new(2.0, 1, &grid, 64)?;
    let alphas: Vec<f64> = (1..=16).map(|k| 0.25 * k as f64).collect();
    let slopes: Vec<f64> = alphas.iter().map(|a| coarse.slope(*a, 1.0)).collect();
    let monotone = slopes.windows(2).all(|w| w[1] < w[0]);
    let same_verdicts = alphas
        .iter()
        .all(|a| (coarse.slope(*a, 1.0) <= -0.95) == (fine.slope(*a, 1.0) <= -0.95));
    let a1 = coarse.alpha_threshold(1.0)?;
    let a2 = coarse.alpha_threshold(2.0)?;
    let scale = a2 / a1 / 2f64.powf(-0.5);
    outcome(
        monotone && same_verdicts && a1.is_finite() && (scale - 1.0).abs() <= 0.1,
        format!("α₀ = {a1:.4}, α₀(2λ)/α₀ = {:.6} (expected {:.6})", a2 / a1, 2f64.powf(-0.5)),
    )
}

// ---------------------------------------------------------------- 12

fn parameter_construction() -> Result<Outcome> {
    let mut rng = seeded_rng(12);
    let mut bad = 0;
    let mut worst_balance: f64 = 0.0;
    for _ in 0..50 {
        let (n, p, m, a) = random_admissible_params(&mut rng);
        let rep = verify_params(&select_params(n, p, m, a)?, 50)?;
        if !rep.construction_conditions_pass() {
            bad += 1;
        }
        let b = rep.condition("beta_balance").expect("balance condition");
        worst_balance = worst_balance.max(b.worst + 1e-12);
    }
    let ps = select_params(3, 4.0, 4.0, 6.0)?;
    let exact = [
        (ps.sigma, 1.0 / 12.0),
        (ps.q, 12.0 / 7.0),
        (ps.r, 4.0 / 3.0),
        (ps.theta(0), 0.5),
        (ps.rho(0), 4.5),
        (ps.rho(1), 16.5),
    ]
    .iter()
    .all(|(x, y)| (x - y).abs() <= 1e-12 * y.abs().max(1.0));
    let rep = verify_params(&ps, 50)?;
    let growth = rep.condition("growth_exponent").expect("growth condition");
    let gg = gamma_growth_check(&ps, 50)?;
    outcome(
        bad == 0 && worst_balance <= 1e-12 && exact && growth.first_failure == Some(1) && gg.c_fit.is_finite(),
        format!(
            "50 tuples, {bad} failing; balance residual ≤ {worst_balance:.1e}; growth bound fails from k = 1 \
             (reported), Γ-growth C = {:.3} pass = {}",
            gg.c_fit, gg.pass
        ),
    )
}

// ---------------------------------------------------------------- 13

fn discontinuity() -> Result<Outcome> {
    let times: Vec<f64> = (0..=6).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect();
    let profile = RadialProfile::LogPower { alpha: 1.0, p: 2.0 };
    let coarse = discontinuity_probe(&profile, 2.0, &times, GridSpec::full(1, 4.0, 1024)?, SemigroupMethod::LineQuadrature)?;
    let fine = discontinuity_probe(&profile, 2.0, &times, GridSpec::full(1, 4.0, 2048)?, SemigroupMethod::LineQuadrature)?;
    let gauss = RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 };
    let control = discontinuity_probe(&gauss, 2.0, &[1e-3], GridSpec::full(1, 16.0, 1024)?, SemigroupMethod::LineQuadrature)?;
    let stable = fine.floor >= coarse.floor * (1.0 - 1e-3);
    outcome(
        coarse.floor > 0.0 && stable && control.floor < 1e-3,
        format!("floor {:.4} (n) → {:.4} (2n); Gaussian control {:.2e}", coarse.floor, fine.floor, control.floor),
    )
}

// ----------------------------------------------------------------

type Criterion = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(&str, Criterion); 13] = [
        ("closed-form norms", closed_form_norms),
        ("embedding suite", embedding_suite),
        ("exp-moment bound", exp_moment_bound),
        ("semigroup exactness", semigroup_exactness),
        ("Orlicz semigroup estimates", orlicz_semigroup),
        ("κ integrability", kappa_integrability),
        ("local existence", local_existence),
        ("blow-up rate", blowup_rate),
        ("global decay", global_decay),
        ("initial layer", initial_layer),
        ("non-existence diagnostic", nonexistence),
        ("parameter construction", parameter_construction),
        ("discontinuity probe", discontinuity),
    ];
    // the shared long run starts first
    let outcomes: Vec<(Result<Outcome>, Duration)> = std::thread::scope(|scope| {
        scope.spawn(decay_run);
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let r = f();
                    (r, start.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| (outcome(false, "panicked"), Duration::ZERO)))
            .collect()
    });
    let mut failed = 0;
    println!();
    for (i, ((name, _), (res, el))) in criteria.iter().zip(outcomes).enumerate() {
        let (verdict, detail) = match res {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {:<28} {verdict}  [{:>6.1}s] {detail}", i + 1, name, el.as_secs_f64());
    }
    println!("\n{} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
