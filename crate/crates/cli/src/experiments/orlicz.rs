use std::f64::consts::LN_2;

use anyhow::{bail, Result};
use expheat_core::corpus::{mixture_corpus, seeded_rng, Families};
use expheat_core::orlicz::{classify_membership, embedding_check, exp_moment_bound_check, luxemburg_norm, Verdict};
use expheat_core::{GridFunction, GridSpec, RadialProfile};
use rand::Rng;

use super::full_line;
use crate::config::Keys;
use crate::report::{Outcome, Record, Table};

type Job = Box<dyn FnOnce() -> Result<Outcome>>;

pub fn norms(keys: &mut Keys) -> Result<Job> {
    let spec = full_line(keys, 2.0, 4096)?;
    let tol = keys.positive("tol", 1e-10)?;
    let p_values = keys.f64_list("p_values", &[1.0, 2.0, 4.0])?;
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let claim = "Luxemburg norms of indicators and of the log-power profile";
        // the indicator has measure one when its radius is 1/2 in one dimension
        let ind = GridFunction::sample(RadialProfile::Indicator { radius: 0.5, value: 1.0 }, spec)?;
        let n = luxemburg_norm(&ind, 2.0, tol)?.value;
        out.record(Record::close("indicator_p2", n, LN_2.powf(-0.5), 1e-6, claim));
        let lp = GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, spec)?;
        let n = luxemburg_norm(&lp, 2.0, tol)?.value;
        out.record(Record::close("log_power_p2", n, 3f64.sqrt(), 1e-4, claim));

        let mut table = Table::new("norms", &["profile", "p", "norm", "closed_form", "evaluations"]);
        for p in &p_values {
            let r = luxemburg_norm(&ind, *p, tol)?;
            table.push(["indicator".into(), p.to_string(), format!("{:e}", r.value), format!("{:e}", LN_2.powf(-1.0 / p)), r.evaluations.to_string()]);
        }
        // the log-power profile with exponent 2 lies in exp L^q only for q ≤ 2
        let r = luxemburg_norm(&lp, 2.0, tol)?;
        table.push(["log_power_2".into(), "2".into(), format!("{:e}", r.value), format!("{:e}", 3f64.sqrt()), r.evaluations.to_string()]);
        out.tables.push(table);
        Ok(out)
    }))
}

pub fn embeddings(keys: &mut Keys, seed: u64) -> Result<Job> {
    let size = keys.usize("corpus.size", 200)?;
    let pairs = keys.pair_list("pairs", &[(2.0, 2.0), (2.0, 4.0), (4.0, 4.0), (4.0, 8.0)])?;
    let cases = keys.usize("moment.cases", 200)?;
    let margin = keys.f64("margin", -1e-6)?;
    for (p, q) in &pairs {
        if !(1.0 <= *p && p <= q && q.is_finite()) {
            bail!("key `pairs`: need 1 <= p <= q < ∞, got ({p}, {q})");
        }
    }
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let claim = "‖u‖_q ≤ Γ(q/p+1)^{1/q}‖u‖_{exp L^p}";
        let corpus = mixture_corpus(seed, size, Families::ALL)?;
        let mut table = Table::new("embeddings", &["index", "p", "q", "lhs", "rhs", "margin"]);
        for (p, q) in &pairs {
            let mut worst: Option<(usize, expheat_core::InequalityCheck)> = None;
            for (i, u) in corpus.iter().enumerate() {
                let c = embedding_check(u, *p, *q)?;
                table.push([i.to_string(), p.to_string(), q.to_string(), format!("{:e}", c.lhs), format!("{:e}", c.rhs), format!("{:e}", c.margin())]);
                if worst.as_ref().is_none_or(|(_, w)| c.margin() < w.margin()) {
                    worst = Some((i, c));
                }
            }
            if let Some((i, c)) = worst {
                let pass = c.margin() >= margin;
                let mut r = Record::inequality(format!("embedding_p{p}_q{q}"), &c, claim)
                    .with_note(format!("worst of {size} functions (index {i}); margin floor {margin:e}"));
                r.pass = pass;
                out.record(r);
            }
        }
        out.tables.push(table);

        let claim = "‖e^{λ|u|^p} - 1‖_q ≤ (λqK^p)^{1/q} when ‖u‖_{exp L^p} ≤ K, λqK^p ≤ 1";
        let mut rng = seeded_rng(seed ^ 0x6d6f6d);
        let mut failures = 0;
        let mut worst = f64::INFINITY;
        let mut moments = Table::new("exp_moment", &["index", "p", "q", "lambda", "K", "lhs", "rhs"]);
        for i in 0..cases {
            let u = &corpus[i % corpus.len()];
            let p = if rng.gen_bool(0.5) { 2.0 } else { 4.0 };
            let q = rng.gen_range(1.0..4.0);
            let k = luxemburg_norm(u, p, 1e-10)?.value * rng.gen_range(1.0..2.0);
            let lambda = rng.gen_range(0.1..1.0) / (q * k.powf(p));
            let c = exp_moment_bound_check(u, p, q, lambda, k)?;
            worst = worst.min(c.margin());
            failures += usize::from(!c.pass);
            moments.push_f64(&[i as f64, p, q, lambda, k, c.lhs, c.rhs]);
        }
        out.record(
            Record::verdict("exp_moment_random", failures == 0, format!("{cases} cases, {failures} failures, worst margin {worst:.3e}"), claim),
        );
        let edge = GridFunction::sample(
            RadialProfile::Indicator { radius: 0.5, value: LN_2 },
            GridSpec::full(1, 2.0, 64)?,
        )?;
        let c = exp_moment_bound_check(&edge, 1.0, 1.0, 1.0, 1.0)?;
        out.record(Record::close("exp_moment_equality", c.lhs / c.rhs, 1.0, 1e-3, claim).with_note("u = log 2 on a set of measure one, K = λ = q = 1"));
        out.tables.push(moments);
        Ok(out)
    }))
}

pub fn catalogue(keys: &mut Keys) -> Result<Job> {
    let p = keys.f64("p", 2.0)?;
    let dims = keys.f64_list("dims", &[1.0, 2.0, 3.0])?;
    let dims: Vec<usize> = dims.iter().map(|d| *d as usize).collect();
    if !(p > 1.0) || dims.iter().any(|d| !(1..=3).contains(d)) {
        bail!("keys `p`/`dims`: need p > 1 and dimensions in 1..=3");
    }
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        let claim = "log-power ∈ exp L^p \\ exp L^p_0; log-log-power and fast power tails ∈ exp L^p_0";
        let profiles = [
            (RadialProfile::LogPower { alpha: 1.0, p }, Verdict::ExpLpOnly),
            (RadialProfile::LogPower { alpha: 1.0, p: 2.0 * p }, Verdict::ExpLp0),
            (RadialProfile::LogLogPower { p }, Verdict::ExpLp0),
            (RadialProfile::PowerTail { r0: 0.5 * p }, Verdict::ExpLp0),
            (RadialProfile::PowerTail { r0: 2.0 * p }, Verdict::NotExpLp),
            (RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }, Verdict::ExpLp0),
            (RadialProfile::Indicator { radius: 1.0, value: 1.0 }, Verdict::ExpLp0),
            (RadialProfile::Bump { amplitude: 1.0, width: 1.0 }, Verdict::ExpLp0),
        ];
        let mut table =
            Table::new("catalogue", &["profile", "dim", "verdict", "threshold", "bounded", "lebesgue_excluded", "numeric_agrees"]);
        for dim in &dims {
            for (i, (profile, expected)) in profiles.iter().enumerate() {
                let m = classify_membership(profile, p, *dim)?;
                let name = format!("{profile:?}");
                table.push([
                    name.clone(),
                    dim.to_string(),
                    format!("{:?}", m.verdict),
                    m.threshold.map_or(String::new(), |x| format!("{x:e}")),
                    m.bounded.to_string(),
                    m.lebesgue_excluded.map_or(String::new(), |x| x.to_string()),
                    m.numeric_agrees.to_string(),
                ]);
                out.record(Record::verdict(
                    format!("{i}_{}_N{dim}", profile.name()),
                    m.verdict == *expected && m.numeric_agrees,
                    format!("{name}: {:?}, expected {expected:?}, numeric check agrees: {}", m.verdict, m.numeric_agrees),
                    claim,
                ));
            }
        }
        out.tables.push(table);
        Ok(out)
    }))
}
