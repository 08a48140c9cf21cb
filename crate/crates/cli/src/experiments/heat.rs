use std::f64::consts::LN_2;

use anyhow::Result;
use expheat_core::corpus::{mixture_corpus, Families};
use expheat_core::heat::{discontinuity_probe, kappa, kappa_integral, orlicz_semigroup_check_of, smoothing_ratio_of};
use expheat_core::{GridFunction, GridSpec, HeatPropagator, RadialMixture, RadialProfile, SemigroupMethod};

use crate::config::Keys;
use crate::report::{Outcome, Record, Table};

type Job = Box<dyn FnOnce() -> Result<Outcome>>;

pub fn semigroup(keys: &mut Keys, seed: u64) -> Result<Job> {
    let size = keys.usize("corpus.size", 50)?;
    let times = keys.f64_list("times", &[1e-2, 1.0, 1e2])?;
    let probe_n = keys.usize("probe.n", 1024)?;
    let kappa_tol = keys.positive("kappa.tol", 1e-9)?;
    if times.iter().any(|t| !(*t > 0.0)) {
        anyhow::bail!("key `times`: every time must be positive");
    }
    Ok(Box::new(move || {
        let mut out = Outcome::default();
        gaussian_and_composition(&mut out)?;
        corpus_estimates(&mut out, seed, size, &times)?;
        kappa_checks(&mut out, kappa_tol)?;
        probe(&mut out, probe_n)?;
        Ok(out)
    }))
}

fn gaussian_and_composition(out: &mut Outcome) -> Result<()> {
    let claim = "e^{tΔ} is convolution with the Gaussian kernel and a semigroup";
    let spec = GridSpec::full(1, 16.0, 512)?;
    let prop = HeatPropagator::new(spec, SemigroupMethod::LineQuadrature)?;
    let u0 = GridFunction::from_radial_fn(spec, |x| (-x * x / 4.0).exp())?;
    let mut err: f64 = 0.0;
    for t in [0.1f64, 1.0, 10.0] {
        let exact = GridFunction::from_radial_fn(spec, |x| (1.0 + t).powf(-0.5) * (-x * x / (4.0 * (1.0 + t))).exp())?;
        err = err.max(prop.apply(&u0, t)?.sub(&exact)?.sup_norm());
    }
    out.record(Record::at_most("gaussian_closed_form", err, 1e-8, claim).with_note("N = 1, L = 16, n = 512, t ∈ {0.1, 1, 10}"));
    let mix = RadialMixture::new(vec![
        (1.0, RadialProfile::Indicator { radius: 1.0, value: 1.0 }),
        (0.5, RadialProfile::Bump { amplitude: 1.0, width: 2.0 }),
    ])?;
    let u = GridFunction::sample(mix, spec)?;
    let two = prop.apply(&prop.apply(&u, 0.3)?, 0.7)?;
    let err = two.sub(&prop.apply(&u, 1.0)?)?.sup_norm() / u.sup_norm();
    out.record(Record::at_most("composition", err, 1e-6, claim));
    Ok(())
}

fn corpus_estimates(out: &mut Outcome, seed: u64, size: usize, times: &[f64]) -> Result<()> {
    let corpus = mixture_corpus(seed, size, Families::CONFINED)?;
    let prop = HeatPropagator::new(*corpus[0].spec(), SemigroupMethod::LineQuadrature)?;
    let mut smoothing = Table::new("smoothing", &["index", "t", "r", "rho", "ratio"]);
    let mut orlicz = Table::new("orlicz_semigroup", &["index", "t", "p", "q", "r", "norm", "contraction_rhs", "lq_rhs", "split_rhs"]);
    let mut worst_ratio: f64 = 0.0;
    let mut failures = [0usize; 3];
    let mut worst_margin = [f64::INFINITY; 3];
    for (i, u) in corpus.iter().enumerate() {
        for t in times {
            let v = prop.apply(u, *t)?;
            for (r, rho) in [(1.0, f64::INFINITY), (1.0, 2.0), (2.0, 2.0)] {
                let s = smoothing_ratio_of(u, &v, *t, r, rho)?;
                worst_ratio = worst_ratio.max(s.ratio);
                smoothing.push_f64(&[i as f64, *t, r, rho, s.ratio]);
            }
            for (p, q, r) in [(2.0, 2.0, 1.0), (4.0, 2.0, f64::INFINITY)] {
                let rep = orlicz_semigroup_check_of(u, &v, *t, p, q, r)?;
                let checks = [rep.contraction, rep.lq_bound, rep.split_bound];
                for (k, c) in checks.iter().enumerate() {
                    failures[k] += usize::from(!c.pass);
                    worst_margin[k] = worst_margin[k].min(c.margin());
                }
                orlicz.push_f64(&[i as f64, *t, p, q, r, rep.contraction.lhs, rep.contraction.rhs, rep.lq_bound.rhs, rep.split_bound.rhs]);
            }
        }
    }
    out.record(
        Record::at_most("smoothing_ratio", worst_ratio, 1.0 + 1e-6, "‖e^{tΔ}φ‖_ρ ≤ t^{-(N/2)(1/r-1/ρ)}‖φ‖_r")
            .with_note(format!("max over {size} functions, (r, ρ) ∈ {{(1,∞), (1,2), (2,2)}}")),
    );
    let names = ["orlicz_contraction", "orlicz_lq_bound", "orlicz_split_bound"];
    let claims = [
        "‖e^{tΔ}φ‖_{exp L^p} ≤ ‖φ‖_{exp L^p}",
        "‖e^{tΔ}φ‖_{exp L^p} ≤ t^{-N/2q}(log(t^{-N/2}+1))^{-1/p}‖φ‖_q",
        "‖e^{tΔ}φ‖_{exp L^p} ≤ (log 2)^{-1/p}(t^{-N/2r}‖φ‖_r + ‖φ‖_q)",
    ];
    for k in 0..3 {
        out.record(Record::verdict(
            names[k],
            failures[k] == 0,
            format!("{} failures, worst margin {:.3e}, tolerance 1e-4", failures[k], worst_margin[k]),
            claims[k],
        ));
    }
    out.tables.push(smoothing);
    out.tables.push(orlicz);
    Ok(())
}

fn kappa_checks(out: &mut Outcome, tol: f64) -> Result<()> {
    let claim = "κ ∈ L¹(0, ∞)";
    let mut table = Table::new("kappa", &["p", "N", "r", "tol", "value", "error", "converged"]);
    for (p, n, r) in [(2.0, 5, 3.0), (4.0, 3, 2.0)] {
        let a = kappa_integral(p, n, r, f64::INFINITY, tol)?;
        let b = kappa_integral(p, n, r, f64::INFINITY, 0.5 * tol)?;
        for (t, k) in [(tol, a), (0.5 * tol, b)] {
            table.push_f64(&[p, n as f64, r, t, k.value, k.error, f64::from(u8::from(k.converged))]);
        }
        let rec = Record::close(format!("kappa_integral_p{p}_N{n}_r{r}"), b.value, a.value, 1e-6, claim);
        let rec = if a.converged && b.converged { rec } else { Record { pass: false, ..rec } };
        out.record(rec.with_note(format!("tolerance halving; value {:.10}", b.value)));
    }
    out.record(Record::close("kappa_at_one", kappa(1.0, 2.0, 5, 3.0)?, 1.0 / LN_2, 1e-10, claim));
    out.tables.push(table);
    Ok(())
}

fn probe(out: &mut Outcome, n: usize) -> Result<()> {
    let claim = "‖e^{tΔ}Φ - Φ‖_{exp L^p} ≥ C > 0 for the log-power profile";
    let times: Vec<f64> = (0..=6).map(|k| 10f64.powf(-3.0 + 0.5 * k as f64)).collect();
    let profile = RadialProfile::LogPower { alpha: 1.0, p: 2.0 };
    let method = SemigroupMethod::LineQuadrature;
    let coarse = discontinuity_probe(&profile, 2.0, &times, GridSpec::full(1, 4.0, n)?, method)?;
    let fine = discontinuity_probe(&profile, 2.0, &times, GridSpec::full(1, 4.0, 2 * n)?, method)?;
    let mut table = Table::new("discontinuity", &["t", "norm_n", "norm_2n"]);
    for ((t, a), (_, b)) in coarse.norms.iter().zip(&fine.norms) {
        table.push_f64(&[*t, *a, *b]);
    }
    out.record(
        Record::verdict(
            "probe_floor",
            coarse.floor > 0.0 && fine.floor >= coarse.floor * (1.0 - 1e-3),
            format!("floor {:.5} at n = {n}, {:.5} at n = {}", coarse.floor, fine.floor, 2 * n),
            claim,
        ),
    );
    let gauss = RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 };
    let control = discontinuity_probe(&gauss, 2.0, &[1e-3], GridSpec::full(1, 16.0, n)?, method)?;
    out.record(Record::at_most("probe_gaussian_control", control.floor, 1e-3, "e^{tΔ}u → u in exp L^p for u ∈ exp L^p_0"));
    out.tables.push(table);
    Ok(())
}
