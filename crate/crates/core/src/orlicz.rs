//! Measurements in the Orlicz space `exp L^p`: modular integrals, the
//! Luxemburg norm, Lebesgue norms, the embeddings between them, and the
//! membership catalogue of the analytic profiles.

use serde::Serialize;

use crate::analysis::special::{gamma, sphere_area};
use crate::check::InequalityCheck;
use crate::error::{Error, Result};
use crate::grid::{Functional, GridFunction, RadialProfile};
use crate::quad::adaptive;

pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative slack for the embedding inequalities.
const EMBED_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrliczNorm {
    pub p: f64,
    pub value: f64,
    /// Final root bracket `(λ_lo, λ_hi)`; `value` is the upper end, where the
    /// modular is at most one.
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub evaluations: usize,
}

/// `∫ (e^{λ|u|^p} - 1) dx`.
pub fn orlicz_integral(u: &GridFunction, p: f64, lambda: f64) -> Result<f64> {
    if !(p >= 1.0) || !(lambda > 0.0) {
        return Err(Error::DomainError(format!("modular needs p >= 1 and λ > 0, got p = {p}, λ = {lambda}")));
    }
    u.integrate_functional(&Functional::ExpModular { p, lambda })
}

/// Luxemburg norm `inf{k > 0 : ∫(e^{|u/k|^p} - 1) ≤ 1}` by bisection on
/// `log k`; the modular is strictly decreasing in `k`.
pub fn luxemburg_norm(u: &GridFunction, p: f64, tol: f64) -> Result<OrliczNorm> {
    if !(p >= 1.0) || !(tol > 0.0) {
        return Err(Error::DomainError(format!("norm needs p >= 1 and tol > 0, got p = {p}, tol = {tol}")));
    }
    if u.is_zero() {
        return Ok(OrliczNorm { p, value: 0.0, bracket: (0.0, 0.0), tolerance: tol, evaluations: 0 });
    }
    let mut evaluations = 0;
    // true when the modular at scaling k exceeds one
    let mut above = |k: f64| -> Result<bool> {
        evaluations += 1;
        match orlicz_integral(u, p, k.powf(-p)) {
            Ok(m) => Ok(m > 1.0),
            Err(Error::OverflowDiverged { .. }) => Ok(true),
            Err(e) => Err(e),
        }
    };

    let sup = match u.sup_norm() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let mut lo = sup / 50.0;
    let mut hi = sup * (u.spec().domain_measure() + 1.0);
    let mut expansions = 0;
    while above(hi)? {
        hi *= 2.0;
        expansions += 1;
        if expansions > 2000 {
            return Err(Error::BracketFailure(format!("modular still above 1 at scaling {hi:e}")));
        }
    }
    while !above(lo)? {
        hi = hi.min(lo);
        lo *= 0.5;
        if lo < 1e-300 {
            return Err(Error::BracketFailure("modular below 1 at every scaling".into()));
        }
    }
    while hi - lo > tol * hi.max(1.0) {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(OrliczNorm { p, value: hi, bracket: (lo, hi), tolerance: tol, evaluations })
}

/// `(∫|u|^q)^{1/q}`, or the largest magnitude for `q = ∞`. Profiles that
/// are unbounded at the origin have infinite sup norm whatever the grid.
pub fn lebesgue_norm(u: &GridFunction, q: f64) -> Result<f64> {
    if q.is_infinite() {
        if u.analytic().is_some_and(|m| m.unbounded_at_origin()) {
            return Ok(f64::INFINITY);
        }
        return Ok(u.sup_norm());
    }
    if !(q >= 1.0) {
        return Err(Error::DomainError(format!("Lebesgue exponent must be >= 1, got {q}")));
    }
    Ok(u.integrate_functional(&Functional::Power(q))?.max(0.0).powf(1.0 / q))
}

/// `‖u‖_q ≤ Γ(q/p + 1)^{1/q} ‖u‖_{exp L^p}` for `1 ≤ p ≤ q < ∞`.
pub fn embedding_check(u: &GridFunction, p: f64, q: f64) -> Result<InequalityCheck> {
    if !(1.0 <= p && p <= q && q.is_finite()) {
        return Err(Error::PreconditionViolated(format!("embedding needs 1 <= p <= q < ∞, got p = {p}, q = {q}")));
    }
    let lhs = lebesgue_norm(u, q)?;
    let norm = luxemburg_norm(u, p, DEFAULT_TOL)?.value;
    let rhs = gamma(q / p + 1.0)?.powf(1.0 / q) * norm;
    Ok(InequalityCheck::new(lhs, rhs, EMBED_SLACK))
}

/// `‖e^{λ|u|^p} - 1‖_q ≤ (λ q K^p)^{1/q}` whenever `‖u‖_{exp L^p} ≤ K` and
/// `λ q K^p ≤ 1`.
pub fn exp_moment_bound_check(u: &GridFunction, p: f64, q: f64, lambda: f64, k: f64) -> Result<InequalityCheck> {
    let budget = lambda * q * k.powf(p);
    if !(budget <= 1.0) || !(q >= 1.0) || !(lambda > 0.0) {
        return Err(Error::PreconditionViolated(format!("λqK^p = {budget} must not exceed 1 (q = {q}, λ = {lambda})")));
    }
    let norm = luxemburg_norm(u, p, DEFAULT_TOL)?.value;
    if norm > k * (1.0 + EMBED_SLACK) {
        return Err(Error::PreconditionViolated(format!("Luxemburg norm {norm} exceeds K = {k}")));
    }
    let lhs = u.integrate_functional(&Functional::ExpMoment { p, lambda, q })?.max(0.0).powf(1.0 / q);
    Ok(InequalityCheck::new(lhs, budget.powf(1.0 / q), EMBED_SLACK))
}

/// `‖u‖_{exp L^p} ≤ (log 2)^{-1/p} (‖u‖_q + ‖u‖_∞)` for `1 ≤ q ≤ p`.
pub fn l1linf_embed_check(u: &GridFunction, p: f64, q: f64) -> Result<InequalityCheck> {
    if !(1.0 <= q && q <= p) {
        return Err(Error::PreconditionViolated(format!("needs 1 <= q <= p, got p = {p}, q = {q}")));
    }
    let lhs = luxemburg_norm(u, p, DEFAULT_TOL)?.value;
    let rhs = std::f64::consts::LN_2.powf(-1.0 / p) * (lebesgue_norm(u, q)? + lebesgue_norm(u, f64::INFINITY)?);
    Ok(InequalityCheck::new(lhs, rhs, EMBED_SLACK))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// Finite modular at every scaling.
    ExpLp0,
    /// Finite modular only above a critical scaling.
    ExpLpOnly,
    NotExpLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub verdict: Verdict,
    /// Critical Luxemburg scaling, for families that have one in closed form.
    pub threshold: Option<f64>,
    pub bounded: bool,
    /// Lebesgue exponent the profile is known to miss.
    pub lebesgue_excluded: Option<f64>,
    /// Whether the numerical straddle test agrees with the verdict.
    pub numeric_agrees: bool,
}

/// Analytic membership of a catalogue profile in `exp L^p(ℝ^N)`, cross-checked
/// numerically by watching the modular contributions of successive
/// logarithmic windows towards the singular end.
pub fn classify_membership(profile: &RadialProfile, p: f64, dim: usize) -> Result<Membership> {
    profile.validate()?;
    if !(p > 1.0) || !(1..=3).contains(&dim) {
        return Err(Error::DomainError(format!("classification needs p > 1 and N in 1..=3, got p = {p}, N = {dim}")));
    }
    let n = dim as f64;
    let same = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b;
    let mut m = Membership {
        verdict: Verdict::ExpLp0,
        threshold: None,
        bounded: !profile.unbounded_at_origin(),
        lebesgue_excluded: None,
        numeric_agrees: true,
    };
    match *profile {
        RadialProfile::LogPower { alpha, p: pp } => {
            if same(p, pp) {
                let thr = alpha * n.powf(-1.0 / p);
                m.verdict = Verdict::ExpLpOnly;
                m.threshold = Some(thr);
                m.numeric_agrees = !window_modular_finite(profile, p, (0.95 * thr).powf(-p), dim, Side::Origin)
                    && window_modular_finite(profile, p, (1.05 * thr).powf(-p), dim, Side::Origin);
            } else {
                m.verdict = if p < pp { Verdict::ExpLp0 } else { Verdict::NotExpLp };
                let finite_large = window_modular_finite(profile, p, 2.0, dim, Side::Origin);
                m.numeric_agrees = finite_large == (m.verdict == Verdict::ExpLp0);
            }
        }
        RadialProfile::LogLogPower { .. } => {
            m.numeric_agrees = window_modular_finite(profile, p, 2.0, dim, Side::Origin);
        }
        RadialProfile::PowerTail { r0 } => {
            m.lebesgue_excluded = Some(r0);
            m.verdict = if p > r0 { Verdict::ExpLp0 } else { Verdict::NotExpLp };
            let finite = window_modular_finite(profile, p, 1e-3, dim, Side::Infinity);
            m.numeric_agrees = finite == (m.verdict == Verdict::ExpLp0);
        }
        RadialProfile::Gaussian { .. } | RadialProfile::Indicator { .. } | RadialProfile::Bump { .. } => {}
    }
    Ok(m)
}

#[derive(Clone, Copy)]
enum Side {
    Origin,
    Infinity,
}

// Contributions of r ∈ [e^{-s_{j+1}}, e^{-s_j}] (or [e^{s_j}, e^{s_{j+1}}]) to
// ∫(e^{λ|u|^p} - 1) in log space. A finite modular shows shrinking windows.
fn window_modular_finite(profile: &RadialProfile, p: f64, lambda: f64, dim: usize, side: Side) -> bool {
    let n = dim as f64;
    let c = sphere_area(dim);
    let sign = match side {
        Side::Origin => -1.0,
        Side::Infinity => 1.0,
    };
    // dr = r ds, weight c r^{N-1}: the measure is c e^{±N s} ds
    let log_integrand = |s: f64| -> f64 {
        let r = (sign * s).exp();
        let e = lambda * profile.value(r, dim).abs().powf(p);
        let log_f = if e < 30.0 { e.exp_m1().ln() } else { e + (-(-e).exp()).ln_1p() };
        log_f + c.ln() + sign * n * s
    };
    let width = 8.0;
    let windows: Vec<f64> = (1..=8)
        .map(|j| {
            let a = width * j as f64;
            // normalise by the window's peak to keep the quadrature in range
            let peak = log_integrand(a).max(log_integrand(a + width));
            let q = adaptive(|s| (log_integrand(s) - peak).exp(), a, a + width, 1e-12, 400);
            q.value.ln() + peak
        })
        .collect();
    windows.windows(2).skip(4).all(|w| w[1] < w[0] - 0.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use std::f64::consts::LN_2;

    fn indicator(value: f64) -> GridFunction {
        // measure one: |x| < 1/2 in one dimension
        GridFunction::sample(RadialProfile::Indicator { radius: 0.5, value }, GridSpec::full(1, 2.0, 64).unwrap()).unwrap()
    }

    #[test]
    fn indicator_modular_and_norm() {
        let u = indicator(1.0);
        assert!((orlicz_integral(&u, 1.0, 1.0).unwrap() - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        let n = luxemburg_norm(&u, 2.0, 1e-10).unwrap();
        assert!((n.value - LN_2.powf(-0.5)).abs() < 1e-8);
        assert!(n.bracket.0 <= n.value && n.value <= n.bracket.1);
        assert!(n.bracket.1 - n.bracket.0 <= 1e-10 * n.value.max(1.0));
        for q in [1.0, 2.0, 7.5] {
            assert!((lebesgue_norm(&u, q).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn log_power_norm_closed_form() {
        // 2λ/(1-λ) = 1 at λ = k^{-2} gives k = √3
        let u = GridFunction::sample(
            RadialProfile::LogPower { alpha: 1.0, p: 2.0 },
            GridSpec::full(1, 2.0, 4096).unwrap(),
        )
        .unwrap();
        let n = luxemburg_norm(&u, 2.0, 1e-10).unwrap();
        assert!((n.value - 3f64.sqrt()).abs() < 1e-5, "{n:?}");
        let at_norm = orlicz_integral(&u, 2.0, n.value.powi(-2)).unwrap();
        assert!((at_norm - 1.0).abs() < 1e-4);
    }

    #[test]
    fn zero_function() {
        let z = GridFunction::zeros(GridSpec::full(1, 2.0, 64).unwrap());
        assert_eq!(luxemburg_norm(&z, 2.0, 1e-8).unwrap().value, 0.0);
        assert_eq!(orlicz_integral(&z, 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(lebesgue_norm(&z, 2.0).unwrap(), 0.0);
        assert!(embedding_check(&z, 2.0, 4.0).unwrap().pass);
        assert!(exp_moment_bound_check(&z, 2.0, 2.0, 0.1, 1.0).unwrap().pass);
        assert!(l1linf_embed_check(&z, 2.0, 2.0).unwrap().pass);
    }

    #[test]
    fn gaussian_l2() {
        let u = GridFunction::sample(
            RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 },
            GridSpec::full(1, 16.0, 512).unwrap(),
        )
        .unwrap();
        let expected = (2.0 * std::f64::consts::PI).powf(0.25);
        assert!((lebesgue_norm(&u, 2.0).unwrap() - expected).abs() < 1e-10);
        assert!(l1linf_embed_check(&u, 2.0, 2.0).unwrap().pass);
    }

    #[test]
    fn embedding_examples() {
        let u = indicator(1.0);
        let c = embedding_check(&u, 2.0, 2.0).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-12 && (c.rhs - 1.201_122_5).abs() < 1e-6 && c.pass);
        let c = embedding_check(&u, 2.0, 4.0).unwrap();
        assert!((c.rhs - 2f64.powf(0.25) * LN_2.powf(-0.5)).abs() < 1e-7 && c.pass);
        assert!(embedding_check(&u, 4.0, 2.0).is_err());
    }

    #[test]
    fn exp_moment_examples() {
        let u = indicator(LN_2);
        let c = exp_moment_bound_check(&u, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((c.lhs - 1.0).abs() < 1e-12 && c.rhs == 1.0 && c.pass);
        let c = exp_moment_bound_check(&u, 1.0, 1.0, 0.5, 1.0).unwrap();
        assert!((c.lhs - (2f64.sqrt() - 1.0)).abs() < 1e-12 && (c.rhs - 0.5).abs() < 1e-15 && c.pass);
        assert!(matches!(
            exp_moment_bound_check(&u, 1.0, 2.0, 1.0, 1.0),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn membership_catalogue() {
        for dim in 1..=3 {
            let m = classify_membership(&RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, 2.0, dim).unwrap();
            assert_eq!(m.verdict, Verdict::ExpLpOnly);
            assert!((m.threshold.unwrap() - (dim as f64).powf(-0.5)).abs() < 1e-15);
            assert!(m.numeric_agrees && !m.bounded);
        }
        let m = classify_membership(&RadialProfile::LogPower { alpha: 1.0, p: 3.0 }, 2.0, 1).unwrap();
        assert!(m.verdict == Verdict::ExpLp0 && m.numeric_agrees);
        let m = classify_membership(&RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, 3.0, 1).unwrap();
        assert!(m.verdict == Verdict::NotExpLp && m.numeric_agrees);
        let m = classify_membership(&RadialProfile::LogLogPower { p: 2.0 }, 2.0, 2).unwrap();
        assert!(m.verdict == Verdict::ExpLp0 && !m.bounded && m.numeric_agrees);
        let m = classify_membership(&RadialProfile::PowerTail { r0: 1.5 }, 2.0, 3).unwrap();
        assert!(m.verdict == Verdict::ExpLp0 && m.lebesgue_excluded == Some(1.5) && m.numeric_agrees);
        let m = classify_membership(&RadialProfile::PowerTail { r0: 3.0 }, 2.0, 1).unwrap();
        assert!(m.verdict == Verdict::NotExpLp && m.numeric_agrees);
        let m = classify_membership(&RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }, 2.0, 1).unwrap();
        assert!(m.verdict == Verdict::ExpLp0 && m.threshold.is_none());
    }

    #[test]
    fn power_tail_misses_its_lebesgue_space() {
        let u = GridFunction::sample(RadialProfile::PowerTail { r0: 1.5 }, GridSpec::full(1, 8.0, 256).unwrap()).unwrap();
        assert_eq!(lebesgue_norm(&u, 1.5).unwrap(), f64::INFINITY);
        assert!(lebesgue_norm(&u, 2.0).unwrap().is_finite());
        assert!(luxemburg_norm(&u, 2.0, 1e-8).unwrap().value.is_finite());
    }
}
