//! Exponent bookkeeping for the small-data global existence argument.
//!
//! With `σ = 1/(m-1) - N/(2a)` the free constant is fixed as
//! `c = ½ min(m-1, (1-σ)/σ)` and `θ_k = c/(pk+m-1)`, which makes the Hölder
//! exponent `q` independent of `k`: `1/q = (2/N)(1 - σc)`.

use serde::Serialize;

use super::special::log_gamma;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSet {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub a: f64,
    pub sigma: f64,
    pub c: f64,
    pub q: f64,
    pub r: f64,
}

impl ParamSet {
    fn power(&self, k: usize) -> f64 {
        self.p * k as f64 + self.m - 1.0
    }

    pub fn theta(&self, k: usize) -> f64 {
        self.c / self.power(k)
    }

    /// From `(1-θ_k)/ρ_k = 2/(N(pk+m-1)) - 2θ_k/(N(m-1))`.
    pub fn rho(&self, k: usize) -> f64 {
        let n = self.n as f64;
        let th = self.theta(k);
        let rhs = 2.0 / (n * self.power(k)) - 2.0 * th / (n * (self.m - 1.0));
        (1.0 - th) / rhs
    }
}

/// Input hypotheses; one message per violation.
pub fn hypothesis_failures(n: usize, p: f64, m: f64, a: f64) -> Vec<String> {
    let nf = n as f64;
    let mut bad = Vec::new();
    if !(p > 1.0) {
        bad.push(format!("p = {p} must exceed 1"));
    }
    if !(m >= p) {
        bad.push(format!("m = {m} must be >= p = {p}"));
    }
    if !(a > nf * (m - 1.0) / 2.0) {
        bad.push(format!("a = {a} must exceed N(m-1)/2 = {}", nf * (m - 1.0) / 2.0));
    }
    if !(a > nf / 2.0) {
        bad.push(format!("a = {a} must exceed N/2"));
    }
    if !(p > 1.0 && nf > 2.0 * p / (p - 1.0)) {
        bad.push(format!("N = {n} must exceed 2p/(p-1)"));
    }
    if m < 2.0 && !(a < nf * (m - 1.0) / 2.0 / (2.0 - m)) {
        bad.push(format!("a = {a} must stay below N(m-1)/(2(2-m)) when m < 2"));
    }
    let sigma = 1.0 / (m - 1.0) - nf / (2.0 * a);
    if !(sigma > 0.0 && sigma < 1.0) {
        bad.push(format!("σ = {sigma} must lie in (0, 1)"));
    }
    bad
}

pub fn select_params(n: usize, p: f64, m: f64, a: f64) -> Result<ParamSet> {
    let bad = hypothesis_failures(n, p, m, a);
    if !bad.is_empty() {
        return Err(Error::HypothesisViolated(bad));
    }
    let nf = n as f64;
    let sigma = 1.0 / (m - 1.0) - nf / (2.0 * a);
    let c = 0.5 * (m - 1.0).min((1.0 - sigma) / sigma);
    let q = 1.0 / ((2.0 / nf) * (1.0 - sigma * c));
    let r = 1.0 / (1.0 / a + 1.0 / q);
    Ok(ParamSet { n, p, m, a, sigma, c, q, r })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub statement: &'static str,
    pub pass: bool,
    /// First `k` at which the condition fails.
    pub first_failure: Option<usize>,
    /// Largest violation (or residual) seen.
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamReport {
    pub params: ParamSet,
    pub k_max: usize,
    pub conditions: Vec<ConditionResult>,
}

impl ParamReport {
    pub fn condition(&self, name: &str) -> Option<&ConditionResult> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Every condition other than the growth bound on `(pk+m-1)(1-θ_k)(1+ρ_k)/(pρ_k)`.
    pub fn construction_conditions_pass(&self) -> bool {
        self.conditions.iter().filter(|c| c.name != GROWTH).all(|c| c.pass)
    }
}

const GROWTH: &str = "growth_exponent";
const IDENTITY_TOL: f64 = 1e-12;

struct Tracker {
    name: &'static str,
    statement: &'static str,
    first_failure: Option<usize>,
    worst: f64,
}

impl Tracker {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Self { name, statement, first_failure: None, worst: 0.0 }
    }

    /// Records `violation` (≤ 0 means satisfied).
    fn see(&mut self, k: usize, violation: f64) {
        if !(violation <= 0.0) && self.first_failure.is_none() {
            self.first_failure = Some(k);
        }
        if violation.is_nan() || violation > self.worst {
            self.worst = violation;
        }
    }

    fn finish(self) -> ConditionResult {
        ConditionResult {
            name: self.name,
            statement: self.statement,
            pass: self.first_failure.is_none(),
            first_failure: self.first_failure,
            worst: self.worst,
        }
    }
}

/// Evaluates every conclusion of the construction for `k = 0..=k_max`.
pub fn verify_params(ps: &ParamSet, k_max: usize) -> Result<ParamReport> {
    if k_max < 10 {
        return Err(Error::PreconditionViolated(format!("k_max = {k_max} must be >= 10")));
    }
    let nf = ps.n as f64;
    let (p, m, a, q, r, sigma) = (ps.p, ps.m, ps.a, ps.q, ps.r, ps.sigma);
    let mut dim = Tracker::new("dimension", "N > 2p/(p-1)");
    dim.see(0, 2.0 * p / (p - 1.0) - nf);
    let mut upper = Tracker::new("a_upper", "a < N(m-1)/(2(2-m)_+)");
    if m < 2.0 {
        upper.see(0, a - nf * (m - 1.0) / 2.0 / (2.0 - m));
    }
    let mut r_range = Tracker::new("r_range", "1 <= r <= a");
    r_range.see(0, (1.0 - r).max(r - a));
    let mut holder = Tracker::new("holder_q", "q >= 1 and 1/r = 1/a + 1/q");
    holder.see(0, (1.0 - q).max((1.0 / r - 1.0 / a - 1.0 / q).abs() - IDENTITY_TOL));
    let mut beta_dim = Tracker::new("beta_dim", "(N/2)(1/r - 1/a) < 1");
    beta_dim.see(0, nf / 2.0 * (1.0 / r - 1.0 / a) - 1.0);

    let mut theta = Tracker::new("theta_interp", "0 < θ_k < 1 and 1/(q(pk+m-1)) = θ_k/a + (1-θ_k)/ρ_k");
    let mut rho = Tracker::new("rho_range", "p <= ρ_k < ∞");
    let mut beta_sigma = Tracker::new("beta_sigma", "σ[θ_k(pk+m-1) + 1] < 1");
    let mut balance = Tracker::new("beta_balance", "1 - (N/2)(1/r - 1/a) - σθ_k(pk+m-1) = 0");
    let mut theta_dec = Tracker::new("theta_vanishes", "θ_k decreases to 0");
    let mut rho_inc = Tracker::new("rho_diverges", "ρ_k increases to ∞");
    let mut growth = Tracker::new(GROWTH, "(pk+m-1)(1-θ_k)(1+ρ_k)/(pρ_k) <= k for k >= 1");
    for k in 0..=k_max {
        let pw = ps.power(k);
        let th = ps.theta(k);
        let rk = ps.rho(k);
        let identity = (1.0 / (q * pw) - th / a - (1.0 - th) / rk).abs();
        theta.see(k, (-th).max(th - 1.0).max(identity - IDENTITY_TOL));
        rho.see(k, if rk.is_finite() && rk > 0.0 { p - rk } else { f64::INFINITY });
        beta_sigma.see(k, sigma * (th * pw + 1.0) - 1.0);
        let res = (1.0 - nf / 2.0 * (1.0 / r - 1.0 / a) - sigma * th * pw).abs();
        balance.see(k, res - IDENTITY_TOL);
        if k > 0 {
            theta_dec.see(k, th - ps.theta(k - 1));
            rho_inc.see(k, ps.rho(k - 1) - rk);
            growth.see(k, pw * (1.0 - th) * (1.0 + rk) / (p * rk) - k as f64);
        }
    }
    // the limits: θ_k·(pk+m-1) is constant and ρ_k grows linearly
    theta_dec.see(k_max, ps.theta(k_max) - ps.theta(0) * ps.power(0) / ps.power(k_max) * (1.0 + 1e-12));
    let conditions = [dim, upper, r_range, holder, theta, rho, beta_dim, beta_sigma, balance, theta_dec, rho_inc, growth]
        .into_iter()
        .map(Tracker::finish)
        .collect();
    Ok(ParamReport { params: *ps, k_max, conditions })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaGrowth {
    /// `log g_k / k` for `k = 1..=k_max`.
    pub ratios: Vec<f64>,
    /// `exp(max_k log g_k / k)`.
    pub c_fit: f64,
    /// Change of the ratio over the last ten indices.
    pub tail_drift: f64,
    pub pass: bool,
}

/// `g_k = Γ(ρ_k/p + 1)^{(pk+m-1)(1-θ_k)/ρ_k} / k!` in log space; the bound
/// `g_k ≤ C^k` holds when `log g_k / k` stays bounded.
pub fn gamma_growth_check(ps: &ParamSet, k_max: usize) -> Result<GammaGrowth> {
    gamma_growth_of(|k| ps.rho(k), |k| ps.theta(k), ps.p, ps.m, k_max)
}

pub fn gamma_growth_of(
    rho: impl Fn(usize) -> f64,
    theta: impl Fn(usize) -> f64,
    p: f64,
    m: f64,
    k_max: usize,
) -> Result<GammaGrowth> {
    if k_max < 10 {
        return Err(Error::PreconditionViolated(format!("k_max = {k_max} must be >= 10")));
    }
    let mut ratios = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let kf = k as f64;
        let rk = rho(k);
        let expo = (p * kf + m - 1.0) * (1.0 - theta(k)) / rk;
        let log_g = expo * log_gamma(rk / p + 1.0)? - log_gamma(kf + 1.0)?;
        ratios.push(log_g / kf);
    }
    let max_ratio = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let last = ratios[k_max - 1];
    let tail_drift = last - ratios[k_max - 11];
    if !max_ratio.is_finite() || tail_drift > 0.5 {
        return Err(Error::OverflowDiverged { limit: max_ratio });
    }
    Ok(GammaGrowth { c_fit: max_ratio.exp(), pass: tail_drift.abs() < 0.1, ratios, tail_drift })
}
