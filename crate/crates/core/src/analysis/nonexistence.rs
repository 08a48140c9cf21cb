//! Heat flow of the singular datum `Φ_α = α(-log|x|)^{1/p}` (on `|x| < 1`)
//! and the power-law exponent of the exponential integral it feeds on the
//! annuli `√t/2 < |x| < √t`.

use std::f64::consts::PI;

use serde::Serialize;

use super::fit::linear_fit;
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;

const HEAT_TOL: f64 = 1e-12;

fn check_dim(dim: usize) -> Result<()> {
    if dim == 1 || dim == 3 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("closed-form radial kernel only for N = 1 or 3, got {dim}")))
    }
}

/// `(e^{tΔ}Φ_α)(x)` at `|x| = r`, by quadrature of the one-dimensional
/// (N = 1) or radial (N = 3) kernel against the profile.
pub fn phi_alpha_heat(alpha: f64, p: f64, dim: usize, t: f64, r: f64) -> Result<f64> {
    phi_alpha_heat_tol(alpha, p, dim, t, r, HEAT_TOL)
}

fn phi_alpha_heat_tol(alpha: f64, p: f64, dim: usize, t: f64, r: f64, tol: f64) -> Result<f64> {
    check_dim(dim)?;
    if !(alpha > 0.0 && p > 1.0 && t > 0.0 && r >= 0.0) {
        return Err(Error::DomainError(format!("need α > 0, p > 1, t > 0, r >= 0; got {alpha}, {p}, {t}, {r}")));
    }
    let g = |s: f64| if s > 0.0 && s < 1.0 { (-s.ln()).powf(1.0 / p) } else { 0.0 };
    let four_t = 4.0 * t;
    let kernel = |s: f64| -> f64 {
        let near = (-(r - s).powi(2) / four_t).exp();
        if dim == 1 {
            near + (-(r + s).powi(2) / four_t).exp()
        } else if r == 0.0 {
            // limit of s(e^{-(r-s)²/4t} - e^{-(r+s)²/4t})/r
            2.0 * s * s / t * near
        } else {
            s * near * -(-r * s / t).exp_m1() / r
        }
    };
    let width = 12.0 * t.sqrt();
    let mut cuts = vec![0.0, (r - width).max(0.0), r.min(1.0), (r + width).min(1.0), 1.0];
    cuts.retain(|c| (0.0..=1.0).contains(c));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += tanh_sinh(|s| g(s) * kernel(s), w[0], w[1], tol).value;
    }
    Ok(alpha * total / (PI * four_t).sqrt())
}

/// `(|x|²/t)^{N/2} e^{-9|x|²/(4t)} (-log 4|x|)^{1/p}`.
fn bound_shape(p: f64, dim: usize, t: f64, r: f64) -> f64 {
    let z = r * r / t;
    z.powf(dim as f64 / 2.0) * (-2.25 * z).exp() * (-(4.0 * r).ln()).powf(1.0 / p)
}

/// Infimum of `(e^{tΔ}Φ₁)/shape` over a fixed reference set of annulus points.
pub fn calibrate_lower_bound(p: f64, dim: usize) -> Result<f64> {
    calibrate_with_tol(p, dim, HEAT_TOL)
}

fn calibrate_with_tol(p: f64, dim: usize, tol: f64) -> Result<f64> {
    let mut c = f64::INFINITY;
    for e in 2..=6 {
        let t = 10f64.powi(-e);
        for j in 0..5 {
            let r = (0.55 + 0.1 * j as f64) * t.sqrt();
            c = c.min(phi_alpha_heat_tol(1.0, p, dim, t, r, tol)? / bound_shape(p, dim, t, r));
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBound {
    pub computed: f64,
    pub bound: f64,
    /// `computed / bound`.
    pub ratio: f64,
    pub c_cal: f64,
    /// Change of the ratio when the quadrature tolerance is tightened 100-fold.
    pub refinement_drift: f64,
    pub pass: bool,
}

/// The lower bound `Cα(|x|²/t)^{N/2} e^{-9|x|²/4t}(-log 4|x|)^{1/p}` on the
/// annulus, with `C` calibrated once per `(p, N)`.
pub fn phi_alpha_lower_bound(alpha: f64, p: f64, dim: usize, t: f64, r: f64) -> Result<LowerBound> {
    check_dim(dim)?;
    let st = t.sqrt();
    if !(t > 0.0 && r < 0.25 && r > 0.5 * st && r < st) {
        return Err(Error::DomainError(format!("|x| = {r} outside the annulus (√t/2, √t) ∩ (0, 1/4) for t = {t}")));
    }
    let shape = bound_shape(p, dim, t, r);
    let c_cal = calibrate_lower_bound(p, dim)?;
    let computed = phi_alpha_heat(alpha, p, dim, t, r)?;
    let bound = c_cal * alpha * shape;
    let coarse = phi_alpha_heat_tol(alpha, p, dim, t, r, 1e-10)? / (calibrate_with_tol(p, dim, 1e-10)? * alpha * shape);
    let ratio = computed / bound;
    let refinement_drift = (ratio - coarse).abs();
    Ok(LowerBound { computed, bound, ratio, c_cal, refinement_drift, pass: ratio >= 0.5 && refinement_drift < 1e-6 })
}

/// Tabulated `e^{tΔ}Φ₁` on the annuli; `Φ_α` is linear in `α`, so one table
/// serves every `α` and `λ`.
#[derive(Debug, Clone)]
pub struct DivergenceProbe {
    p: f64,
    dim: usize,
    t_grid: Vec<f64>,
    /// Midpoints `s ∈ (1/2, 1)` of the annulus in units of `√t`.
    s_nodes: Vec<f64>,
    /// `(e^{tΔ}Φ₁)^p` per time, per node.
    psi_p: Vec<Vec<f64>>,
}

impl DivergenceProbe {
    /// `n` midpoint cells across each annulus.
    pub fn new(p: f64, dim: usize, t_grid: &[f64], n: usize) -> Result<Self> {
        check_dim(dim)?;
        if t_grid.len() < 3 || n < 2 {
            return Err(Error::PreconditionViolated("need >= 3 times and >= 2 annulus cells".into()));
        }
        let geometric = t_grid.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0);
        if !geometric || t_grid[0] >= 1.0 / 16.0 {
            return Err(Error::PreconditionViolated("times must decrease, stay positive and below 1/16".into()));
        }
        let s_nodes: Vec<f64> = (0..n).map(|j| 0.5 + 0.5 * (j as f64 + 0.5) / n as f64).collect();
        let psi_p = t_grid
            .iter()
            .map(|t| {
                s_nodes
                    .iter()
                    .map(|s| Ok(phi_alpha_heat(1.0, p, dim, *t, s * t.sqrt())?.powf(p)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { p, dim, t_grid: t_grid.to_vec(), s_nodes, psi_p })
    }

    /// `log I(t)` for each time, `I(t) = ∫_{annulus} exp(λ(e^{tΔ}Φ_α)^p) dx`.
    pub fn log_integrals(&self, alpha: f64, lambda: f64) -> Vec<f64> {
        let omega = if self.dim == 1 { 2.0 } else { 4.0 * PI };
        let n = self.s_nodes.len() as f64;
        let coef = lambda * alpha.powf(self.p);
        self.t_grid
            .iter()
            .zip(&self.psi_p)
            .map(|(t, row)| {
                let logs: Vec<f64> = row
                    .iter()
                    .zip(&self.s_nodes)
                    .map(|(v, s)| coef * v + (self.dim as f64 - 1.0) * s.ln())
                    .collect();
                let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
                omega.ln() + 0.5 * self.dim as f64 * t.ln() + (0.5 / n).ln() + top + sum.ln()
            })
            .collect()
    }

    pub fn slope(&self, alpha: f64, lambda: f64) -> f64 {
        let lt: Vec<f64> = self.t_grid.iter().map(|t| t.ln()).collect();
        linear_fit(&lt, &self.log_integrals(alpha, lambda)).0
    }

    /// `α` at which the fitted slope crosses `-1`, by bisection.
    pub fn alpha_threshold(&self, lambda: f64) -> Result<f64> {
        let mut lo = 1e-6;
        let mut hi = 1.0;
        while self.slope(hi, lambda) > -1.0 {
            hi *= 2.0;
            if hi > 1e6 {
                return Err(Error::BracketFailure("slope never reaches -1".into()));
            }
        }
        if self.slope(lo, lambda) <= -1.0 {
            return Err(Error::BracketFailure("slope below -1 for vanishing α".into()));
        }
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if self.slope(mid, lambda) > -1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi / lo - 1.0 < 1e-13 {
                break;
            }
        }
        Ok((lo * hi).sqrt())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceReport {
    pub slope: f64,
    pub diverges: bool,
}

/// Slope of `log I(t)` against `log t`; `∫₀ I dt = ∞` when it is `≤ -1`
/// (within 0.05).
pub fn divergence_exponent(
    alpha: f64,
    p: f64,
    lambda: f64,
    dim: usize,
    t_grid: &[f64],
    n: usize,
) -> Result<DivergenceReport> {
    if !(alpha > 0.0 && lambda > 0.0) {
        return Err(Error::DomainError(format!("need α, λ > 0, got {alpha}, {lambda}")));
    }
    let slope = DivergenceProbe::new(p, dim, t_grid, n)?.slope(alpha, lambda);
    Ok(DivergenceReport { slope, diverges: slope <= -1.0 + 0.05 })
}

/// `((N+2)/(Cλ))^{1/p}` with `C = (C_cal m_N)^p`, where `m_N` is the least
/// value of `z^{N/2}e^{-9z/4}` on `z ∈ [1/4, 1]`; a sufficient threshold.
pub fn alpha0_formula(c_cal: f64, p: f64, dim: usize, lambda: f64) -> f64 {
    let shape = |z: f64| z.powf(dim as f64 / 2.0) * (-2.25 * z).exp();
    let m_n = shape(0.25).min(shape(1.0));
    let c = (c_cal * m_n).powf(p);
    ((dim as f64 + 2.0) / (c * lambda)).powf(1.0 / p)
}

/// Geometric times `10^{-2}, …, 10^{-2-(count-1)/2}`.
pub fn default_t_grid(count: usize) -> Vec<f64> {
    (0..count).map(|k| 10f64.powf(-2.0 - 0.5 * k as f64)).collect()
}
