//! The heat semigroup `e^{tΔ}` on the supported grids, its smoothing and
//! Orlicz estimates, the integrable envelope `κ`, and the probe of the
//! discontinuity at `t = 0` outside the closure of test functions.

use std::collections::HashMap;
use std::f64::consts::{LN_2, PI};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::analysis::special::{erf, erfc};
use crate::check::InequalityCheck;
use crate::error::{Error, Result};
use crate::grid::{Geometry, GridFunction, GridSpec, RadialProfile};
use crate::orlicz::{lebesgue_norm, luxemburg_norm, DEFAULT_TOL};
use crate::quad::adaptive;

/// Kernel weights below `e^{-KERNEL_CUTOFF}` of the peak are dropped.
const KERNEL_CUTOFF: f64 = 39.0;
/// Largest admissible kernel mass outside the periodic box.
pub const WRAP_LIMIT: f64 = 1e-8;
const CACHE_LIMIT: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemigroupMethod {
    /// Discrete Fourier multiplier `e^{-t|ξ|²}` on the periodised box.
    FourierPeriodic,
    /// Direct convolution with the Gaussian kernel on a line.
    LineQuadrature,
    /// Exact radial kernel in three dimensions.
    Radial3D,
}

impl SemigroupMethod {
    pub fn check_compatible(&self, spec: &GridSpec) -> Result<()> {
        let ok = match self {
            SemigroupMethod::FourierPeriodic => spec.geometry() == Geometry::Full,
            SemigroupMethod::LineQuadrature => spec.geometry() == Geometry::Full && spec.dim() == 1,
            SemigroupMethod::Radial3D => spec.geometry() == Geometry::Radial && spec.dim() == 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MethodMismatch(format!(
                "{self:?} cannot act on a {:?} grid in dimension {}",
                spec.geometry(),
                spec.dim()
            )))
        }
    }

    /// Natural method for a grid.
    pub fn for_spec(spec: &GridSpec) -> Result<Self> {
        match (spec.geometry(), spec.dim()) {
            (Geometry::Full, 1) => Ok(SemigroupMethod::LineQuadrature),
            (Geometry::Full, _) => Ok(SemigroupMethod::FourierPeriodic),
            (Geometry::Radial, 3) => Ok(SemigroupMethod::Radial3D),
            (Geometry::Radial, n) => Err(Error::MethodMismatch(format!("no radial kernel in dimension {n}"))),
        }
    }
}

enum Kernel {
    /// Symmetric Toeplitz weights `k[|i - j|]`.
    Toeplitz(Vec<f64>),
    /// Per output row: first input column and contiguous weights.
    Banded(Vec<(usize, Vec<f64>)>),
    /// Per-axis Fourier multipliers.
    Spectral(Vec<f64>),
}

/// `e^{tΔ}` on a fixed grid, caching one kernel per distinct time.
pub struct HeatPropagator {
    spec: GridSpec,
    method: SemigroupMethod,
    cache: Mutex<HashMap<u64, Arc<Kernel>>>,
    fft: Option<(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>,
}

impl std::fmt::Debug for HeatPropagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HeatPropagator").field("spec", &self.spec).field("method", &self.method).finish()
    }
}

impl HeatPropagator {
    pub fn new(spec: GridSpec, method: SemigroupMethod) -> Result<Self> {
        method.check_compatible(&spec)?;
        let fft = (method == SemigroupMethod::FourierPeriodic).then(|| {
            let mut planner = FftPlanner::new();
            let n = spec.points_per_axis();
            (planner.plan_fft_forward(n), planner.plan_fft_inverse(n))
        });
        Ok(Self { spec, method, cache: Mutex::new(HashMap::new()), fft })
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn method(&self) -> SemigroupMethod {
        self.method
    }

    /// `e^{tΔ}u`. The analytic descriptor of `u`, if any, supplies the part
    /// of the data outside the box on a line.
    pub fn apply(&self, u: &GridFunction, t: f64) -> Result<GridFunction> {
        if u.spec() != &self.spec {
            return Err(Error::MethodMismatch("grid differs from the propagator's".into()));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::DomainError(format!("time must be finite and >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(u.clone());
        }
        let kernel = self.kernel(t)?;
        let mut out = match kernel.as_ref() {
            Kernel::Toeplitz(k) => apply_toeplitz(k, u.values()),
            Kernel::Banded(rows) => apply_banded(rows, u.values()),
            Kernel::Spectral(m) => self.apply_spectral(m, u.values()),
        };
        if self.method == SemigroupMethod::LineQuadrature {
            if let Some(mix) = u.analytic() {
                add_exterior(&self.spec, t, &mut out, |r| mix.value(r, 1));
            }
        }
        GridFunction::new(self.spec, out)
    }

    fn kernel(&self, t: f64) -> Result<Arc<Kernel>> {
        if self.method == SemigroupMethod::FourierPeriodic {
            let mass = wrap_mass(&self.spec, t);
            if mass > WRAP_LIMIT {
                return Err(Error::WrapMassExceeded { mass, limit: WRAP_LIMIT });
            }
        }
        let key = t.to_bits();
        if let Some(k) = self.cache.lock().expect("kernel cache poisoned").get(&key) {
            return Ok(Arc::clone(k));
        }
        let kernel = Arc::new(match self.method {
            SemigroupMethod::LineQuadrature => Kernel::Toeplitz(line_kernel(&self.spec, t)),
            SemigroupMethod::Radial3D => Kernel::Banded(radial_kernel(&self.spec, t)),
            SemigroupMethod::FourierPeriodic => Kernel::Spectral(fourier_multiplier(&self.spec, t)),
        });
        let mut cache = self.cache.lock().expect("kernel cache poisoned");
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, Arc::clone(&kernel));
        Ok(kernel)
    }

    fn apply_spectral(&self, multiplier: &[f64], values: &[f64]) -> Vec<f64> {
        let (fwd, inv) = self.fft.as_ref().expect("spectral kernel without FFT plans");
        let n = self.spec.points_per_axis();
        let dim = self.spec.dim();
        let mut data: Vec<Complex<f64>> = values.iter().map(|v| Complex::new(*v, 0.0)).collect();
        for axis in 0..dim {
            transform_axis(&mut data, n, dim, axis, fwd.as_ref());
        }
        for (idx, z) in data.iter_mut().enumerate() {
            let m = self.spec.unravel(idx);
            let factor: f64 = (0..dim).map(|a| multiplier[m[a]]).product();
            *z *= factor;
        }
        for axis in 0..dim {
            transform_axis(&mut data, n, dim, axis, inv.as_ref());
        }
        let scale = (n as f64).powi(dim as i32);
        data.into_iter().map(|z| z.re / scale).collect()
    }
}

/// `e^{tΔ}u` with a one-off propagator.
pub fn apply_semigroup(u: &GridFunction, t: f64, method: SemigroupMethod) -> Result<GridFunction> {
    HeatPropagator::new(*u.spec(), method)?.apply(u, t)
}

fn transform_axis(data: &mut [Complex<f64>], n: usize, dim: usize, axis: usize, fft: &dyn Fft<f64>) {
    let stride = n.pow((dim - 1 - axis) as u32);
    let block = stride * n;
    let mut line = vec![Complex::new(0.0, 0.0); n];
    for start in (0..data.len()).step_by(block) {
        for offset in 0..stride {
            let base = start + offset;
            for (k, z) in line.iter_mut().enumerate() {
                *z = data[base + k * stride];
            }
            fft.process(&mut line);
            for (k, z) in line.iter().enumerate() {
                data[base + k * stride] = *z;
            }
        }
    }
}

/// Heat-kernel mass outside the box, `1 - erf(L/√(4t))^N`.
pub fn wrap_mass(spec: &GridSpec, t: f64) -> f64 {
    let inside = 1.0 - erfc(spec.half_width() / (4.0 * t).sqrt());
    1.0 - inside.powi(spec.dim() as i32)
}

fn band(spec: &GridSpec, t: f64) -> usize {
    let reach = (4.0 * t * KERNEL_CUTOFF).sqrt() / spec.spacing();
    (reach.ceil() as usize + 1).min(spec.len())
}

// Point kernel h·G_t(jh) once the kernel is resolved (t ≥ h²); otherwise the
// exact cell integrals of G_t against a piecewise-constant function.
fn line_kernel(spec: &GridSpec, t: f64) -> Vec<f64> {
    let h = spec.spacing();
    let b = band(spec, t).min(spec.points_per_axis() - 1);
    let s = (4.0 * t).sqrt();
    (0..=b)
        .map(|d| {
            let x = d as f64 * h;
            if t >= h * h {
                h * (-x * x / (4.0 * t)).exp() / (PI * 4.0 * t).sqrt()
            } else if d == 0 {
                erf(0.5 * h / s)
            } else {
                (0.5 * (erfc((x - 0.5 * h) / s) - erfc((x + 0.5 * h) / s))).max(0.0)
            }
        })
        .collect()
}

fn apply_toeplitz(k: &[f64], u: &[f64]) -> Vec<f64> {
    let n = u.len();
    let b = k.len() - 1;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            let mut acc = 0.0;
            for (j, uj) in u.iter().enumerate().take(hi + 1).skip(lo) {
                acc += k[i.abs_diff(j)] * uj;
            }
            acc
        })
        .collect()
}

fn apply_banded(rows: &[(usize, Vec<f64>)], u: &[f64]) -> Vec<f64> {
    rows.par_iter()
        .map(|(j0, w)| w.iter().zip(&u[*j0..]).map(|(a, b)| a * b).sum())
        .collect()
}

// (e^{tΔ}u)(r) = (r√(4πt))^{-1} ∫₀^∞ s u(s) e^{-(r-s)²/4t}(1 - e^{-rs/t}) ds
fn radial_kernel(spec: &GridSpec, t: f64) -> Vec<(usize, Vec<f64>)> {
    let n = spec.len();
    let h = spec.spacing();
    let b = band(spec, t);
    let small = t < h * h;
    let sq = (4.0 * t).sqrt();
    let spt = (PI * t).sqrt();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let r = spec.axis_coord(i);
            let j0 = i.saturating_sub(b);
            let j1 = (i + b).min(n - 1);
            let norm = 1.0 / (r * (4.0 * PI * t).sqrt());
            let w = (j0..=j1)
                .map(|j| {
                    let s = spec.axis_coord(j);
                    if small {
                        // antiderivative of s[e^{-(s-r)²/4t} - e^{-(s+r)²/4t}]
                        let anti = |x: f64| {
                            -2.0 * t * (-(x - r).powi(2) / (4.0 * t)).exp()
                                + 2.0 * t * (-(x + r).powi(2) / (4.0 * t)).exp()
                                + r * spt * (erf((x - r) / sq) + erf((x + r) / sq))
                        };
                        (norm * (anti(s + 0.5 * h) - anti(s - 0.5 * h))).max(0.0)
                    } else {
                        let bracket = (-(r - s).powi(2) / (4.0 * t)).exp() * -(-r * s / t).exp_m1();
                        norm * h * s * bracket
                    }
                })
                .collect();
            (j0, w)
        })
        .collect()
}

fn fourier_multiplier(spec: &GridSpec, t: f64) -> Vec<f64> {
    let n = spec.points_per_axis();
    let period = 2.0 * spec.half_width();
    (0..n)
        .map(|k| {
            let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            let xi = 2.0 * PI * kk / period;
            (-t * xi * xi).exp()
        })
        .collect()
}

// Contribution of the data on |y| > L to the line convolution.
fn add_exterior<F: Fn(f64) -> f64 + Sync>(spec: &GridSpec, t: f64, out: &mut [f64], f: F) {
    let l = spec.half_width();
    let reach = (4.0 * t * KERNEL_CUTOFF).sqrt();
    let norm = 1.0 / (4.0 * PI * t).sqrt();
    out.par_iter_mut().enumerate().for_each(|(i, o)| {
        let x = spec.axis_coord(i);
        let mut acc = 0.0;
        if x + reach > l {
            let q = adaptive(|y| f(y) * (-(x - y).powi(2) / (4.0 * t)).exp(), l, x + reach, 1e-14, 200);
            acc += q.value;
        }
        if x - reach < -l {
            let q = adaptive(|y| f(-y) * (-(x - y).powi(2) / (4.0 * t)).exp(), x - reach, -l, 1e-14, 200);
            acc += q.value;
        }
        *o += norm * acc;
    });
}

/// `‖e^{tΔ}u‖_ρ / (t^{-(N/2)(1/r - 1/ρ)} ‖u‖_r)` with its verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothingRatio {
    pub ratio: f64,
    pub pass: bool,
}

pub fn smoothing_ratio(u: &GridFunction, t: f64, r: f64, rho: f64, method: SemigroupMethod) -> Result<SmoothingRatio> {
    if !(1.0 <= r && r <= rho) || !(t > 0.0) {
        return Err(Error::PreconditionViolated(format!("needs 1 <= r <= ρ and t > 0, got r = {r}, ρ = {rho}, t = {t}")));
    }
    let v = apply_semigroup(u, t, method)?;
    Ok(smoothing_ratio_of(u, &v, t, r, rho)?)
}

pub fn smoothing_ratio_of(u: &GridFunction, v: &GridFunction, t: f64, r: f64, rho: f64) -> Result<SmoothingRatio> {
    let n = u.spec().dim() as f64;
    let lhs = lebesgue_norm(v, rho)?;
    let inv = |x: f64| if x.is_infinite() { 0.0 } else { 1.0 / x };
    let rhs = t.powf(-0.5 * n * (inv(r) - inv(rho))) * lebesgue_norm(u, r)?;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(SmoothingRatio { ratio, pass: ratio <= 1.0 + 1e-6 })
}

/// The three Orlicz estimates for `e^{tΔ}φ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrliczSemigroupReport {
    /// `‖e^{tΔ}φ‖_{exp L^p} ≤ ‖φ‖_{exp L^p}`
    pub contraction: InequalityCheck,
    /// `≤ t^{-N/2q} (log(t^{-N/2} + 1))^{-1/p} ‖φ‖_q`
    pub lq_bound: InequalityCheck,
    /// `≤ (log 2)^{-1/p} (t^{-N/2r} ‖φ‖_r + ‖φ‖_q)`
    pub split_bound: InequalityCheck,
}

impl OrliczSemigroupReport {
    pub fn all_pass(&self) -> bool {
        self.contraction.pass && self.lq_bound.pass && self.split_bound.pass
    }
}

const ORLICZ_SLACK: f64 = 1e-4;

pub fn orlicz_semigroup_check(
    u: &GridFunction,
    t: f64,
    p: f64,
    q: f64,
    r: f64,
    method: SemigroupMethod,
) -> Result<OrliczSemigroupReport> {
    let v = apply_semigroup(u, t, method)?;
    orlicz_semigroup_check_of(u, &v, t, p, q, r)
}

/// Same as [`orlicz_semigroup_check`] with `e^{tΔ}u` already computed.
pub fn orlicz_semigroup_check_of(
    u: &GridFunction,
    v: &GridFunction,
    t: f64,
    p: f64,
    q: f64,
    r: f64,
) -> Result<OrliczSemigroupReport> {
    if !(1.0 <= q && q <= p) || !(r >= 1.0) || !(t > 0.0) {
        return Err(Error::PreconditionViolated(format!("needs 1 <= q <= p, r >= 1, t > 0; got p = {p}, q = {q}, r = {r}, t = {t}")));
    }
    let n = u.spec().dim() as f64;
    let lhs = luxemburg_norm(v, p, DEFAULT_TOL)?.value;
    let phi = luxemburg_norm(u, p, DEFAULT_TOL)?.value;
    let phi_q = lebesgue_norm(u, q)?;
    let phi_r = lebesgue_norm(u, r)?;
    let tn = t.powf(-0.5 * n);
    let lq = t.powf(-0.5 * n / q) * (tn.ln_1p()).powf(-1.0 / p) * phi_q;
    let tr = if r.is_infinite() { 1.0 } else { t.powf(-0.5 * n / r) };
    let split = LN_2.powf(-1.0 / p) * (tr * phi_r + phi_q);
    Ok(OrliczSemigroupReport {
        contraction: InequalityCheck::new(lhs, phi, ORLICZ_SLACK),
        lq_bound: InequalityCheck::new(lhs, lq, ORLICZ_SLACK),
        split_bound: InequalityCheck::new(lhs, split, ORLICZ_SLACK),
    })
}

fn kappa_hypotheses(p: f64, dim: usize, r: f64) -> Result<()> {
    let n = dim as f64;
    let mut failed = Vec::new();
    if !(p > 1.0) {
        failed.push(format!("p = {p} must exceed 1"));
    } else if !(n > 2.0 * p / (p - 1.0)) {
        failed.push(format!("N = {dim} must exceed 2p/(p-1) = {}", 2.0 * p / (p - 1.0)));
    }
    if !(r > 0.5 * n) {
        failed.push(format!("r = {r} must exceed N/2 = {}", 0.5 * n));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(failed))
    }
}

fn kappa_branches(t: f64, p: f64, n: f64, r: f64) -> (f64, f64) {
    let c = LN_2.powf(-1.0 / p);
    let first = t.powf(-0.5 * n / r) + 1.0;
    // log(t^{-N/2} + 1) evaluated without overflow for tiny t
    let log_term = {
        let e = -0.5 * n * t.ln();
        if e > 30.0 {
            e + (-e).exp().ln_1p()
        } else {
            e.exp().ln_1p()
        }
    };
    let second = (-0.5 * n * t.ln() - log_term.ln() / p).exp();
    (c * first, c * second)
}

/// `κ(t) = (log 2)^{-1/p} min{t^{-N/2r} + 1, t^{-N/2}(log(t^{-N/2} + 1))^{-1/p}}`.
pub fn kappa(t: f64, p: f64, dim: usize, r: f64) -> Result<f64> {
    kappa_hypotheses(p, dim, r)?;
    if !(t > 0.0) {
        return Err(Error::DomainError(format!("κ needs t > 0, got {t}")));
    }
    let (a, b) = kappa_branches(t, p, dim as f64, r);
    Ok(a.min(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaIntegral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// `∫₀^T κ(t) dt` (`T = ∞` allowed). The integrable endpoint behaviours
/// `t^{-N/2r}` at 0 and `t^{-(N/2)(1-1/p)}` at ∞ are removed by power maps,
/// and the range is split where the two branches of the minimum cross.
pub fn kappa_integral(p: f64, dim: usize, r: f64, t_end: f64, tol: f64) -> Result<KappaIntegral> {
    kappa_hypotheses(p, dim, r)?;
    let n = dim as f64;
    let k = |t: f64| {
        let (a, b) = kappa_branches(t, p, n, r);
        a.min(b)
    };
    let diff = |t: f64| {
        let (a, b) = kappa_branches(t, p, n, r);
        a - b
    };
    let mut cuts = Vec::new();
    let grid: Vec<f64> = (0..=2400).map(|i| 10f64.powf(-12.0 + 24.0 * i as f64 / 2400.0)).collect();
    for w in grid.windows(2) {
        if diff(w[0]).signum() != diff(w[1]).signum() {
            let (mut lo, mut hi) = (w[0], w[1]);
            for _ in 0..200 {
                let mid = (lo * hi).sqrt();
                if diff(mid).signum() == diff(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
    }
    cuts.retain(|c| *c < t_end);
    let first = cuts.first().copied().unwrap_or(t_end.min(1.0));
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    let mut add = |q: crate::quad::Quadrature| {
        value += q.value;
        error += q.error;
        converged &= q.converged;
    };

    // [0, first] through t = first·s^m with m(1 - N/2r) = 1
    let m0 = 1.0 / (1.0 - 0.5 * n / r);
    add(adaptive(|s| if s <= 0.0 { 0.0 } else { k(first * s.powf(m0)) * first * m0 * s.powf(m0 - 1.0) }, 0.0, 1.0, tol, 20_000));
    let mut pieces = cuts.clone();
    if pieces.is_empty() {
        pieces.push(first);
    }
    let last = if t_end.is_finite() { t_end } else { pieces.last().copied().unwrap().max(1.0) };
    if !t_end.is_finite() && pieces.last().copied().unwrap() < last {
        pieces.push(last);
    } else if t_end.is_finite() && pieces.last().copied().unwrap() < t_end {
        pieces.push(t_end);
    }
    for w in pieces.windows(2) {
        add(adaptive(&k, w[0], w[1], tol, 20_000));
    }
    if !t_end.is_finite() {
        // [last, ∞) through t = last·s^{-m} with m((N/2)(1 - 1/p) - 1) = 1
        let m1 = 1.0 / (0.5 * n * (1.0 - 1.0 / p) - 1.0);
        add(adaptive(
            |s| if s <= 0.0 { 0.0 } else { k(last * s.powf(-m1)) * last * m1 * s.powf(-m1 - 1.0) },
            0.0,
            1.0,
            tol,
            20_000,
        ));
    }
    Ok(KappaIntegral { value, error, converged: converged && value.is_finite() })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscontinuityProbe {
    /// `(t, ‖e^{tΔ}u - u‖_{exp L^p})`
    pub norms: Vec<(f64, f64)>,
    /// Smallest norm over the positive times.
    pub floor: f64,
}

/// `‖e^{tΔ}u - u‖_{exp L^p}` along `t_list` for `u` sampled from `profile`.
pub fn discontinuity_probe(
    profile: &RadialProfile,
    p: f64,
    t_list: &[f64],
    spec: GridSpec,
    method: SemigroupMethod,
) -> Result<DiscontinuityProbe> {
    let u = GridFunction::sample(*profile, spec)?;
    let prop = HeatPropagator::new(spec, method)?;
    let norms = t_list
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return Ok((t, 0.0));
            }
            let v = prop.apply(&u, t)?;
            let d = v.sub(&u)?;
            Ok((t, luxemburg_norm(&d, p, DEFAULT_TOL)?.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let floor = norms.iter().filter(|(t, _)| *t > 0.0).map(|(_, v)| *v).fold(f64::INFINITY, f64::min);
    Ok(DiscontinuityProbe { norms, floor })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_line(n: usize, l: f64) -> GridFunction {
        GridFunction::from_radial_fn(GridSpec::full(1, l, n).unwrap(), |x| (-x * x / 4.0).exp()).unwrap()
    }

    fn exact(t: f64, x: f64) -> f64 {
        (1.0 + t).powf(-0.5) * (-x * x / (4.0 * (1.0 + t))).exp()
    }

    fn max_err(v: &GridFunction, f: impl Fn(f64) -> f64) -> f64 {
        v.values()
            .iter()
            .enumerate()
            .map(|(i, y)| (y - f(v.spec().radius(i))).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn gaussian_self_similarity_line() {
        let u = gaussian_line(512, 16.0);
        for t in [0.1, 1.0, 10.0] {
            let v = apply_semigroup(&u, t, SemigroupMethod::LineQuadrature).unwrap();
            assert!(max_err(&v, |x| exact(t, x)) < 1e-8, "t = {t}");
        }
        let v = apply_semigroup(&u, 1.0, SemigroupMethod::FourierPeriodic).unwrap();
        assert!(max_err(&v, |x| exact(1.0, x)) < 1e-8);
    }

    #[test]
    fn gaussian_self_similarity_radial() {
        let spec = GridSpec::radial(3, 24.0, 480).unwrap();
        let u = GridFunction::from_radial_fn(spec, |r| (-r * r / 4.0).exp()).unwrap();
        let v = apply_semigroup(&u, 1.0, SemigroupMethod::Radial3D).unwrap();
        let e = max_err(&v, |r| 2f64.powf(-1.5) * (-r * r / 8.0).exp());
        assert!(e < 1e-8, "{e}");
    }

    #[test]
    fn fourier_in_two_dimensions() {
        let spec = GridSpec::full(2, 16.0, 128).unwrap();
        let u = GridFunction::from_radial_fn(spec, |r| (-r * r / 4.0).exp()).unwrap();
        let v = apply_semigroup(&u, 1.0, SemigroupMethod::FourierPeriodic).unwrap();
        assert!(max_err(&v, |r| 0.5 * (-r * r / 8.0).exp()) < 1e-8);
    }

    #[test]
    fn identity_at_zero_and_mismatch() {
        let u = gaussian_line(64, 8.0);
        assert_eq!(apply_semigroup(&u, 0.0, SemigroupMethod::LineQuadrature).unwrap(), u);
        assert!(matches!(
            apply_semigroup(&u, 1.0, SemigroupMethod::Radial3D),
            Err(Error::MethodMismatch(_))
        ));
        assert!(matches!(
            apply_semigroup(&u, 10.0, SemigroupMethod::FourierPeriodic),
            Err(Error::WrapMassExceeded { .. })
        ));
    }

    #[test]
    fn small_time_cell_integrals_conserve_mass() {
        let u = gaussian_line(384, 12.0);
        let h = u.spec().spacing();
        let v = apply_semigroup(&u, 0.1 * h * h, SemigroupMethod::LineQuadrature).unwrap();
        assert!((v.integrate() - u.integrate()).abs() < 1e-12, "{} {}", v.integrate(), u.integrate());
        assert!(max_err(&v, |x| (-x * x / 4.0).exp()) < 0.01);
    }

    #[test]
    fn smoothing_examples() {
        let u = gaussian_line(512, 16.0);
        let s = smoothing_ratio(&u, 1.0, 1.0, f64::INFINITY, SemigroupMethod::LineQuadrature).unwrap();
        let expected = 2f64.powf(-0.5) / (2.0 * PI.sqrt());
        // the grid maximum sits at the cell centre x = h/2, not at 0
        assert!((s.ratio - expected).abs() < 1e-4 && s.pass, "{s:?}");
        let s = smoothing_ratio(&u, 0.01, 1.0, f64::INFINITY, SemigroupMethod::LineQuadrature).unwrap();
        assert!((s.ratio - 0.1 * 1.01f64.powf(-0.5) / (2.0 * PI.sqrt())).abs() < 1e-4 && s.pass, "{s:?}");
        let s = smoothing_ratio(&u, 0.3, 2.0, 2.0, SemigroupMethod::LineQuadrature).unwrap();
        assert!(s.ratio <= 1.0 && s.pass);
    }

    #[test]
    fn orlicz_estimates_on_indicator() {
        let u = GridFunction::sample(
            RadialProfile::Indicator { radius: 0.5, value: 1.0 },
            GridSpec::full(1, 16.0, 1024).unwrap(),
        )
        .unwrap();
        let rep = orlicz_semigroup_check(&u, 1.0, 2.0, 1.0, 2.0, SemigroupMethod::LineQuadrature).unwrap();
        assert!(rep.all_pass(), "{rep:?}");
        let z = GridFunction::zeros(*u.spec());
        let rep = orlicz_semigroup_check(&z, 1.0, 2.0, 1.0, 2.0, SemigroupMethod::LineQuadrature).unwrap();
        assert!(rep.all_pass() && rep.contraction.lhs == 0.0);
    }

    #[test]
    fn kappa_values() {
        let v = kappa(1.0, 2.0, 5, 3.0).unwrap();
        assert!((v - 1.0 / LN_2).abs() < 1e-12);
        assert!(matches!(kappa(1.0, 2.0, 3, 3.0), Err(Error::HypothesisViolated(_))));
        assert!(matches!(kappa(1.0, 2.0, 5, 2.0), Err(Error::HypothesisViolated(_))));
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let t = 10f64.powf(1.0 + 0.25 * i as f64);
            let k = kappa(t, 2.0, 5, 3.0).unwrap();
            assert!(k < prev);
            prev = k;
        }
    }

    #[test]
    fn kappa_is_integrable() {
        for (p, n, r) in [(2.0, 5, 3.0), (4.0, 3, 2.0)] {
            let a = kappa_integral(p, n, r, f64::INFINITY, 1e-10).unwrap();
            let b = kappa_integral(p, n, r, f64::INFINITY, 5e-11).unwrap();
            assert!(a.converged && b.converged, "{a:?}");
            assert!((a.value - b.value).abs() <= 1e-6 * a.value);
            let finite = kappa_integral(p, n, r, 1.0, 1e-10).unwrap();
            assert!(finite.value < a.value);
        }
    }
}
