use crate::error::{Error, Result};
use crate::quad::{adaptive, compensated_sum, tanh_sinh, GaussLegendre};

use super::profile::RadialMixture;
use super::spec::{Geometry, GridSpec};

/// Exponents above this are treated as a numerically infinite modular.
pub const EXP_LIMIT: f64 = 700.0;

/// Cells replaced by exact integrals next to the origin and next to kinks.
const ORIGIN_CELLS: usize = 32;
const KINK_CELLS: usize = 8;

/// Sampled function on a [`GridSpec`], optionally carrying the analytic
/// mixture it was sampled from. The descriptor lets integrals resolve the
/// origin singularity, jumps, and the mass outside the box exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    spec: GridSpec,
    values: Vec<f64>,
    analytic: Option<RadialMixture>,
}

/// Integrand `F(u)` for [`GridFunction::integrate_functional`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    /// `u`
    Identity,
    /// `|u|^q`
    Power(f64),
    /// `e^{λ|u|^p} - 1`
    ExpModular { p: f64, lambda: f64 },
    /// `(e^{λ|u|^p} - 1)^q`
    ExpMoment { p: f64, lambda: f64, q: f64 },
}

impl Functional {
    fn exponent(&self, v: f64) -> f64 {
        match *self {
            Functional::ExpModular { p, lambda } | Functional::ExpMoment { p, lambda, .. } => {
                lambda * v.abs().powf(p)
            }
            _ => 0.0,
        }
    }

    fn is_exponential(&self) -> bool {
        matches!(self, Functional::ExpModular { .. } | Functional::ExpMoment { .. })
    }

    /// `F(v)`, refusing exponents beyond [`EXP_LIMIT`].
    fn point(&self, v: f64) -> Result<f64> {
        match *self {
            Functional::Identity => Ok(v),
            Functional::Power(q) => Ok(v.abs().powf(q)),
            Functional::ExpModular { .. } | Functional::ExpMoment { .. } => {
                let e = self.exponent(v);
                if e > EXP_LIMIT {
                    return Err(Error::OverflowDiverged { limit: EXP_LIMIT });
                }
                Ok(match *self {
                    Functional::ExpMoment { q, .. } => e.exp_m1().powf(q),
                    _ => e.exp_m1(),
                })
            }
        }
    }

    /// `F(v)·w` with `w > 0`, combined in log space so that large exponents
    /// multiplied by small weights stay finite.
    fn weighted(&self, v: f64, w: f64) -> f64 {
        if w <= 0.0 {
            return 0.0;
        }
        match *self {
            Functional::Identity => v * w,
            Functional::Power(q) => {
                let a = v.abs();
                if a == 0.0 {
                    0.0
                } else {
                    (q * a.ln() + w.ln()).exp()
                }
            }
            Functional::ExpModular { .. } => {
                let e = self.exponent(v);
                if e < 30.0 {
                    e.exp_m1() * w
                } else {
                    (e + w.ln()).exp() - w
                }
            }
            Functional::ExpMoment { q, .. } => {
                let e = self.exponent(v);
                if e == 0.0 {
                    0.0
                } else if e < 30.0 {
                    (q * e.exp_m1().ln() + w.ln()).exp()
                } else {
                    // log(e^e - 1) = e + log1p(-e^{-e})
                    (q * (e + (-(-e).exp()).ln_1p()) + w.ln()).exp()
                }
            }
        }
    }

    /// Power of `|u|` governing `F(u)` as `u → 0`.
    fn small_value_order(&self) -> f64 {
        match *self {
            Functional::Identity => 1.0,
            Functional::Power(q) => q,
            Functional::ExpModular { p, .. } => p,
            Functional::ExpMoment { p, q, .. } => p * q,
        }
    }
}

impl GridFunction {
    pub fn new(spec: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                spec.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at index {i}")));
        }
        Ok(Self { spec, values, analytic: None })
    }

    pub fn zeros(spec: GridSpec) -> Self {
        Self { spec, values: vec![0.0; spec.len()], analytic: None }
    }

    /// Samples `f(|x|)` at cell centres.
    pub fn from_radial_fn<F: Fn(f64) -> f64>(spec: GridSpec, f: F) -> Result<Self> {
        let values = (0..spec.len()).map(|i| f(spec.radius(i))).collect();
        Self::new(spec, values)
    }

    /// Samples `f(x)` at cell centres; radial grids pass `[r]`.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(spec: GridSpec, f: F) -> Result<Self> {
        let dim = match spec.geometry() {
            Geometry::Full => spec.dim(),
            Geometry::Radial => 1,
        };
        let mut x = [0.0; 3];
        let mut values = Vec::with_capacity(spec.len());
        for idx in 0..spec.len() {
            let m = match spec.geometry() {
                Geometry::Full => spec.unravel(idx),
                Geometry::Radial => [idx, 0, 0],
            };
            for a in 0..dim {
                x[a] = spec.axis_coord(m[a]);
            }
            values.push(f(&x[..dim]));
        }
        Self::new(spec, values)
    }

    /// Cell-centre samples of an analytic mixture. Cells touching the origin
    /// receive the exact shell average of log-power terms instead of their
    /// divergent point values.
    pub fn sample(mixture: impl Into<RadialMixture>, spec: GridSpec) -> Result<Self> {
        let mixture = RadialMixture::new(mixture.into().terms)?;
        let dim = spec.dim();
        let h = spec.spacing();
        let singular = mixture.log_singularity().is_some();
        if singular && h >= 1.0 {
            return Err(Error::InvalidGrid(format!(
                "spacing {h} leaves no cell inside the log-power support"
            )));
        }
        let mut values = Vec::with_capacity(spec.len());
        for idx in 0..spec.len() {
            let r = spec.radius(idx);
            let v = if singular && spec.cells_are_shells() && spec.shell(idx).0 == 0.0 {
                let (_, b, _) = spec.shell(idx);
                let mut acc = 0.0;
                for (c, p) in &mixture.terms {
                    acc += c * p.origin_cell_average(b, dim)?;
                }
                acc
            } else {
                mixture.value(r, dim)
            };
            values.push(v);
        }
        let mut out = Self::new(spec, values)?;
        out.analytic = Some(mixture);
        Ok(out)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn analytic(&self) -> Option<&RadialMixture> {
        self.analytic.as_ref()
    }

    pub fn without_analytic(mut self) -> Self {
        self.analytic = None;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0) && self.analytic.as_ref().is_none_or(|m| m.terms.iter().all(|(c, _)| *c == 0.0))
    }

    /// Largest stored magnitude. Singular profiles are unbounded even though
    /// this is finite; see `orlicz::classify_membership`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            spec: self.spec,
            values: self.values.iter().map(|v| v * factor).collect(),
            analytic: self.analytic.as_ref().map(|m| m.scaled(factor)),
        }
    }

    /// `a·u + b·v` on a common grid.
    pub fn linear_combination(a: f64, u: &Self, b: f64, v: &Self) -> Result<Self> {
        if u.spec != v.spec {
            return Err(Error::InvalidGrid("grid specs differ".into()));
        }
        let values = u.values.iter().zip(&v.values).map(|(x, y)| a * x + b * y).collect();
        let analytic = match (&u.analytic, &v.analytic) {
            (Some(m1), Some(m2)) => Some(m1.combined(a, m2, b)),
            _ => None,
        };
        let mut out = Self::new(u.spec, values)?;
        out.analytic = analytic;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combination(1.0, self, -1.0, other)
    }

    /// Pointwise map; drops the analytic descriptor.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        Self::new(self.spec, self.values.iter().map(|v| f(*v)).collect())
    }

    /// `∫ u dx`: midpoint rule, plus the exact correction terms when the
    /// function carries an analytic descriptor.
    pub fn integrate(&self) -> f64 {
        self.integrate_functional(&Functional::Identity).unwrap_or(f64::NAN)
    }

    /// `∫ F(u) dx`. Returns `+∞` for power functionals whose analytic tail is
    /// not integrable and `OverflowDiverged` for divergent exponential ones.
    pub fn integrate_functional(&self, functional: &Functional) -> Result<f64> {
        let spec = &self.spec;
        let mixture = match &self.analytic {
            Some(m) if spec.cells_are_shells() => m,
            _ => {
                let terms: Result<Vec<f64>> = self
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| Ok(functional.point(*v)? * spec.cell_weight(i)))
                    .collect();
                return Ok(compensated_sum(terms?));
            }
        };

        if let Some(diverged) = analytic_divergence(mixture, spec.dim(), functional) {
            return diverged;
        }

        let corrected = corrected_cells(spec, mixture);
        let mut parts = Vec::with_capacity(self.values.len() + 2);
        for (i, v) in self.values.iter().enumerate() {
            if corrected[i] {
                parts.push(exact_cell(spec, i, mixture, functional));
            } else {
                parts.push(functional.point(*v)? * spec.cell_weight(i));
            }
        }
        parts.push(tail_integral(spec, mixture, functional));
        let total = compensated_sum(parts);
        if !total.is_finite() {
            return Err(Error::OverflowDiverged { limit: EXP_LIMIT });
        }
        Ok(total)
    }

    /// Same function on a grid `factor` times finer: analytic resampling when
    /// a descriptor is present, multilinear interpolation otherwise.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        if factor != 2 && factor != 4 {
            return Err(Error::RefineFactor(factor));
        }
        let fine = self.spec.refined(factor)?;
        if let Some(m) = &self.analytic {
            return Self::sample(m.clone(), fine);
        }
        let dim = match fine.geometry() {
            Geometry::Full => fine.dim(),
            Geometry::Radial => 1,
        };
        let n = self.spec.points_per_axis();
        let x0 = self.spec.axis_coord(0);
        let h = self.spec.spacing();
        // per fine axis index: lower coarse index and weight of the upper one
        let stencil: Vec<(usize, f64)> = (0..fine.points_per_axis())
            .map(|i| {
                let s = ((fine.axis_coord(i) - x0) / h).clamp(0.0, (n - 1) as f64);
                let i0 = (s.floor() as usize).min(n - 2);
                (i0, s - i0 as f64)
            })
            .collect();
        let mut values = Vec::with_capacity(fine.len());
        for idx in 0..fine.len() {
            let m = match fine.geometry() {
                Geometry::Full => fine.unravel(idx),
                Geometry::Radial => [idx, 0, 0],
            };
            let mut acc = 0.0;
            for corner in 0..(1usize << dim) {
                let mut w = 1.0;
                let mut flat = 0;
                for a in 0..dim {
                    let (i0, t) = stencil[m[a]];
                    let upper = (corner >> a) & 1 == 1;
                    w *= if upper { t } else { 1.0 - t };
                    flat = flat * n + i0 + usize::from(upper);
                }
                if w != 0.0 {
                    acc += w * self.values[flat];
                }
            }
            values.push(acc);
        }
        Self::new(fine, values)
    }
}

// Analytic integrability at the origin and at infinity.
fn analytic_divergence(mixture: &RadialMixture, dim: usize, functional: &Functional) -> Option<Result<f64>> {
    let n = dim as f64;
    if functional.is_exponential() {
        if let Some((strength, p_prof)) = mixture.log_singularity() {
            let (p, lambda, q) = match *functional {
                Functional::ExpModular { p, lambda } => (p, lambda, 1.0),
                Functional::ExpMoment { p, lambda, q } => (p, lambda, q),
                _ => unreachable!(),
            };
            let same = (p_prof - p).abs() <= 1e-12 * p;
            // (e^{λ|S|^p(-log r)})^q = r^{-qλ|S|^p}, integrable against r^{N-1} iff below N
            if (p_prof < p && !same && strength != 0.0)
                || (same && q * lambda * strength.abs().powf(p) >= n)
            {
                return Some(Err(Error::OverflowDiverged { limit: EXP_LIMIT }));
            }
        }
    }
    if let Some(gamma) = mixture.power_tail_exponent(dim) {
        if functional.small_value_order() * gamma <= n {
            return Some(if functional.is_exponential() {
                Err(Error::OverflowDiverged { limit: EXP_LIMIT })
            } else {
                Ok(f64::INFINITY)
            });
        }
    }
    None
}

fn corrected_cells(spec: &GridSpec, mixture: &RadialMixture) -> Vec<bool> {
    let h = spec.spacing();
    let near_origin = mixture.unbounded_at_origin();
    let kinks: Vec<f64> = mixture.kinks();
    (0..spec.len())
        .map(|i| {
            let (lo, hi, _) = spec.shell(i);
            if near_origin && lo < ORIGIN_CELLS as f64 * h - 0.5 * h {
                return true;
            }
            kinks.iter().any(|k| lo < k + KINK_CELLS as f64 * h && hi > k - KINK_CELLS as f64 * h)
        })
        .collect()
}

fn shell_integrand<'a>(
    mixture: &'a RadialMixture,
    dim: usize,
    c: f64,
    functional: &'a Functional,
) -> impl Fn(f64) -> f64 + 'a {
    move |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let w = c * r.powi(dim as i32 - 1);
        functional.weighted(mixture.value(r, dim), w)
    }
}

// Exact integral of F(mixture) over one shell-type cell, split at kinks.
fn exact_cell(spec: &GridSpec, idx: usize, mixture: &RadialMixture, functional: &Functional) -> f64 {
    thread_local! {
        static GL16: GaussLegendre = GaussLegendre::new(16);
    }
    let (lo, hi, c) = spec.shell(idx);
    let f = shell_integrand(mixture, spec.dim(), c, functional);
    let mut cuts = vec![lo];
    let kinks = mixture.kinks();
    cuts.extend(kinks.iter().copied().filter(|k| *k > lo && *k < hi));
    cuts.push(hi);
    let touches_kink = |x: f64| kinks.iter().any(|k| (k - x).abs() <= 1e-12 * k.max(1.0));
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let rough = a == 0.0 || touches_kink(a) || touches_kink(b);
        acc += if rough {
            tanh_sinh(&f, a, b, 1e-13).value
        } else {
            GL16.with(|rule| rule.integrate(&f, a, b))
        };
    }
    acc
}

// ∫_{|x|>L} F(mixture) dx, with a power map on the last semi-infinite piece
// so that slowly decaying tails become bounded integrands.
fn tail_integral(spec: &GridSpec, mixture: &RadialMixture, functional: &Functional) -> f64 {
    let Some(c) = spec.exterior_weight() else {
        return 0.0;
    };
    let l = spec.half_width();
    let dim = spec.dim();
    let f = shell_integrand(mixture, dim, c, functional);

    let support = mixture.support_radius();
    if support.is_some_and(|s| s <= l) {
        return 0.0;
    }
    let mut cuts = vec![l];
    cuts.extend(mixture.kinks().into_iter().filter(|k| *k > l));
    if let Some(s) = support {
        cuts.push(s);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += adaptive(&f, w[0], w[1], 1e-15, 400).value;
    }
    if support.is_some() {
        return acc;
    }
    let a = *cuts.last().unwrap_or(&l);
    let k = match mixture.power_tail_exponent(dim) {
        Some(gamma) => {
            let decay = functional.small_value_order() * gamma - (dim as f64 - 1.0);
            (2.0 / (decay - 1.0)).clamp(1.0, 40.0)
        }
        None => 1.0,
    };
    let mapped = |s: f64| {
        let one_minus = 1.0 - s;
        if one_minus <= 0.0 {
            return 0.0;
        }
        let x = a * one_minus.powf(-k);
        let jac = a * k * one_minus.powf(-k - 1.0);
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    acc + adaptive(mapped, 0.0, 1.0, 1e-15, 400).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::profile::RadialProfile;
    use crate::quad::adaptive;
    use std::f64::consts::PI;

    fn gaussian() -> RadialProfile {
        RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }
    }

    #[test]
    fn indicator_samples_and_integral() {
        let spec = GridSpec::full(1, 2.0, 64).unwrap();
        let u = GridFunction::sample(RadialProfile::Indicator { radius: 1.0, value: 1.0 }, spec).unwrap();
        for (i, v) in u.values().iter().enumerate() {
            let x = spec.axis_coord(i);
            assert_eq!(*v, if x.abs() < 1.0 { 1.0 } else { 0.0 });
        }
        assert!((u.integrate() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_integral() {
        let spec = GridSpec::full(1, 12.0, 256).unwrap();
        let u = GridFunction::sample(gaussian(), spec).unwrap();
        assert!((u.integrate() - (4.0 * PI).sqrt()).abs() < 1e-10);
        // without the descriptor the plain midpoint sum is just as good here
        assert!((u.clone().without_analytic().integrate() - (4.0 * PI).sqrt()).abs() < 1e-10);
        assert_eq!(GridFunction::zeros(spec).integrate(), 0.0);
    }

    #[test]
    fn log_power_origin_cell_matches_adaptive_oracle() {
        let spec = GridSpec::full(1, 2.0, 64).unwrap();
        let h = spec.spacing();
        let u = GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, spec).unwrap();
        let oracle = adaptive(|x| (-x.ln()).sqrt(), 0.0, h, 1e-13, 2000).value / h;
        let mid = spec.points_per_axis() / 2;
        assert!((u.values()[mid] - oracle).abs() < 1e-9);
        assert!((u.values()[mid - 1] - oracle).abs() < 1e-9);
        let wide = GridSpec::full(1, 16.0, 16).unwrap();
        assert!(GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, wide).is_err());
    }

    #[test]
    fn log_power_exp_modular_closed_form() {
        // 2∫₀¹ (x^{-1/4} - 1) dx = 2/3
        let spec = GridSpec::full(1, 2.0, 4096).unwrap();
        let u = GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, spec).unwrap();
        let v = u.integrate_functional(&Functional::ExpModular { p: 2.0, lambda: 0.25 }).unwrap();
        // midpoint error beyond the corrected cells is about 2·(h²/24)|F'(32h)|
        assert!((v - 2.0 / 3.0).abs() < 3e-6, "{v}");
        let div = u.integrate_functional(&Functional::ExpModular { p: 2.0, lambda: 1.0 });
        assert!(matches!(div, Err(Error::OverflowDiverged { .. })));
    }

    #[test]
    fn power_tail_integrals() {
        // ∫|u|^q = 2∫₁^∞ x^{-q/r0}; the interior keeps its O(h²) midpoint error
        let spec = GridSpec::full(1, 4.0, 1024).unwrap();
        let u = GridFunction::sample(RadialProfile::PowerTail { r0: 1.0 }, spec).unwrap();
        let v = u.integrate_functional(&Functional::Power(2.0)).unwrap();
        assert!((v - 2.0).abs() < 5e-5, "{v}");
        let v = u.integrate_functional(&Functional::Power(4.0)).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 5e-5, "{v}");
        assert_eq!(u.integrate_functional(&Functional::Power(1.0)).unwrap(), f64::INFINITY);
        // slow tail x^{-1.1}: 2/0.1 = 20
        let u = GridFunction::sample(RadialProfile::PowerTail { r0: 1.0 / 1.1 }, spec).unwrap();
        let v = u.integrate_functional(&Functional::Power(1.0)).unwrap();
        assert!((v - 20.0).abs() < 1e-5, "{v}");
    }

    #[test]
    fn radial_weights() {
        // ∫_{R³} e^{-|x|²/4} = (4π)^{3/2}
        let spec = GridSpec::radial(3, 20.0, 400).unwrap();
        let u = GridFunction::sample(gaussian(), spec).unwrap();
        assert!((u.integrate() / (4.0 * PI).powf(1.5) - 1.0).abs() < 1e-10);
        // in N = 2 the odd weight r leaves the midpoint rule second order
        let spec = GridSpec::radial(2, 20.0, 400).unwrap();
        let u = GridFunction::sample(gaussian(), spec).unwrap();
        let h = spec.spacing();
        assert!((u.integrate() - 4.0 * PI).abs() < h * h);
    }

    #[test]
    fn radial_line_counts_both_half_lines() {
        let full = GridFunction::sample(gaussian(), GridSpec::full(1, 16.0, 512).unwrap()).unwrap();
        let radial = GridFunction::sample(gaussian(), GridSpec::radial(1, 16.0, 512).unwrap()).unwrap();
        assert!((radial.integrate() - full.integrate()).abs() < 1e-6);
        let h = radial.spec().spacing();
        let half: f64 = radial.values().iter().map(|v| v * h).sum();
        assert!((half - 0.5 * full.integrate()).abs() < 1e-6);
    }

    #[test]
    fn refine_rules() {
        let spec = GridSpec::full(1, 2.0, 64).unwrap();
        let ind = GridFunction::sample(RadialProfile::Indicator { radius: 1.0, value: 1.0 }, spec).unwrap();
        assert!((ind.refine(2).unwrap().integrate() - ind.integrate()).abs() < 1e-12);
        assert!(matches!(ind.refine(3), Err(Error::RefineFactor(3))));
        let twice = ind.refine(2).unwrap().refine(2).unwrap();
        assert_eq!(twice, ind.refine(4).unwrap());

        let g = GridFunction::from_radial_fn(GridSpec::full(1, 12.0, 64).unwrap(), |r| (-r * r / 4.0).exp()).unwrap();
        let fine = g.refine(2).unwrap();
        let h = g.spec().spacing();
        assert!((fine.integrate() - g.integrate()).abs() < h * h);
        let interp_twice = g.refine(2).unwrap().refine(2).unwrap();
        assert_eq!(interp_twice.len(), g.refine(4).unwrap().len());
    }

    #[test]
    fn multilinear_refinement_is_exact_on_affine_data() {
        let spec = GridSpec::full(2, 1.0, 16).unwrap();
        let u = GridFunction::from_fn(spec, |x| 1.0 + 2.0 * x[0] - x[1]).unwrap();
        let fine = u.refine(2).unwrap();
        let fs = *fine.spec();
        let interior = (0..fs.len()).filter(|&i| {
            let m = fs.unravel(i);
            (0..2).all(|a| fs.axis_coord(m[a]).abs() < 1.0 - spec.spacing())
        });
        for i in interior {
            let m = fs.unravel(i);
            let x = [fs.axis_coord(m[0]), fs.axis_coord(m[1])];
            assert!((fine.values()[i] - (1.0 + 2.0 * x[0] - x[1])).abs() < 1e-13);
        }
    }

    #[test]
    fn constants_and_linearity() {
        let spec = GridSpec::full(2, 1.5, 32).unwrap();
        let c = GridFunction::from_fn(spec, |_| 2.5).unwrap();
        assert!((c.integrate() - 2.5 * 9.0).abs() < 1e-12);
        let u = GridFunction::sample(gaussian(), GridSpec::full(1, 12.0, 128).unwrap()).unwrap();
        let v = GridFunction::sample(RadialProfile::Bump { amplitude: 2.0, width: 3.0 }, *u.spec()).unwrap();
        let w = GridFunction::linear_combination(0.3, &u, -1.7, &v).unwrap();
        let lhs = w.integrate();
        let rhs = 0.3 * u.integrate() - 1.7 * v.integrate();
        assert!((lhs - rhs).abs() < 1e-10 * (u.integrate().abs() + v.integrate().abs()));
    }

    #[test]
    fn rejects_bad_values() {
        let spec = GridSpec::full(1, 1.0, 16).unwrap();
        assert!(GridFunction::new(spec, vec![0.0; 15]).is_err());
        let mut v = vec![0.0; 16];
        v[3] = f64::NAN;
        assert!(GridFunction::new(spec, v).is_err());
    }
}
