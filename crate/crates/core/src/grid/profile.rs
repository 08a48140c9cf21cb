use serde::{Deserialize, Serialize};

use crate::analysis::special::upper_gamma;
use crate::error::{Error, Result};

/// Analytic radial families used as test data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialProfile {
    /// `α(-log|x|)^{1/p}` on `|x| < 1`; in exp L^p but not in its closure of
    /// test functions.
    LogPower { alpha: f64, p: f64 },
    /// `(log(1 - log|x|))^{1/p}` on `|x| ≤ 1`; unbounded yet in exp L^p_0.
    LogLogPower { p: f64 },
    /// `|x|^{-N/r0}` on `|x| ≥ 1`; in exp L^p_0 for `p > r0` but not in L^{r0}.
    PowerTail { r0: f64 },
    /// `A e^{-|x|²/(4s)}`.
    Gaussian { s: f64, amplitude: f64 },
    /// `c` on `|x| < R`.
    Indicator { radius: f64, value: f64 },
    /// `A exp(1 - 1/(1 - (|x|/s)²))` on `|x| < s`, peak value `A`.
    Bump { amplitude: f64, width: f64 },
}

impl RadialProfile {
    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match *self {
            RadialProfile::LogPower { alpha, p } => ok(alpha) && ok(p) && p > 1.0,
            RadialProfile::LogLogPower { p } => ok(p),
            RadialProfile::PowerTail { r0 } => ok(r0),
            RadialProfile::Gaussian { s, amplitude } => ok(s) && ok(amplitude),
            RadialProfile::Indicator { radius, value } => ok(radius) && ok(value),
            RadialProfile::Bump { amplitude, width } => ok(amplitude) && ok(width),
        };
        if valid {
            Ok(())
        } else {
            Err(Error::InvalidProfile(format!("{self:?}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadialProfile::LogPower { .. } => "log_power",
            RadialProfile::LogLogPower { .. } => "log_log_power",
            RadialProfile::PowerTail { .. } => "power_tail",
            RadialProfile::Gaussian { .. } => "gaussian",
            RadialProfile::Indicator { .. } => "indicator",
            RadialProfile::Bump { .. } => "bump",
        }
    }

    /// Point value at radius `r` in dimension `dim`.
    pub fn value(&self, r: f64, dim: usize) -> f64 {
        match *self {
            RadialProfile::LogPower { alpha, p } => {
                if r < 1.0 {
                    alpha * (-r.ln()).powf(1.0 / p)
                } else {
                    0.0
                }
            }
            RadialProfile::LogLogPower { p } => {
                if r <= 1.0 {
                    (1.0 - r.ln()).ln().powf(1.0 / p)
                } else {
                    0.0
                }
            }
            RadialProfile::PowerTail { r0 } => {
                if r >= 1.0 {
                    r.powf(-(dim as f64) / r0)
                } else {
                    0.0
                }
            }
            RadialProfile::Gaussian { s, amplitude } => amplitude * (-r * r / (4.0 * s)).exp(),
            RadialProfile::Indicator { radius, value } => {
                if r < radius {
                    value
                } else {
                    0.0
                }
            }
            RadialProfile::Bump { amplitude, width } => {
                let z = r / width;
                if z < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - z * z)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    pub fn unbounded_at_origin(&self) -> bool {
        matches!(self, RadialProfile::LogPower { .. } | RadialProfile::LogLogPower { .. })
    }

    pub fn compact_support(&self) -> Option<f64> {
        match *self {
            RadialProfile::LogPower { .. } | RadialProfile::LogLogPower { .. } => Some(1.0),
            RadialProfile::Indicator { radius, .. } => Some(radius),
            RadialProfile::Bump { width, .. } => Some(width),
            RadialProfile::PowerTail { .. } | RadialProfile::Gaussian { .. } => None,
        }
    }

    /// Radii where the profile has a jump or an infinite derivative.
    pub fn kinks(&self) -> Vec<f64> {
        match *self {
            RadialProfile::LogPower { .. } | RadialProfile::LogLogPower { .. } => vec![1.0],
            RadialProfile::PowerTail { .. } => vec![1.0],
            RadialProfile::Indicator { radius, .. } => vec![radius],
            RadialProfile::Gaussian { .. } | RadialProfile::Bump { .. } => vec![],
        }
    }

    /// Average of the profile over the shell `0 < |x| < b` in dimension
    /// `dim` (weight `r^{N-1}`), in closed form for the log-power family:
    /// `∫₀ᵇ r^{N-1} α(-log r)^{1/p} dr = α N^{-1-1/p} Γ(1 + 1/p, -N log b)`.
    pub fn origin_cell_average(&self, b: f64, dim: usize) -> Result<f64> {
        match *self {
            RadialProfile::LogPower { alpha, p } => {
                if b >= 1.0 {
                    return Err(Error::InvalidGrid(format!(
                        "log-power profile needs spacing below 1, origin cell reaches {b}"
                    )));
                }
                let n = dim as f64;
                let integral = alpha * n.powf(-1.0 - 1.0 / p) * upper_gamma(1.0 + 1.0 / p, -n * b.ln())?;
                Ok(integral * n / b.powf(n))
            }
            _ => Ok(self.value(0.5 * b, dim)),
        }
    }
}

/// Finite linear combination `Σ c_k φ_k` of catalogue profiles; the
/// analytic descriptor carried by sampled grid functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RadialMixture {
    pub terms: Vec<(f64, RadialProfile)>,
}

impl From<RadialProfile> for RadialMixture {
    fn from(p: RadialProfile) -> Self {
        Self { terms: vec![(1.0, p)] }
    }
}

impl RadialMixture {
    pub fn new(terms: Vec<(f64, RadialProfile)>) -> Result<Self> {
        for (c, p) in &terms {
            p.validate()?;
            if !c.is_finite() {
                return Err(Error::InvalidProfile(format!("non-finite coefficient {c}")));
            }
        }
        Ok(Self { terms })
    }

    pub fn value(&self, r: f64, dim: usize) -> f64 {
        self.terms.iter().map(|(c, p)| c * p.value(r, dim)).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { terms: self.terms.iter().map(|(c, p)| (c * factor, *p)).collect() }
    }

    pub fn combined(&self, a: f64, other: &Self, b: f64) -> Self {
        let mut terms = self.scaled(a).terms;
        terms.extend(other.scaled(b).terms);
        Self { terms }
    }

    pub fn unbounded_at_origin(&self) -> bool {
        self.terms.iter().any(|(c, p)| *c != 0.0 && p.unbounded_at_origin())
    }

    pub fn kinks(&self) -> Vec<f64> {
        let mut k: Vec<f64> = self
            .terms
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .flat_map(|(_, p)| p.kinks())
            .collect();
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// Largest radius outside which the mixture vanishes, if any.
    pub fn support_radius(&self) -> Option<f64> {
        let mut r: f64 = 0.0;
        for (c, p) in &self.terms {
            if *c == 0.0 {
                continue;
            }
            r = r.max(p.compact_support()?);
        }
        Some(r)
    }

    /// Coefficient of the `(-log r)^{1/p}` singularity at the origin and the
    /// smallest log-power exponent present.
    pub(crate) fn log_singularity(&self) -> Option<(f64, f64)> {
        let mut min_p: Option<f64> = None;
        for (c, p) in &self.terms {
            if let RadialProfile::LogPower { p: q, .. } = p {
                if *c != 0.0 {
                    min_p = Some(min_p.map_or(*q, |m: f64| m.min(*q)));
                }
            }
        }
        let pmin = min_p?;
        let coef: f64 = self
            .terms
            .iter()
            .filter_map(|(c, p)| match p {
                RadialProfile::LogPower { alpha, p: q } if *q == pmin => Some(c * alpha),
                _ => None,
            })
            .sum();
        Some((coef, pmin))
    }

    /// Decay exponent `γ` of the slowest power tail `|x|^{-γ}`, if any.
    pub(crate) fn power_tail_exponent(&self, dim: usize) -> Option<f64> {
        self.terms
            .iter()
            .filter(|(c, _)| *c != 0.0)
            .filter_map(|(_, p)| match p {
                RadialProfile::PowerTail { r0 } => Some(dim as f64 / r0),
                _ => None,
            })
            .reduce(f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_values() {
        let g = RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 };
        assert!((g.value(2.0, 1) - (-1.0f64).exp()).abs() < 1e-15);
        let i = RadialProfile::Indicator { radius: 1.0, value: 2.0 };
        assert_eq!(i.value(0.5, 1), 2.0);
        assert_eq!(i.value(1.5, 1), 0.0);
        let b = RadialProfile::Bump { amplitude: 3.0, width: 2.0 };
        assert_eq!(b.value(0.0, 2), 3.0);
        assert_eq!(b.value(2.0, 2), 0.0);
        let t = RadialProfile::PowerTail { r0: 2.0 };
        assert!((t.value(4.0, 3) - 4f64.powf(-1.5)).abs() < 1e-15);
        assert!(RadialProfile::LogPower { alpha: 1.0, p: 1.0 }.validate().is_err());
        assert!(RadialProfile::Gaussian { s: 0.0, amplitude: 1.0 }.validate().is_err());
    }

    #[test]
    fn log_power_origin_average_rejects_wide_cells() {
        let lp = RadialProfile::LogPower { alpha: 1.0, p: 2.0 };
        assert!(lp.origin_cell_average(1.0, 1).is_err());
        // in 1-D the average over (0, b) of √(-log x) is Γ(3/2, -log b)/b
        let b = 0.01;
        let v = lp.origin_cell_average(b, 1).unwrap();
        let expected = upper_gamma(1.5, -b.ln()).unwrap() / b;
        assert!((v - expected).abs() < 1e-13 * expected);
    }
}
