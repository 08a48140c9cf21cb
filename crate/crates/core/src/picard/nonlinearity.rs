use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, EXP_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
    /// Switches the nonlinearity off (linear heat flow), for testing.
    Off,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
            Sign::Off => 0.0,
        }
    }
}

/// `f(u) = ±|u|^{m-1} u e^{λ|u|^p}` together with the constant `C` of the
/// Lipschitz envelope `|f(u) - f(v)| ≤ C|u - v|(|u|^{m-1}e^{λ|u|^p} + |v|^{m-1}e^{λ|v|^p})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub m: f64,
    pub p: f64,
    pub lambda: f64,
    pub sign: Sign,
    pub c_lip: f64,
}

impl NonlinearitySpec {
    pub fn new(m: f64, p: f64, lambda: f64, sign: Sign, c_lip: f64) -> Result<Self> {
        let s = Self { m, p, lambda, sign, c_lip };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.m >= 1.0) {
            bad.push(format!("m = {} must be >= 1", self.m));
        }
        if !(self.p > 1.0) {
            bad.push(format!("p = {} must exceed 1", self.p));
        }
        if !(self.lambda > 0.0) {
            bad.push(format!("λ = {} must be positive", self.lambda));
        }
        if !(self.c_lip > 0.0) {
            bad.push(format!("C = {} must be positive", self.c_lip));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::HypothesisViolated(bad))
        }
    }

    /// Point evaluation; `None` when the exponent passes the overflow guard.
    pub fn eval(&self, u: f64) -> Option<f64> {
        if self.sign == Sign::Off || u == 0.0 {
            return Some(0.0);
        }
        let a = u.abs();
        let e = self.lambda * a.powf(self.p);
        if e > EXP_LIMIT {
            return None;
        }
        Some(self.sign.factor() * a.powf(self.m - 1.0) * u * e.exp())
    }

    pub fn apply(&self, u: &GridFunction) -> Result<GridFunction> {
        let values = u
            .values()
            .iter()
            .map(|v| self.eval(*v).ok_or(Error::OverflowDiverged { limit: EXP_LIMIT }))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(*u.spec(), values)
    }

    /// `|f(u)| ≤ sup_{|s| ≤ bound} |f(s)|`, attained at the bound.
    pub fn sup_on_ball(&self, bound: f64) -> f64 {
        self.eval(bound).map_or(f64::INFINITY, f64::abs)
    }
}

/// Window from the local existence argument: `M = 2‖v₀‖` and
/// `T = ½ (M - ‖v₀‖) / (2 M C e^{λM^p})`, with `‖v₀‖ = ‖v₀‖_p + ‖v₀‖_∞`.
pub fn local_window(v0_lp: f64, v0_linf: f64, f: &NonlinearitySpec) -> Result<(f64, f64)> {
    let s = v0_lp + v0_linf;
    if !(s > 0.0 && s.is_finite()) || v0_lp < 0.0 || v0_linf < 0.0 {
        return Err(Error::PreconditionViolated(format!("needs finite non-negative norms, not both zero; got {v0_lp}, {v0_linf}")));
    }
    let m = 2.0 * s;
    let t = 0.5 * (m - s) / (2.0 * m * f.c_lip * (f.lambda * m.powf(f.p)).exp());
    Ok((m, t))
}
