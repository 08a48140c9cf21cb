//! Gamma-family special functions.
//!
//! `beta` uses the standard identity `B(x, y) = Γ(x)Γ(y)/Γ(x+y)` for the
//! integral `∫₀¹ τ^{x-1}(1-τ)^{y-1} dτ`. Some printed sources state the
//! reciprocal `Γ(x+y)/(Γ(x)Γ(y))`, with the integrand exponents written as
//! `1-x, 1-y`; that form is not a Beta function and is not used here.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{name} requires a positive finite argument, got {x}")))
    }
}

// Lanczos series for x >= 0.5, returned as (A(z), t) with z = x - 1.
fn lanczos_parts(x: f64) -> (f64, f64) {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    (a, z + LANCZOS_G + 0.5)
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let (a, t) = lanczos_parts(x);
        (2.0 * PI).sqrt() * t.powf(x - 0.5) * (-t).exp() * a
    }
}

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        (PI / (PI * x).sin().abs()).ln() - ln_gamma_unchecked(1.0 - x)
    } else {
        let (a, t) = lanczos_parts(x);
        0.5 * (2.0 * PI).ln() + (x - 0.5) * t.ln() - t + a.ln()
    }
}

/// Γ(x) for x > 0 (overflows to +∞ beyond x ≈ 171.6).
pub fn gamma(x: f64) -> Result<f64> {
    check_positive("gamma", x)?;
    if x > 171.0 {
        return Ok(ln_gamma_unchecked(x).exp());
    }
    Ok(gamma_unchecked(x))
}

/// log Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(ln_gamma_unchecked(x))
}

/// Euler's Beta function, through log-gamma.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    check_positive("beta", x)?;
    check_positive("beta", y)?;
    Ok((ln_gamma_unchecked(x) + ln_gamma_unchecked(y) - ln_gamma_unchecked(x + y)).exp())
}

/// Regularised lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check_positive("gamma_p", a)?;
    if x < 0.0 {
        return Err(Error::DomainError(format!("gamma_p requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x < a + 1.0 {
        Ok(p_series(a, x))
    } else {
        Ok(1.0 - q_continued_fraction(a, x))
    }
}

/// Regularised upper incomplete gamma Q(a, x) = 1 - P(a, x).
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check_positive("gamma_q", a)?;
    if x < 0.0 {
        return Err(Error::DomainError(format!("gamma_q requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if x < a + 1.0 {
        Ok(1.0 - p_series(a, x))
    } else {
        Ok(q_continued_fraction(a, x))
    }
}

/// Non-regularised upper incomplete gamma Γ(a, x) = ∫ₓ^∞ τ^{a-1} e^{-τ} dτ.
pub fn upper_gamma(a: f64, x: f64) -> Result<f64> {
    if x < a + 1.0 {
        Ok(gamma(a)? * gamma_q(a, x)?)
    } else {
        // keep the small tail accurate instead of forming Γ(a)·Q
        Ok(q_continued_fraction_unscaled(a, x))
    }
}

fn p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..10_000 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma_unchecked(a)).exp()
}

// Modified Lentz evaluation of the continued fraction for Γ(a, x) e^{x} x^{-a}.
fn lentz(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

fn q_continued_fraction(a: f64, x: f64) -> f64 {
    lentz(a, x) * (-x + a * x.ln() - ln_gamma_unchecked(a)).exp()
}

fn q_continued_fraction_unscaled(a: f64, x: f64) -> f64 {
    lentz(a, x) * (-x + a * x.ln()).exp()
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let v = if x * x < 1.5 {
        p_series(0.5, x * x)
    } else {
        1.0 - q_continued_fraction(0.5, x * x)
    };
    v.copysign(x)
}

/// Complementary error function, accurate in the far right tail.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x == 0.0 {
        return 1.0;
    }
    let z = x * x;
    if z > 745.0 {
        return 0.0;
    }
    if z < 1.5 {
        1.0 - p_series(0.5, z)
    } else {
        q_continued_fraction(0.5, z)
    }
}

/// Γ(x+1) / ((x/e)^x √(2πx)), the Stirling ratio, in log space.
pub fn stirling_ratio(x: f64) -> Result<f64> {
    check_positive("stirling_ratio", x)?;
    let log_stirling = x * (x.ln() - 1.0) + 0.5 * (2.0 * PI * x).ln();
    Ok((ln_gamma_unchecked(x + 1.0) - log_stirling).exp())
}

/// Surface measure of the unit sphere S^{N-1} in ℝ^N.
pub fn sphere_area(dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * PI.powf(0.5 * n) / gamma_unchecked(0.5 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn classical_values() {
        assert!(rel(gamma(3.0).unwrap(), 2.0) < 1e-14);
        assert!(rel(gamma(0.5).unwrap(), PI.sqrt()) < 1e-14);
        assert!(rel(gamma(1.0).unwrap(), 1.0) < 1e-14);
        assert!(rel(gamma(11.0).unwrap(), 3_628_800.0) < 1e-13);
        assert!((beta(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(rel(beta(2.0, 3.0).unwrap(), 1.0 / 12.0) < 1e-13);
        assert!(rel(log_gamma(100.0).unwrap(), 359.134_205_369_575_4) < 1e-14);
    }

    #[test]
    fn stirling_ratio_tends_to_one() {
        let r = stirling_ratio(100.0).unwrap();
        assert!((r - 1.0).abs() < 1e-3);
        // leading correction is 1/(12x)
        assert!((r - 1.0 - 1.0 / 1200.0).abs() < 1e-6);
    }

    #[test]
    fn non_positive_arguments_rejected() {
        assert!(matches!(gamma(0.0), Err(Error::DomainError(_))));
        assert!(matches!(log_gamma(-1.5), Err(Error::DomainError(_))));
        assert!(matches!(beta(1.0, -2.0), Err(Error::DomainError(_))));
    }

    #[test]
    fn incomplete_gamma_and_erf() {
        // Q(1, x) = e^{-x}
        assert!(rel(gamma_q(1.0, 3.0).unwrap(), (-3.0f64).exp()) < 1e-14);
        assert!(rel(gamma_p(1.0, 0.2).unwrap(), 1.0 - (-0.2f64).exp()) < 1e-13);
        assert!(rel(upper_gamma(2.0, 40.0).unwrap(), 41.0 * (-40.0f64).exp()) < 1e-13);
        assert!((erf(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!(rel(erfc(5.0), 1.537_459_794_428_034_8e-12) < 1e-13);
        assert!((erf(-0.3) + erf(0.3)).abs() < 1e-17);
        assert!((erfc(-1.0) - (1.0 + erf(1.0))).abs() < 1e-15);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }
}
