use serde::Serialize;

use crate::picard::NonlinearitySpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmallnessCheck {
    pub name: &'static str,
    pub lhs: f64,
    /// `1 - lhs`.
    pub margin: f64,
    /// Largest ε keeping `lhs ≤ 1`.
    pub max_epsilon: f64,
    /// Whether the check constrains the global-existence radius.
    pub gating: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Budget {
    /// `M = 2ε`.
    pub radius: f64,
    pub checks: Vec<SmallnessCheck>,
    /// Largest ε passing every gating check.
    pub max_epsilon: f64,
    pub pass: bool,
}

const EQUALITY_SLACK: f64 = 1e-12;

/// Smallness conditions on the ball of radius `M = 2ε` in `exp L^p`:
/// `2qλM^p ≤ 1` (global contraction, gating) and `2^p λ q M^p ≤ 1`
/// (small-part estimate of the local splitting, reported only).
pub fn contraction_budget(f: &NonlinearitySpec, epsilon: f64, q: f64) -> Budget {
    let radius = 2.0 * epsilon;
    let make = |name, coef: f64, gating| {
        let lhs = coef * f.lambda * q * radius.powf(f.p);
        let max_epsilon = 0.5 * (1.0 / (coef * f.lambda * q)).powf(1.0 / f.p);
        SmallnessCheck { name, lhs, margin: 1.0 - lhs, max_epsilon, gating, pass: 1.0 - lhs >= -EQUALITY_SLACK }
    };
    let checks = vec![make("global_contraction", 2.0, true), make("local_small_part", 2f64.powf(f.p), false)];
    let gating = checks.iter().filter(|c| c.gating);
    let max_epsilon = gating.clone().map(|c| c.max_epsilon).fold(f64::INFINITY, f64::min);
    let pass = epsilon > 0.0 && gating.clone().all(|c| c.pass);
    Budget { radius, checks, max_epsilon, pass }
}
