use serde::Serialize;

/// Outcome of a numerical inequality `lhs ≤ rhs`, accepted up to a relative
/// slack on the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl InequalityCheck {
    pub fn new(lhs: f64, rhs: f64, rel_tol: f64) -> Self {
        let pass = !lhs.is_nan() && !rhs.is_nan() && (lhs <= rhs * (1.0 + rel_tol) || lhs <= 0.0 && rhs >= 0.0);
        Self { lhs, rhs, pass }
    }

    /// `(rhs - lhs) / rhs`, the relative room left by the inequality.
    pub fn margin(&self) -> f64 {
        if self.rhs == 0.0 {
            if self.lhs <= 0.0 {
                0.0
            } else {
                f64::NEG_INFINITY
            }
        } else if self.rhs.is_infinite() {
            1.0
        } else {
            (self.rhs - self.lhs) / self.rhs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_and_margin() {
        assert!(InequalityCheck::new(1.0 + 1e-8, 1.0, 1e-6).pass);
        assert!(!InequalityCheck::new(1.01, 1.0, 1e-6).pass);
        assert!(InequalityCheck::new(0.0, 0.0, 1e-6).pass);
        assert!(!InequalityCheck::new(f64::NAN, 1.0, 1e-6).pass);
        assert!((InequalityCheck::new(0.5, 2.0, 0.0).margin() - 0.75).abs() < 1e-15);
    }
}
