//! One-dimensional quadrature rules shared by the grid, heat and analysis
//! modules: Gauss-Legendre panels, a globally adaptive Gauss-Legendre
//! bisection scheme, and double-exponential (tanh-sinh) rules for integrands
//! with algebraic or logarithmic endpoint singularities.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// A fixed Gauss-Legendre rule, reusable across many intervals.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + r * x);
        }
        acc * r
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (c + r * x, w * r))
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection with a 10-point Gauss-Legendre rule; the
/// error of a panel is the difference between the whole-panel rule and the
/// rule applied to its two halves.
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Quadrature {
    let rule = GaussLegendre::new(10);
    let estimate = |a: f64, b: f64| -> Panel {
        let m = 0.5 * (a + b);
        let whole = rule.integrate(&f, a, b);
        let halves = rule.integrate(&f, a, m) + rule.integrate(&f, m, b);
        Panel { a, b, value: halves, error: (halves - whole).abs() }
    };

    let mut heap = BinaryHeap::new();
    let first = estimate(a, b);
    let mut total = first.value;
    let mut err = first.error;
    heap.push(first);
    let mut count = 1;
    while err > tol.max(tol * total.abs()) && count < max_panels {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            heap.push(worst);
            break;
        }
        let left = estimate(worst.a, m);
        let right = estimate(m, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        count += 1;
    }
    // re-sum to shed accumulated cancellation in the running totals
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Quadrature { value, error, intervals: count, converged: error <= tol.max(tol * value.abs()) }
}

/// Tanh-sinh rule on `[a, b]`. Abscissae are generated from their distance
/// to the nearer endpoint so that integrands singular at `a` (typically 0)
/// are sampled arbitrarily close to the singularity without rounding onto it.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    if a == b {
        return Quadrature { value: 0.0, error: 0.0, intervals: 0, converged: true };
    }
    let half = 0.5 * (b - a);
    let t_max = 6.0;

    // contribution of abscissa parameter t (both mirrored points for t > 0)
    let term = |t: f64| -> f64 {
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let w = FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        if !w.is_finite() || w == 0.0 {
            return 0.0;
        }
        // distance from the endpoint, in units of (b - a)
        let d = 1.0 / (1.0 + (2.0 * u).exp());
        if t == 0.0 {
            return w * f(a + half);
        }
        let lo = a + (b - a) * d;
        let hi = b - (b - a) * d;
        let mut s = 0.0;
        if lo > a {
            s += w * f(lo);
        }
        if hi < b {
            s += w * f(hi);
        }
        s
    };

    let mut h = 1.0;
    let mut sum = term(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        sum += term(k as f64 * h);
        k += 1;
    }
    let mut estimate = sum * h * half;
    let mut error = f64::INFINITY;
    for _level in 0..9 {
        h *= 0.5;
        let mut added = 0.0;
        let mut j = 1;
        while (j as f64) * h <= t_max {
            added += term(j as f64 * h);
            j += 2;
        }
        sum += added;
        let next = sum * h * half;
        error = (next - estimate).abs();
        estimate = next;
        if error <= tol * estimate.abs().max(1e-300) {
            return Quadrature { value: estimate, error, intervals: 0, converged: true };
        }
    }
    Quadrature { value: estimate, error, intervals: 0, converged: false }
}

/// Integral over `[a, ∞)` through the map `x = a + s/(1 - s)`, with the
/// transformed integrand handed to the tanh-sinh rule on `[0, 1]`.
pub fn semi_infinite<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> Quadrature {
    tanh_sinh(
        |s| {
            let one_minus = 1.0 - s;
            if one_minus <= 0.0 {
                return 0.0;
            }
            let x = a + s / one_minus;
            let v = f(x) / (one_minus * one_minus);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Neumaier-compensated sum with a fixed left-to-right order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
