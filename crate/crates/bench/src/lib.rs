//! Shared inputs for the benchmarks.

use expheat_core::{GridFunction, GridSpec, NonlinearitySpec, RadialProfile, Sign};

/// Gaussian sampled on a full one-dimensional grid.
pub fn gaussian_line(n: usize) -> GridFunction {
    let spec = GridSpec::full(1, 16.0, n).expect("valid grid");
    GridFunction::sample(RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }, spec).expect("sample")
}

/// Gaussian on a radial three-dimensional grid.
pub fn gaussian_radial(n: usize) -> GridFunction {
    let spec = GridSpec::radial(3, 16.0, n).expect("valid grid");
    GridFunction::sample(RadialProfile::Gaussian { s: 1.0, amplitude: 1.0 }, spec).expect("sample")
}

/// Log-power profile with exponent 2 on `(-2, 2)`.
pub fn log_power_line(n: usize) -> GridFunction {
    let spec = GridSpec::full(1, 2.0, n).expect("valid grid");
    GridFunction::sample(RadialProfile::LogPower { alpha: 1.0, p: 2.0 }, spec).expect("sample")
}

/// `f(u) = |u|^3 (e^{u²} - 1)`.
pub fn focusing() -> NonlinearitySpec {
    NonlinearitySpec::new(4.0, 2.0, 1.0, Sign::Plus, 1.0).expect("valid nonlinearity")
}
