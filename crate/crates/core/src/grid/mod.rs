//! Uniform grids on ℝ^N (N ≤ 3) and radial grids, sampled functions and
//! their quadrature.

mod function;
mod io;
mod profile;
mod spec;

pub use function::{Functional, GridFunction, EXP_LIMIT};
pub use io::{load_gfn, read_gfn, save_gfn, write_gfn};
pub use profile::{RadialMixture, RadialProfile};
pub use spec::{gaussian_half_width, Geometry, GridSpec};

use crate::error::Result;

/// Samples a catalogue profile (or mixture) at the cell centres of `spec`.
pub fn sample(profile: impl Into<RadialMixture>, spec: GridSpec) -> Result<GridFunction> {
    GridFunction::sample(profile, spec)
}

pub fn integrate(u: &GridFunction) -> f64 {
    u.integrate()
}

pub fn refine(u: &GridFunction, factor: usize) -> Result<GridFunction> {
    u.refine(factor)
}
