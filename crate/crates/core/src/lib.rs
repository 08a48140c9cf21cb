//! Numerical laboratory for `∂ₜu - Δu = f(u)` with exponential
//! nonlinearities in the Orlicz spaces `exp L^p`: Luxemburg norms, heat
//! semigroup estimates, Duhamel/Picard solutions, decay and blow-up rates,
//! and non-existence diagnostics.

pub mod analysis;
pub mod check;
pub mod corpus;
pub mod error;
pub mod grid;
pub mod heat;
pub mod orlicz;
pub mod picard;
pub mod quad;

pub use check::InequalityCheck;
pub use error::{Error, Result};
pub use grid::{Functional, Geometry, GridFunction, GridSpec, RadialMixture, RadialProfile};
pub use heat::{HeatPropagator, SemigroupMethod};
pub use orlicz::{luxemburg_norm, OrliczNorm};
pub use picard::{NonlinearitySpec, Sign, SolverConfig, Status, Trajectory};
