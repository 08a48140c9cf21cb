pub mod budget;
pub mod fit;
pub mod nonexistence;
pub mod params;
pub mod special;

pub use budget::{contraction_budget, Budget, SmallnessCheck};
pub use nonexistence::{
    alpha0_formula, calibrate_lower_bound, default_t_grid, divergence_exponent, phi_alpha_heat, phi_alpha_lower_bound,
    DivergenceProbe, DivergenceReport, LowerBound,
};
pub use params::{gamma_growth_check, select_params, verify_params, GammaGrowth, ParamReport, ParamSet};
pub use special::{beta, gamma, log_gamma};
