//! Duhamel solver for `∂ₜu - Δu = f(u)` by windowed Picard iteration.

mod diagnostics;
mod export;
mod nonlinearity;
mod solver;

pub use diagnostics::{
    blowup_rate_fit, decay_of_series, decay_supremum, fit_log_rate, initial_layer_check, BlowupFit, DecaySummary,
    InitialLayer, MIN_TAIL,
};
pub use export::{dump_snapshots, write_trajectory_csv};
pub use nonlinearity::{local_window, NonlinearitySpec, Sign};
pub use solver::{
    default_cap, picard_step, solve, solve_with, LedgerEntry, LedgerSpec, PicardStep, Rejections, SolverConfig,
    Status, StepRecord, Trajectory,
};
