//! Reference finite-difference solver for ∂^α_t u = (u^m u_x)_x on a
//! half-line, dry at t = 0, with either a unit face concentration or a unit
//! face flux. The Caputo derivative uses the L1 scheme with the full
//! history; the nonlinear diffusivity is frozen at the previous level.

mod diagnostics;
mod io;
mod scheme;

pub use diagnostics::{
    collapse_diagnostic, cumulative_moisture_numeric, front_position, log_log_slope,
    rescaled_profile, wetting_front_numeric, DEFAULT_FRONT_THRESHOLD,
};
pub use io::{history_csv, metadata_lines, parse_history_csv, read_history_csv, write_history_csv};
pub use scheme::{advance, l1_weights, run, FDConfig, FDField, FDSolver, MIN_NODES};
