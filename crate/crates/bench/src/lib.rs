//! Shared fixtures for the criterion benchmarks.

use subflow_core::{BoundaryCondition, EKParams, FDConfig, FDField, FDSolver};

/// The smooth-profile operator parameters used throughout the error study.
pub fn ek_params() -> EKParams {
    EKParams::new(1.0, 0.1, 1.0).expect("valid parameters")
}

/// Flux run with the front well inside the domain for `steps` steps.
pub fn flux_config(nx: usize, steps: usize) -> FDConfig {
    let dt = 2.5e-5;
    FDConfig {
        nx,
        dx: 0.3 / nx as f64,
        dt,
        t_end: dt * steps as f64,
        alpha: 0.95,
        m: 2.0,
        bc: BoundaryCondition::Flux,
        theta: 1.0,
    }
}

/// A solver that has already taken `warm` steps, so the memory sum is
/// representative of a run in progress.
pub fn warmed_solver(nx: usize, warm: usize) -> (FDConfig, FDField) {
    let cfg = flux_config(nx, warm);
    let mut solver = FDSolver::new(cfg).expect("valid config");
    solver.run().expect("run stays inside the domain");
    (cfg, solver.into_field())
}
