//! Self-similar solutions of the time-fractional porous medium equation
//! `∂^α_t u = (D₀ u^m u_x)_x`, a finite-difference reference solver, and
//! fitting of the approximate profiles to moisture data.
//!
//! - [`numerics`]: Gamma functions, Gauss–Jacobi and adaptive quadrature,
//!   ₂F₁, tridiagonal solves, Nelder–Mead.
//! - [`ek_operator`]: the Erdélyi–Kober integral and its derivative series.
//! - [`selfsim`]: exponents, reduced ODE, Taylor solution, wetting front,
//!   cumulative moisture, physical scaling.
//! - [`fd_solver`]: L1 finite-difference solver and its diagnostics.
//! - [`fitting`]: profile loading and least-squares fitting.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values in tests are quoted to all digits of the oracle
#![cfg_attr(test, allow(clippy::excessive_precision, clippy::approx_constant))]

pub mod ek_operator;
pub mod error;
pub mod fd_solver;
pub mod fitting;
pub mod numerics;
pub mod selfsim;

pub use ek_operator::{EKParams, Profile};
pub use error::{Error, Result};
pub use fd_solver::{FDConfig, FDField, FDSolver};
pub use fitting::{FitOptions, FitResult, ModelParams, MoistureProfile};
pub use numerics::{QuadratureKind, QuadratureSpec};
pub use selfsim::{
    BoundaryCondition, MoistureMethod, ReducedOdeCoefficients, Scaling, SeriesSolution,
    SimilarityExponents, SimilarityProblem,
};
