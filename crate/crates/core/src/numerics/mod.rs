//! Special functions and generic numerical kernels shared by the solvers.

pub mod gamma;
pub mod hypergeometric;
pub mod nelder_mead;
pub mod quadrature;
pub mod tridiagonal;

pub use gamma::{beta_fn, gamma_fn, gamma_ratio, ln_beta, ln_gamma, reciprocal_gamma, sin_pi};
pub use hypergeometric::hyp2f1;
pub use nelder_mead::{minimize_derivative_free, minimize_with_steps, Minimum, StopReason};
pub use quadrature::{
    adaptive_simpson, integrate_jacobi, integrate_jacobi_from, GaussRule, QuadratureKind,
    QuadratureSpec,
};
pub use tridiagonal::solve_tridiagonal;
