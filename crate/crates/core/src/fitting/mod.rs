//! Least-squares fitting of the dimensional self-similar profile to
//! measured moisture data.

mod data;
mod fit;

pub use data::{load_profile, parse_profile, MoistureProfile};
pub use fit::{
    fit, model, objective, scaling_exponent_probe, FitOptions, FitResult, ModelParams,
    ALPHA_BOUNDS, D0_BOUNDS, MIN_SAMPLES, M_BOUNDS,
};
