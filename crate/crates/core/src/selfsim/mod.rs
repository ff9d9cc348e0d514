//! Approximate self-similar solutions u = t^a U(x / t^b) of the
//! time-fractional porous medium equation ∂^α_t u = (u^m u_x)_x.
//!
//! The reduced equation for U is approximated by the ODE
//! `y'²/m + y y'' − A y − (B/m)(1 − z) y' = 0` in the variable
//! z = 1 − η/η*, with U = (m η*² y)^{1/m}. Its Taylor series at z = 0 is
//! computed by a recurrence and the wetting front η* is fixed by the
//! boundary condition at η = 0.

mod export;
mod moisture;
mod perturbation;
mod scaling;
mod series;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{gamma_ratio, reciprocal_gamma};

pub use export::{profile_csv, write_profile_csv};
pub use moisture::{cumulative_moisture, MoistureMethod};
pub use perturbation::{perturbation_y, PerturbationSolution};
pub use scaling::{dimensionalize, DimensionalProfile, Scaling};
pub use series::{
    eval_y, eval_y_derivative, ode_residual, profile, profile_derivative_at_zero,
    taylor_coefficients, wetting_front, SeriesSolution, DEFAULT_TERMS, MAX_TERMS,
};

/// Condition imposed at the face x = 0 of an initially dry half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryCondition {
    /// u(0, t) = 1.
    Concentration,
    /// −u^m u_x (0, t) = 1.
    Flux,
}

impl BoundaryCondition {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundaryCondition::Concentration => "concentration",
            BoundaryCondition::Flux => "flux",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "concentration" => Ok(BoundaryCondition::Concentration),
            "flux" => Ok(BoundaryCondition::Flux),
            other => Err(invalid(
                "bc",
                format!("unknown boundary condition `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityProblem {
    pub alpha: f64,
    pub m: f64,
    pub bc: BoundaryCondition,
}

impl SimilarityProblem {
    pub fn new(alpha: f64, m: f64, bc: BoundaryCondition) -> Result<Self> {
        let p = Self { alpha, m, bc };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid("alpha", format!("{} not in (0, 1]", self.alpha)));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(invalid("m", format!("{} must be positive", self.m)));
        }
        Ok(())
    }
}

/// Time exponents of u = t^a U(x / t^b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityExponents {
    pub a: f64,
    pub b: f64,
}

pub fn similarity_exponents(p: &SimilarityProblem) -> SimilarityExponents {
    match p.bc {
        BoundaryCondition::Concentration => SimilarityExponents {
            a: 0.0,
            b: p.alpha / 2.0,
        },
        BoundaryCondition::Flux => {
            let a = p.alpha / (p.m + 2.0);
            // b from the constraint 2b − m a = α so that it holds to the last bit
            SimilarityExponents {
                a,
                b: 0.5 * (p.alpha + p.m * a),
            }
        }
    }
}

/// Coefficients A and B of the reduced ODE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedOdeCoefficients {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

pub fn ode_coefficients(p: &SimilarityProblem) -> Result<ReducedOdeCoefficients> {
    p.validate()?;
    let alpha = p.alpha;
    match p.bc {
        BoundaryCondition::Concentration => Ok(ReducedOdeCoefficients {
            // 1/Γ(1−α) vanishes continuously as α → 1
            a: reciprocal_gamma(1.0 - alpha),
            b: alpha / 2.0 * reciprocal_gamma(2.0 - alpha),
        }),
        BoundaryCondition::Flux => {
            let s = alpha / (2.0 + p.m);
            let a = gamma_ratio(1.0 + s, 1.0 - alpha + s)?;
            let b = alpha * (p.m + 1.0) / (p.m + 2.0) * gamma_ratio(1.0 + s, 2.0 - alpha + s)?;
            Ok(ReducedOdeCoefficients { a, b })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(alpha: f64, m: f64, bc: BoundaryCondition) -> SimilarityProblem {
        SimilarityProblem::new(alpha, m, bc).unwrap()
    }

    #[test]
    fn validation() {
        use BoundaryCondition::*;
        assert!(SimilarityProblem::new(0.0, 1.0, Flux).is_err());
        assert!(SimilarityProblem::new(1.2, 1.0, Flux).is_err());
        assert!(SimilarityProblem::new(0.5, 0.0, Flux).is_err());
        assert!(SimilarityProblem::new(1.0, 2.0, Concentration).is_ok());
        assert_eq!("Flux".parse::<BoundaryCondition>().unwrap(), Flux);
        assert!("dirichlet".parse::<BoundaryCondition>().is_err());
    }

    #[test]
    fn exponents() {
        use BoundaryCondition::*;
        let e = similarity_exponents(&problem(0.5, 2.0, Concentration));
        assert_eq!((e.a, e.b), (0.0, 0.25));
        let e = similarity_exponents(&problem(0.5, 2.0, Flux));
        assert!((e.a - 0.125).abs() < 1e-16 && (e.b - 0.375).abs() < 1e-16);
        let e = similarity_exponents(&problem(1.0, 3.0, Concentration));
        assert_eq!((e.a, e.b), (0.0, 0.5));
    }

    #[test]
    fn coefficients() {
        use BoundaryCondition::*;
        let c = ode_coefficients(&problem(1.0, 2.0, Concentration)).unwrap();
        assert_eq!(c.a, 0.0);
        assert!((c.b - 0.5).abs() < 1e-15);
        let c = ode_coefficients(&problem(0.5, 2.0, Concentration)).unwrap();
        assert!((c.a - 0.564_189_583_547_756_3).abs() < 1e-14);
        assert!((c.b - 0.282_094_791_773_878_1).abs() < 1e-14);
        let c = ode_coefficients(&problem(0.95, 2.0, Flux)).unwrap();
        assert!(c.a > 0.0 && c.b > 0.0 && c.a.is_finite());
        // α = 1 with flux: A = Γ(1+s)/Γ(s) = s, B = (m+1)/(m+2)
        let c = ode_coefficients(&problem(1.0, 2.0, Flux)).unwrap();
        assert!((c.a - 0.25).abs() < 1e-14 && (c.b - 0.75).abs() < 1e-14);
    }
}
