use serde::{Deserialize, Serialize};

use super::series::SeriesSolution;
use crate::error::{invalid, Error, Result};
use crate::numerics::{hyp2f1, integrate_jacobi, QuadratureSpec};

/// How the spatial integral of U is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoistureMethod {
    /// Closed form using a₁ only; exact for a one-term series.
    OneTerm,
    /// Closed form with a ₂F₁ factor using a₁, a₂; exact for a two-term series.
    TwoTerm,
    /// Quadrature over all coefficients of the series.
    Quadrature,
}

const QUADRATURE_ORDER: usize = 64;

/// Cumulative moisture I(t) = ∫₀^∞ u(x, t) dx of the self-similar solution.
///
/// With y = z the integral becomes
/// `t^{a+b} η* (m η*²)^{1/m} ∫₀¹ y(s)^{1/m} ds`. The closed forms use the
/// solution's own η*; they equal the quadrature only when the series has
/// exactly one or two terms.
pub fn cumulative_moisture(sol: &SeriesSolution, t: f64, method: MoistureMethod) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid("t", format!("{t} must be positive")));
    }
    let m = sol.problem.m;
    let es = sol.eta_star;
    let e = sol.exponents;
    let time = t.powf(e.a + e.b);
    let a1 = sol.coeffs[1];
    let one_term = m * es / (1.0 + m) * (m * es * es * a1).powf(1.0 / m);
    let value = match method {
        MoistureMethod::OneTerm => one_term,
        MoistureMethod::TwoTerm => {
            let a2 = sol.coeffs.get(2).copied().unwrap_or(0.0);
            one_term * two_term_factor(m, -a2 / a1)?
        }
        MoistureMethod::Quadrature => {
            // y(s) = s q(s); the factor s^{1/m} goes into the Jacobi weight
            let q = &sol.coeffs[1..];
            let integrand = |s: f64| {
                let v = q.iter().rev().fold(0.0, |acc, &c| acc * s + c);
                v.max(0.0).powf(1.0 / m)
            };
            let spec = QuadratureSpec::jacobi(QUADRATURE_ORDER);
            let integral = integrate_jacobi(integrand, 1.0 / m, 1.0, &spec)?;
            es * (m * es * es).powf(1.0 / m) * integral
        }
    };
    if !value.is_finite() {
        return Err(Error::NonPositive {
            what: "cumulative moisture",
            value,
        });
    }
    Ok(time * value)
}

/// ₂F₁(1+1/m, −1/m; 2+1/m; z). For z < 0 the Pfaff transformation
/// `(1−z)^{1/m} ₂F₁(1, −1/m; 2+1/m; z/(z−1))` keeps the series argument
/// inside the unit disc, which covers a₂/a₁ > 1.
fn two_term_factor(m: f64, z: f64) -> Result<f64> {
    let inv = 1.0 / m;
    if z < 0.0 {
        Ok((1.0 - z).powf(inv) * hyp2f1(1.0, -inv, 2.0 + inv, z / (z - 1.0))?)
    } else {
        hyp2f1(1.0 + inv, -inv, 2.0 + inv, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{BoundaryCondition, SimilarityProblem};

    fn sol(alpha: f64, m: f64, bc: BoundaryCondition, n: usize) -> SeriesSolution {
        SeriesSolution::new(SimilarityProblem::new(alpha, m, bc).unwrap(), n).unwrap()
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for bc in [BoundaryCondition::Concentration, BoundaryCondition::Flux] {
            let s1 = sol(0.7, 2.0, bc, 1);
            let q = cumulative_moisture(&s1, 1.0, MoistureMethod::Quadrature).unwrap();
            let c = cumulative_moisture(&s1, 1.0, MoistureMethod::OneTerm).unwrap();
            assert!(((q - c) / c).abs() < 1e-12);
            let s2 = sol(0.7, 2.0, bc, 2);
            let q = cumulative_moisture(&s2, 1.0, MoistureMethod::Quadrature).unwrap();
            let c = cumulative_moisture(&s2, 1.0, MoistureMethod::TwoTerm).unwrap();
            assert!(((q - c) / c).abs() < 1e-10);
        }
    }

    #[test]
    fn pfaff_branch_agrees_with_direct_series() {
        for m in [0.7, 1.0, 3.0] {
            for z in [-0.9, -0.4, -0.05] {
                let direct = hyp2f1(1.0 + 1.0 / m, -1.0 / m, 2.0 + 1.0 / m, z).unwrap();
                assert!((two_term_factor(m, z).unwrap() - direct).abs() < 1e-13);
            }
        }
        assert!(two_term_factor(2.0, -3.0).unwrap().is_finite());
    }

    #[test]
    fn time_scaling() {
        let s = sol(0.6, 1.0, BoundaryCondition::Concentration, 3);
        let i1 = cumulative_moisture(&s, 1.0, MoistureMethod::Quadrature).unwrap();
        let i4 = cumulative_moisture(&s, 4.0, MoistureMethod::Quadrature).unwrap();
        assert!((i4 / i1 - 4f64.powf(0.3)).abs() < 1e-13);
        assert!(cumulative_moisture(&s, 0.0, MoistureMethod::OneTerm).is_err());
    }

    #[test]
    fn classical_limit_area() {
        // √(1−η) on [0,1] has area 2/3
        let s = sol(1.0, 2.0, BoundaryCondition::Concentration, 1);
        let i = cumulative_moisture(&s, 1.0, MoistureMethod::OneTerm).unwrap();
        assert!((i - 2.0 / 3.0).abs() < 1e-15);
    }
}
