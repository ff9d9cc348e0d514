use super::ReducedOdeCoefficients;
use crate::error::{Error, Result};

/// Two-term expansion y ≈ y₀ + y₁/m in powers of 1/m, useful for large m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSolution {
    pub abc: ReducedOdeCoefficients,
    pub m: f64,
}

impl PerturbationSolution {
    pub fn new(abc: ReducedOdeCoefficients, m: f64) -> Self {
        Self { abc, m }
    }

    /// y₀(z) = A z²/2 + B z.
    pub fn y0(&self, z: f64) -> f64 {
        self.abc.a * z * z / 2.0 + self.abc.b * z
    }

    /// y₁(z) = −2(A+B) [z²/2 − (B/A)((z + 2B/A)(ln(1 + Az/(2B)) − 1) + 2B/A)].
    pub fn y1(&self, z: f64) -> Result<f64> {
        let (a, b) = (self.abc.a, self.abc.b);
        if a == 0.0 {
            return Err(Error::DegenerateA);
        }
        let r = b / a;
        let log = (z / (2.0 * r)).ln_1p();
        let bracket = z * z / 2.0 - r * ((z + 2.0 * r) * (log - 1.0) + 2.0 * r);
        Ok(-2.0 * (a + b) * bracket)
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        Ok(self.y0(z) + self.y1(z)? / self.m)
    }
}

/// y₀(z) + y₁(z)/m. Errors with [`Error::DegenerateA`] when A = 0, where
/// only y₀ is defined.
pub fn perturbation_y(abc: &ReducedOdeCoefficients, m: f64, z: f64) -> Result<f64> {
    PerturbationSolution::new(*abc, m).eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfsim::{
        eval_y, ode_coefficients, taylor_coefficients, BoundaryCondition, SimilarityProblem,
    };

    #[test]
    fn vanishes_at_origin_with_slope_b() {
        let abc = ReducedOdeCoefficients { a: 0.4, b: 0.3 };
        let p = PerturbationSolution::new(abc, 5.0);
        assert_eq!(p.eval(0.0).unwrap(), 0.0);
        let h = 1e-6;
        let slope = (p.eval(h).unwrap() - p.eval(-h).unwrap()) / (2.0 * h);
        assert!((slope - 0.3).abs() < 1e-8);
        let s1 = (p.y1(h).unwrap() - p.y1(-h).unwrap()) / (2.0 * h);
        assert!(s1.abs() < 1e-8);
    }

    #[test]
    fn degenerate_a() {
        let abc = ReducedOdeCoefficients { a: 0.0, b: 0.5 };
        assert_eq!(perturbation_y(&abc, 2.0, 0.5), Err(Error::DegenerateA));
        assert_eq!(PerturbationSolution::new(abc, 2.0).y0(1.0), 0.5);
    }

    #[test]
    fn agrees_with_series_for_large_m() {
        for bc in [BoundaryCondition::Concentration, BoundaryCondition::Flux] {
            let p = SimilarityProblem::new(0.5, 50.0, bc).unwrap();
            let abc = ode_coefficients(&p).unwrap();
            let c = taylor_coefficients(&abc, 50.0, 20).unwrap();
            let sup = (0..=200)
                .map(|i| i as f64 / 200.0)
                .map(|z| (perturbation_y(&abc, 50.0, z).unwrap() - eval_y(&c, z)).abs())
                .fold(0.0, f64::max);
            assert!(sup < 1e-3, "{bc}: {sup}");
        }
    }
}
