use serde::Serialize;

use super::{
    ode_coefficients, similarity_exponents, BoundaryCondition, ReducedOdeCoefficients,
    SimilarityExponents, SimilarityProblem,
};
use crate::ek_operator::Profile;
use crate::error::{invalid, Error, Result};

pub const DEFAULT_TERMS: usize = 3;
pub const MAX_TERMS: usize = 24;

/// Samples used to verify y > 0 on (0, 1].
const POSITIVITY_SAMPLES: usize = 512;

/// Taylor coefficients a₀ … a_N of y at z = 0.
///
/// a₀ = 0 and a₁ = B; the rest follow from matching powers of z in the
/// reduced ODE, which gives for n ≥ 1
///
/// ```text
/// B (n+1)(n+1/m) a_{n+1} = (A − B n/m) a_n
///     − (1/m) Σ_{k=1}^{n−1} (k+1) a_{k+1} (n−k+1) a_{n−k+1}
///     − Σ_{k=2}^{n} a_k (n−k+2)(n−k+1) a_{n−k+2}
/// ```
pub fn taylor_coefficients(abc: &ReducedOdeCoefficients, m: f64, n: usize) -> Result<Vec<f64>> {
    if abc.b == 0.0 {
        return Err(Error::NonPositive {
            what: "coefficient B",
            value: abc.b,
        });
    }
    if n == 0 {
        return Err(invalid("N", "truncation order must be at least 1"));
    }
    if !(m > 0.0) {
        return Err(invalid("m", format!("{m} must be positive")));
    }
    let (big_a, big_b) = (abc.a, abc.b);
    let mut a = vec![0.0; n + 1];
    a[1] = big_b;
    for k in 1..n {
        let kf = k as f64;
        let mut s1 = 0.0;
        for j in 1..k {
            s1 += (j + 1) as f64 * a[j + 1] * (k - j + 1) as f64 * a[k - j + 1];
        }
        let mut s2 = 0.0;
        for j in 2..=k {
            s2 += a[j] * ((k - j + 2) * (k - j + 1)) as f64 * a[k - j + 2];
        }
        let rhs = (big_a - big_b * kf / m) * a[k] - s1 / m - s2;
        a[k + 1] = rhs / (big_b * (kf + 1.0) * (kf + 1.0 / m));
    }
    Ok(a)
}

/// Horner evaluation of Σ a_k z^k.
pub fn eval_y(coeffs: &[f64], z: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Σ k a_k z^{k−1}.
pub fn eval_y_derivative(coeffs: &[f64], z: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * z + k as f64 * c)
}

fn eval_y_second(coeffs: &[f64], z: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(2)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * z + (k * (k - 1)) as f64 * c)
}

/// y'²/m + y y'' − A y − (B/m)(1 − z) y' for the truncated series.
pub fn ode_residual(coeffs: &[f64], abc: &ReducedOdeCoefficients, m: f64, z: f64) -> f64 {
    let y = eval_y(coeffs, z);
    let d1 = eval_y_derivative(coeffs, z);
    let d2 = eval_y_second(coeffs, z);
    d1 * d1 / m + y * d2 - abc.a * y - abc.b / m * (1.0 - z) * d1
}

/// η* from y(1) (and y'(1) for the flux condition).
pub fn wetting_front(coeffs: &[f64], problem: &SimilarityProblem) -> Result<f64> {
    let m = problem.m;
    let y1 = eval_y(coeffs, 1.0);
    if !(y1 > 0.0) {
        return Err(Error::NonPositive {
            what: "y(1)",
            value: y1,
        });
    }
    match problem.bc {
        BoundaryCondition::Concentration => Ok(1.0 / (m * y1).sqrt()),
        BoundaryCondition::Flux => {
            let dy1 = eval_y_derivative(coeffs, 1.0);
            if !(dy1 > 0.0) {
                return Err(Error::NonPositive {
                    what: "y'(1)",
                    value: dy1,
                });
            }
            let base = m.powf(1.0 / m) * y1.powf(1.0 / m) * dy1;
            Ok(base.powf(-m / (m + 2.0)))
        }
    }
}

/// Truncated Taylor solution together with everything derived from it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSolution {
    pub problem: SimilarityProblem,
    pub exponents: SimilarityExponents,
    #[serde(rename = "ode_coefficients")]
    pub abc: ReducedOdeCoefficients,
    /// a₀ … a_N.
    pub coeffs: Vec<f64>,
    pub eta_star: f64,
}

impl SeriesSolution {
    /// Solution with N Taylor terms beyond a₀.
    pub fn new(problem: SimilarityProblem, n_terms: usize) -> Result<Self> {
        problem.validate()?;
        if n_terms == 0 || n_terms > MAX_TERMS {
            return Err(invalid("N", format!("{n_terms} not in 1..={MAX_TERMS}")));
        }
        let abc = ode_coefficients(&problem)?;
        let coeffs = taylor_coefficients(&abc, problem.m, n_terms)?;
        Self::from_coefficients(problem, abc, coeffs)
    }

    pub fn from_coefficients(
        problem: SimilarityProblem,
        abc: ReducedOdeCoefficients,
        coeffs: Vec<f64>,
    ) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(invalid("coeffs", "need at least a0 and a1"));
        }
        for i in 1..=POSITIVITY_SAMPLES {
            let z = i as f64 / POSITIVITY_SAMPLES as f64;
            let y = eval_y(&coeffs, z);
            if !(y > 0.0) {
                return Err(Error::NonPositive {
                    what: "y(z) on (0, 1]",
                    value: y,
                });
            }
        }
        let eta_star = wetting_front(&coeffs, &problem)?;
        Ok(Self {
            problem,
            exponents: similarity_exponents(&problem),
            abc,
            coeffs,
            eta_star,
        })
    }

    /// Truncation order N.
    pub fn n_terms(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The same series cut after a_n, with its own wetting front.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n_terms() {
            return Err(invalid("N", format!("{n} not in 1..={}", self.n_terms())));
        }
        Self::from_coefficients(self.problem, self.abc, self.coeffs[..=n].to_vec())
    }

    pub fn y(&self, z: f64) -> f64 {
        eval_y(&self.coeffs, z)
    }

    pub fn residual(&self, z: f64) -> f64 {
        ode_residual(&self.coeffs, &self.abc, self.problem.m, z)
    }
}

/// U(η) = (m η*² y(1 − η/η*))^{1/m} on [0, η*), zero beyond.
pub fn profile(sol: &SeriesSolution, eta: f64) -> f64 {
    let es = sol.eta_star;
    if eta >= es {
        return 0.0;
    }
    let m = sol.problem.m;
    let y = sol.y(1.0 - eta.max(0.0) / es).max(0.0);
    (m * es * es * y).powf(1.0 / m)
}

/// U'(0) = −η*^{2/m−1} (m y(1))^{1/m−1} y'(1).
pub fn profile_derivative_at_zero(sol: &SeriesSolution) -> f64 {
    let m = sol.problem.m;
    let y1 = eval_y(&sol.coeffs, 1.0);
    let dy1 = eval_y_derivative(&sol.coeffs, 1.0);
    -sol.eta_star.powf(2.0 / m - 1.0) * (m * y1).powf(1.0 / m - 1.0) * dy1
}

impl Profile for SeriesSolution {
    fn eval(&self, eta: f64) -> f64 {
        profile(self, eta)
    }

    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        match order {
            0 => Some(profile(self, eta)),
            1 => {
                let es = self.eta_star;
                if eta > es {
                    return Some(0.0);
                }
                let m = self.problem.m;
                let z = 1.0 - eta.max(0.0) / es;
                let y = self.y(z);
                let dy = eval_y_derivative(&self.coeffs, z);
                let scale = (m * es * es).powf(1.0 / m);
                Some(-scale / (m * es) * y.powf(1.0 / m - 1.0) * dy)
            }
            _ => None,
        }
    }

    fn support_end(&self) -> Option<f64> {
        Some(self.eta_star)
    }
}
