//! Derivative-free local minimization with the Nelder–Mead simplex method.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    /// Simplex diameter fell below the tolerance.
    Converged,
    /// Iteration budget exhausted; the best vertex is still returned.
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub stop: StopReason,
}

impl Minimum {
    pub fn converged(&self) -> bool {
        self.stop == StopReason::Converged
    }
}

/// Initial simplex: each coordinate perturbed by 5% (or 2.5e-4 when zero).
fn initial_simplex(start: &[f64], steps: Option<&[f64]>) -> Vec<Vec<f64>> {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        let step = match steps {
            Some(s) => s[i],
            None if start[i] != 0.0 => 0.05 * start[i],
            None => 2.5e-4,
        };
        v[i] += step;
        simplex.push(v);
    }
    simplex
}

pub fn minimize_derivative_free(
    objective: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    tol: f64,
    max_iter: usize,
) -> Minimum {
    minimize_with_steps(objective, start, None, tol, max_iter)
}

/// As [`minimize_derivative_free`] with explicit initial simplex edge lengths.
pub fn minimize_with_steps(
    mut objective: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    steps: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Minimum {
    let n = start.len();
    let mut f = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex = initial_simplex(start, steps);
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut iterations = 0;
    let stop = loop {
        // order vertices by value
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.iter().map(|&i| simplex[i].clone()).collect();
        values = idx.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            break StopReason::Converged;
        }
        if iterations >= max_iter {
            break StopReason::MaxIterations;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let reflected = along(-1.0);
        let fr = f(&reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let (contracted, fc) = if fr < values[n] {
                let c = along(-0.5);
                let fc = f(&c);
                (c, fc)
            } else {
                let c = along(0.5);
                let fc = f(&c);
                (c, fc)
            };
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink towards the best vertex
                let best = simplex[0].clone();
                for i in 1..=n {
                    for (x, b) in simplex[i].iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    values[i] = f(&simplex[i]);
                }
            }
        }
    };
    Minimum {
        argmin: simplex[0].clone(),
        value: values[0],
        iterations,
        stop,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let m = minimize_derivative_free(
            |p| (p[0] - 1.0).powi(2) + (p[1] - 2.0).powi(2),
            &[0.0, 0.0],
            1e-8,
            2000,
        );
        assert!(m.converged());
        assert!((m.argmin[0] - 1.0).abs() < 1e-7 && (m.argmin[1] - 2.0).abs() < 1e-7);
    }

    #[test]
    fn rosenbrock() {
        let m = minimize_derivative_free(
            |p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2),
            &[-1.2, 1.0],
            1e-10,
            10_000,
        );
        assert!(m.converged());
        assert!((m.argmin[0] - 1.0).abs() < 1e-4 && (m.argmin[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn absolute_value_1d() {
        let m = minimize_derivative_free(|p| p[0].abs(), &[3.0], 1e-10, 1000);
        assert!(m.argmin[0].abs() < 1e-8);
    }

    #[test]
    fn budget_exhaustion_is_soft() {
        let m = minimize_derivative_free(
            |p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2),
            &[-1.2, 1.0],
            1e-12,
            5,
        );
        assert_eq!(m.stop, StopReason::MaxIterations);
        assert_eq!(m.iterations, 5);
        assert!(m.value.is_finite());
    }
}
