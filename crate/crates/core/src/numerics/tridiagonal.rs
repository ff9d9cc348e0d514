use crate::error::{Error, Result};

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[i]` multiplies x[i] in row i+1 and `upper[i]` multiplies x[i+1] in
/// row i, so both off-diagonals have length n-1.
pub fn solve_tridiagonal(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = diag.len();
    if rhs.len() != n || (n > 0 && (lower.len() != n - 1 || upper.len() != n - 1)) {
        return Err(Error::DimensionMismatch(format!(
            "diag {}, rhs {}, lower {}, upper {}",
            n,
            rhs.len(),
            lower.len(),
            upper.len()
        )));
    }
    let mut x = rhs.to_vec();
    let mut scratch = vec![0.0; n];
    solve_tridiagonal_in_place(lower, diag, upper, &mut x, &mut scratch)?;
    Ok(x)
}

/// In-place variant used by the time stepper; `x` holds the right-hand side on
/// entry and the solution on exit.
pub(crate) fn solve_tridiagonal_in_place(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    x: &mut [f64],
    scratch: &mut [f64],
) -> Result<()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    let scale = diag
        .iter()
        .fold(0.0_f64, |m, d| m.max(d.abs()))
        .max(f64::MIN_POSITIVE);
    let tiny = 1e-300_f64.max(f64::EPSILON * 1e-3 * scale);
    let mut pivot = diag[0];
    if pivot.abs() <= tiny {
        return Err(Error::SingularPivot { row: 0 });
    }
    x[0] /= pivot;
    for i in 1..n {
        scratch[i] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i];
        if pivot.abs() <= tiny {
            return Err(Error::SingularPivot { row: i });
        }
        x[i] = (x[i] - lower[i - 1] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= scratch[i + 1] * x[i + 1];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let r = vec![1.0, -2.0, 3.5];
        let x = solve_tridiagonal(&[0.0, 0.0], &[1.0; 3], &[0.0, 0.0], &r).unwrap();
        assert_eq!(x, r);
    }

    #[test]
    fn two_by_two() {
        let x = solve_tridiagonal(&[-1.0], &[2.0, 2.0], &[-1.0], &[1.0, 1.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singular_pivot() {
        let e = solve_tridiagonal(&[1.0], &[1.0, 1.0], &[1.0], &[1.0, 2.0]);
        assert_eq!(e, Err(Error::SingularPivot { row: 1 }));
        assert!(solve_tridiagonal(&[], &[0.0], &[], &[1.0]).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            solve_tridiagonal(&[1.0], &[1.0, 1.0, 1.0], &[1.0, 1.0], &[1.0; 3]),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
