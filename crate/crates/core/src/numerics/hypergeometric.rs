use crate::error::{Error, Result};

const MAX_TERMS: usize = 200_000;

/// Gauss hypergeometric function ₂F₁(a, b; c; z) by its power series, |z| < 1.
///
/// Summation stops once a term falls below 1e-14 of the running sum, or the
/// series terminates because `a` or `b` is a non-positive integer.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if c <= 0.0 && c == c.floor() {
        return Err(Error::Pole {
            arg: c,
            context: "hyp2f1 lower parameter".into(),
        });
    }
    if !(z.abs() < 1.0) {
        return Err(Error::Divergence { z: z.abs() });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    // a few consecutive small terms guard against accidental near-zero terms
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= 1e-14 * sum.abs() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::ToleranceNotMet {
        estimate: sum,
        error: term.abs(),
    })
}
