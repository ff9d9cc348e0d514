use super::scheme::{trapezoid, FDField};
use crate::error::{invalid, Result};
use crate::selfsim::SimilarityExponents;

/// Default front threshold as a fraction of the profile maximum.
pub const DEFAULT_FRONT_THRESHOLD: f64 = 1e-3;

/// Linear interpolation of samples (xs increasing); zero outside the range.
pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&v| v <= x);
    if i == 0 {
        return ys[0];
    }
    if i >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    let w = (x - x0) / (x1 - x0);
    ys[i - 1] + w * (ys[i] - ys[i - 1])
}

/// Profile at time t in similarity variables (η = x t^{−b}, V = u t^{−a}).
pub fn rescaled_profile(
    field: &FDField,
    exps: &SimilarityExponents,
    t: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(t > 0.0) {
        return Err(invalid("times", format!("{t} must be positive")));
    }
    let idx = field
        .level_index(t)
        .ok_or_else(|| invalid("field", "no stored levels"))?;
    let t = field.times[idx];
    let (sx, su) = (t.powf(-exps.b), t.powf(-exps.a));
    let eta = field.x().iter().map(|x| x * sx).collect();
    let v = field.history[idx].iter().map(|u| u * su).collect();
    Ok((eta, v))
}

/// Largest pairwise sup-distance between the rescaled profiles at `times`,
/// each pair compared on its common η-range at the nodes of both grids.
pub fn collapse_diagnostic(
    field: &FDField,
    exps: &SimilarityExponents,
    times: &[f64],
) -> Result<f64> {
    if times.len() < 2 {
        return Err(invalid("times", "need at least two times"));
    }
    let profiles = times
        .iter()
        .map(|&t| rescaled_profile(field, exps, t))
        .collect::<Result<Vec<_>>>()?;
    let mut worst: f64 = 0.0;
    for (i, (ea, va)) in profiles.iter().enumerate() {
        for (eb, vb) in &profiles[i + 1..] {
            let end = ea[ea.len() - 1].min(eb[eb.len() - 1]);
            for &eta in ea.iter().chain(eb.iter()).filter(|&&e| e <= end) {
                let d = (interpolate(ea, va, eta) - interpolate(eb, vb, eta)).abs();
                worst = worst.max(d);
            }
        }
    }
    Ok(worst)
}

/// Front position of one profile: the largest x with u > threshold,
/// interpolated to the crossing.
pub fn front_position(u: &[f64], dx: f64, threshold: f64) -> f64 {
    let Some(i) = u.iter().rposition(|&v| v > threshold) else {
        return 0.0;
    };
    if i + 1 >= u.len() {
        return i as f64 * dx;
    }
    let w = (u[i] - threshold) / (u[i] - u[i + 1]);
    (i as f64 + w) * dx
}

/// (t, x_front) for every stored level, with the threshold taken as
/// `rel_threshold` times the maximum of each profile.
pub fn wetting_front_numeric(field: &FDField, rel_threshold: f64) -> Vec<(f64, f64)> {
    field
        .times
        .iter()
        .zip(&field.history)
        .map(|(&t, u)| {
            let peak = u.iter().cloned().fold(0.0, f64::max);
            if peak <= 0.0 {
                (t, 0.0)
            } else {
                (t, front_position(u, field.dx, rel_threshold * peak))
            }
        })
        .collect()
}

/// (t, I) with I the trapezoid integral of each stored profile.
pub fn cumulative_moisture_numeric(field: &FDField) -> Vec<(f64, f64)> {
    field
        .times
        .iter()
        .zip(&field.history)
        .map(|(&t, u)| (t, trapezoid(u, field.dx)))
        .collect()
}

/// Least-squares slope of log y against log t over pairs with t, y > 0.
pub fn log_log_slope(series: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, y)| *t > 0.0 && *y > 0.0)
        .map(|(t, y)| (t.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn erfc_field(times: &[f64], nx: usize, dx: f64) -> FDField {
        let mut f = FDField::zeros(nx, dx);
        for &t in times {
            f.times.push(t);
            f.history.push(
                (0..nx)
                    .map(|i| erfc_approx(i as f64 * dx / (2.0 * t.sqrt())))
                    .collect(),
            );
        }
        f
    }

    // only self-similarity matters here, any smooth decreasing shape will do
    fn erfc_approx(x: f64) -> f64 {
        (-x * x).exp() / (1.0 + x)
    }

    #[test]
    fn identical_times_collapse_exactly() {
        let f = erfc_field(&[0.1, 0.2], 400, 0.005);
        let e = SimilarityExponents { a: 0.0, b: 0.5 };
        assert_eq!(collapse_diagnostic(&f, &e, &[0.1, 0.1]).unwrap(), 0.0);
        assert!(collapse_diagnostic(&f, &e, &[0.1, 0.2]).unwrap() < 1e-3);
        let wrong = SimilarityExponents { a: 0.0, b: 0.3 };
        assert!(collapse_diagnostic(&f, &wrong, &[0.1, 0.2]).unwrap() > 1e-2);
        assert!(collapse_diagnostic(&f, &e, &[0.1]).is_err());
    }

    #[test]
    fn zero_field_front_and_mass() {
        let f = FDField::zeros(32, 0.1);
        assert_eq!(wetting_front_numeric(&f, 1e-3), vec![(0.0, 0.0)]);
        assert_eq!(cumulative_moisture_numeric(&f), vec![(0.0, 0.0)]);
    }

    #[test]
    fn front_interpolates() {
        let u = [1.0, 0.5, 0.0, 0.0];
        assert!((front_position(&u, 1.0, 0.25) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn slope() {
        let s: Vec<(f64, f64)> = (1..10)
            .map(|i| (i as f64, 3.0 * (i as f64).powf(0.4)))
            .collect();
        assert!((log_log_slope(&s).unwrap() - 0.4).abs() < 1e-12);
        assert!(log_log_slope(&s[..1]).is_none());
    }

    #[test]
    fn interpolation_edges() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [1.0, 3.0, 5.0];
        assert_eq!(interpolate(&xs, &ys, 0.5), 2.0);
        assert_eq!(interpolate(&xs, &ys, 2.0), 5.0);
        assert_eq!(interpolate(&xs, &ys, 2.5), 0.0);
    }
}
