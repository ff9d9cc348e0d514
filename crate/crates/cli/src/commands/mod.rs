pub mod collapse;
pub mod ek_error;
pub mod fd;
pub mod fit;
pub mod selfsim;

use std::fmt::Write as _;

/// Evenly spaced values from `lo` to `hi` inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// One CSV row in the shared number format.
pub(crate) fn row(out: &mut String, values: &[f64]) {
    let cells: Vec<String> = values.iter().map(|&v| crate::config::num(v)).collect();
    let _ = writeln!(out, "{}", cells.join(","));
}
