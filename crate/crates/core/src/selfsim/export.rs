use std::fmt::Write as _;
use std::path::Path;

use super::series::{profile, SeriesSolution};
use crate::error::{invalid, Result};

/// CSV of (eta, U) on `samples` equally spaced points covering [0, η*],
/// preceded by `#` metadata lines.
pub fn profile_csv(sol: &SeriesSolution, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(invalid("samples", "need at least two points"));
    }
    let mut out = String::new();
    let p = &sol.problem;
    // writing into a String cannot fail
    let _ = writeln!(out, "# alpha={:.16e}", p.alpha);
    let _ = writeln!(out, "# m={:.16e}", p.m);
    let _ = writeln!(out, "# bc={}", p.bc);
    let _ = writeln!(out, "# N={}", sol.n_terms());
    let _ = writeln!(out, "# eta_star={:.16e}", sol.eta_star);
    out.push_str("eta,U\n");
    for i in 0..samples {
        let eta = sol.eta_star * i as f64 / (samples - 1) as f64;
        let _ = writeln!(out, "{:.16e},{:.16e}", eta, profile(sol, eta));
    }
    Ok(out)
}

pub fn write_profile_csv(path: &Path, sol: &SeriesSolution, samples: usize) -> Result<()> {
    std::fs::write(path, profile_csv(sol, samples)?)?;
    Ok(())
}
