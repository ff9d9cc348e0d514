use log::debug;
use serde::{Deserialize, Serialize};

use super::data::MoistureProfile;
use crate::error::{invalid, Error, Result};
use crate::fd_solver::log_log_slope;
use crate::numerics::{minimize_with_steps, Minimum};
use crate::selfsim::{
    dimensionalize, DimensionalProfile, Scaling, SeriesSolution, SimilarityProblem, DEFAULT_TERMS,
};

pub const ALPHA_BOUNDS: (f64, f64) = (0.05, 1.0);
pub const D0_BOUNDS: (f64, f64) = (1e-6, 1e6);
pub const M_BOUNDS: (f64, f64) = (0.1, 10.0);
pub const MIN_SAMPLES: usize = 5;

const PENALTY: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub m: f64,
    pub m_fixed: bool,
    pub n_terms: usize,
    pub sse: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn params(&self) -> ModelParams {
        ModelParams {
            alpha: self.alpha,
            d0: self.d0,
            m: self.m,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Hold m at this value; otherwise m is fitted as well.
    pub fix_m: Option<f64>,
    pub start: Option<ModelParams>,
    pub n_terms: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            fix_m: None,
            start: None,
            n_terms: DEFAULT_TERMS,
            tol: 1e-9,
            max_iter: 4000,
        }
    }
}

/// The self-similar model for given parameters and the profile's scales.
pub fn model(
    profile: &MoistureProfile,
    params: &ModelParams,
    n_terms: usize,
) -> Result<DimensionalProfile> {
    let problem = SimilarityProblem::new(params.alpha, params.m, profile.bc)?;
    let sol = SeriesSolution::new(problem, n_terms)?;
    dimensionalize(&sol, Scaling::new(1.0, params.d0, profile.amplitude)?)
}

/// Sum of squared residuals between data and model at the profile's time.
/// Parameters for which no model exists give +∞.
pub fn objective(profile: &MoistureProfile, params: &ModelParams, n_terms: usize) -> f64 {
    match model(profile, params, n_terms) {
        Ok(d) => profile
            .samples
            .iter()
            .map(|&(x, u)| (d.eval(x, profile.time) - u).powi(2))
            .sum(),
        Err(e) => {
            debug!("objective undefined at {params:?}: {e}");
            f64::INFINITY
        }
    }
}

fn clamp_with_excess(v: f64, (lo, hi): (f64, f64)) -> (f64, f64) {
    if v < lo {
        (lo, lo - v)
    } else if v > hi {
        (hi, v - hi)
    } else {
        (v, 0.0)
    }
}

/// Starting point: α = 0.5 (or a seed), m = 1 unless fixed, and D₀ chosen
/// so that the model front matches the last wet sample.
fn initial_guess(
    profile: &MoistureProfile,
    fix_m: Option<f64>,
    n_terms: usize,
) -> Result<ModelParams> {
    let alpha = 0.5;
    let m = fix_m.unwrap_or(1.0);
    let peak = profile.us().into_iter().fold(0.0, f64::max);
    let x_front = profile
        .samples
        .iter()
        .rev()
        .find(|s| s.1 > 1e-3 * peak)
        .map(|s| s.0)
        .unwrap_or(0.0);
    if x_front <= 0.0 {
        return Ok(ModelParams { alpha, d0: 1.0, m });
    }
    // the front scales as a power of D₀; measure the power from two models
    let front = |d0: f64| -> Result<f64> {
        Ok(model(profile, &ModelParams { alpha, d0, m }, n_terms)?.front(profile.time))
    };
    let (f1, f2) = (front(1.0)?, front(2.0)?);
    let k = (f2 / f1).log2();
    let d0 = (x_front / f1).powf(1.0 / k);
    Ok(ModelParams {
        alpha,
        d0: d0.clamp(D0_BOUNDS.0, D0_BOUNDS.1),
        m,
    })
}

/// Least-squares fit of (α, D₀) and optionally m by Nelder–Mead, with the
/// box constraints enforced by a quadratic penalty. D₀ is searched in
/// log space.
pub fn fit(profile: &MoistureProfile, opts: &FitOptions) -> Result<FitResult> {
    if profile.len() < MIN_SAMPLES {
        return Err(Error::DegenerateFit(format!(
            "{} samples, need at least {MIN_SAMPLES}",
            profile.len()
        )));
    }
    if profile.us().iter().all(|&u| u == 0.0) {
        return Err(Error::DegenerateFit("all concentrations are zero".into()));
    }
    if let Some(m) = opts.fix_m {
        if !(m > 0.0) {
            return Err(invalid("m", format!("{m} must be positive")));
        }
    }
    let start = match opts.start {
        Some(s) => s,
        None => initial_guess(profile, opts.fix_m, opts.n_terms)?,
    };
    let decode = |v: &[f64]| -> (ModelParams, f64) {
        let (alpha, ea) = clamp_with_excess(v[0], ALPHA_BOUNDS);
        let (ln_d0, ed) = clamp_with_excess(v[1], (D0_BOUNDS.0.ln(), D0_BOUNDS.1.ln()));
        let (m, em) = match opts.fix_m {
            Some(m) => (m, 0.0),
            None => clamp_with_excess(v[2], M_BOUNDS),
        };
        let params = ModelParams {
            alpha,
            d0: ln_d0.exp(),
            m,
        };
        (params, PENALTY * (ea * ea + ed * ed + em * em))
    };
    let f = |v: &[f64]| {
        let (p, penalty) = decode(v);
        objective(profile, &p, opts.n_terms) + penalty
    };
    let mut x0 = vec![start.alpha, start.d0.ln()];
    let mut steps = vec![0.1, 0.5];
    if opts.fix_m.is_none() {
        x0.push(start.m);
        steps.push(0.2 * start.m);
    }
    let mut best: Minimum = minimize_with_steps(f, &x0, Some(&steps), opts.tol, opts.max_iter);
    let mut iterations = best.iterations;
    // one restart from the best vertex guards against a collapsed simplex
    let scaled: Vec<f64> = steps.iter().map(|s| 0.1 * s).collect();
    let again = minimize_with_steps(f, &best.argmin, Some(&scaled), opts.tol, opts.max_iter);
    iterations += again.iterations;
    if again.value <= best.value {
        best = again;
    }
    let (p, _) = decode(&best.argmin);
    let sse = objective(profile, &p, opts.n_terms);
    if !sse.is_finite() {
        return Err(Error::DegenerateFit(
            "no admissible parameters found".into(),
        ));
    }
    Ok(FitResult {
        alpha: p.alpha,
        d0: p.d0,
        m: p.m,
        m_fixed: opts.fix_m.is_some(),
        n_terms: opts.n_terms,
        sse,
        iterations,
        converged: best.converged(),
    })
}

/// Position where the profile last falls to `level` times its maximum.
fn level_crossing(profile: &MoistureProfile, level: f64) -> Result<f64> {
    let s = &profile.samples;
    let peak = s.iter().map(|p| p.1).fold(0.0, f64::max);
    let target = level * peak;
    let not_crossed = Error::LevelNotCrossed {
        level,
        time: profile.time,
    };
    if peak <= 0.0 {
        return Err(not_crossed);
    }
    let i = s
        .iter()
        .rposition(|p| p.1 >= target)
        .ok_or(not_crossed.clone())?;
    let Some(next) = s.get(i + 1) else {
        return Err(not_crossed);
    };
    let (x0, u0) = s[i];
    let w = (u0 - target) / (u0 - next.1);
    Ok(x0 + w * (next.0 - x0))
}

/// Slope of log x_level against log t, an estimate of the exponent b.
pub fn scaling_exponent_probe(profiles: &[MoistureProfile], level: f64) -> Result<f64> {
    if profiles.len() < 3 {
        return Err(invalid(
            "profiles",
            format!("{} given, need at least 3", profiles.len()),
        ));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(invalid("level", format!("{level} not in (0, 1)")));
    }
    let pts = profiles
        .iter()
        .map(|p| Ok((p.time, level_crossing(p, level)?)))
        .collect::<Result<Vec<_>>>()?;
    log_log_slope(&pts).ok_or_else(|| invalid("profiles", "times must be distinct"))
}
