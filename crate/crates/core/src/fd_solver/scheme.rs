use log::{debug, warn};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::reciprocal_gamma;
use crate::numerics::tridiagonal::solve_tridiagonal_in_place;
use crate::selfsim::BoundaryCondition;

/// Grid, time stepping and model parameters of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    pub nx: usize,
    pub dx: f64,
    pub dt: f64,
    pub t_end: f64,
    pub alpha: f64,
    /// Diffusivity exponent; m = 0 gives the linear equation.
    pub m: f64,
    pub bc: BoundaryCondition,
    /// Weight of the new level in the diffusion term; 1 is fully implicit.
    #[serde(default = "default_theta")]
    pub theta: f64,
}

fn default_theta() -> f64 {
    1.0
}

pub const MIN_NODES: usize = 16;

/// Relative size of clamped undershoot mass that aborts a run.
const CLAMP_LIMIT: f64 = 1e-6;
/// The node next to the far boundary must stay below this fraction of max u.
const OVERFLOW_LEVEL: f64 = 1e-8;

impl FDConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nx < MIN_NODES {
            return Err(invalid("nx", format!("{} < {MIN_NODES}", self.nx)));
        }
        for (name, v) in [("dx", self.dx), ("dt", self.dt), ("t_end", self.t_end)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("{v} must be positive")));
            }
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(invalid("alpha", format!("{} not in (0, 1]", self.alpha)));
        }
        if !(self.m >= 0.0 && self.m.is_finite()) {
            return Err(invalid("m", format!("{} must be non-negative", self.m)));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(invalid("theta", format!("{} not in [0, 1]", self.theta)));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }

    pub fn length(&self) -> f64 {
        (self.nx - 1) as f64 * self.dx
    }
}

/// Solution on the uniform grid x_i = i dx for every stored time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FDField {
    pub dx: f64,
    pub times: Vec<f64>,
    pub history: Vec<Vec<f64>>,
    /// Number of nodal values raised from below zero to zero.
    pub clamp_count: usize,
    /// Total mass added by clamping.
    pub clamped_mass: f64,
}

impl FDField {
    pub fn zeros(nx: usize, dx: f64) -> Self {
        Self {
            dx,
            times: vec![0.0],
            history: vec![vec![0.0; nx]],
            clamp_count: 0,
            clamped_mass: 0.0,
        }
    }

    pub fn nx(&self) -> usize {
        self.history.first().map_or(0, Vec::len)
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.nx()).map(|i| i as f64 * self.dx).collect()
    }

    pub fn latest(&self) -> &[f64] {
        self.history.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Index of the stored level closest to t.
    pub fn level_index(&self, t: f64) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &ti) in self.times.iter().enumerate() {
            let d = (ti - t).abs();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }

    /// Profile at the stored level nearest to t.
    pub fn profile_at(&self, t: f64) -> Option<&[f64]> {
        self.level_index(t).map(|i| self.history[i].as_slice())
    }
}

/// L1 weights b_j = (j+1)^{1−α} − j^{1−α}, j = 0 … n−1.
pub fn l1_weights(alpha: f64, n: usize) -> Vec<f64> {
    let p = 1.0 - alpha;
    (0..n)
        .map(|j| match j {
            // 0^0 would be 1 at α = 1
            0 => 1.0,
            j => (j as f64 + 1.0).powf(p) - (j as f64).powf(p),
        })
        .collect()
}

/// Trapezoid rule on the uniform grid.
pub(crate) fn trapezoid(u: &[f64], dx: f64) -> f64 {
    match u.len() {
        0 | 1 => 0.0,
        n => dx * (u.iter().sum::<f64>() - 0.5 * (u[0] + u[n - 1])),
    }
}

/// L1 / finite-volume scheme for ∂^α_t u = (u^m u_x)_x on [0, (nx−1) dx].
///
/// Each control volume around x_i balances
/// `c [Σ_j b_j (u^{n+1−j} − u^{n−j})] = θ L[u^{n+1}] + (1−θ) L[u^n]`
/// with c = dt^{−α}/Γ(2−α) and L the conservative second difference
/// whose face diffusivities are the arithmetic means of u^m at the
/// previous level. The first node is a Dirichlet node (u = 1) or a half
/// cell receiving unit flux; the last node is held at zero.
#[derive(Debug, Clone)]
pub struct FDSolver {
    cfg: FDConfig,
    field: FDField,
    weights: Vec<f64>,
    c: f64,
    mem: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
}

impl FDSolver {
    pub fn new(cfg: FDConfig) -> Result<Self> {
        cfg.validate()?;
        let field = FDField::zeros(cfg.nx, cfg.dx);
        Self::resume(cfg, field)
    }

    /// Continue from an existing field.
    pub fn resume(cfg: FDConfig, field: FDField) -> Result<Self> {
        cfg.validate()?;
        if field.nx() != cfg.nx {
            return Err(Error::DimensionMismatch(format!(
                "field has {} nodes, config {}",
                field.nx(),
                cfg.nx
            )));
        }
        let nx = cfg.nx;
        let steps = cfg.steps().max(field.history.len());
        Ok(Self {
            weights: l1_weights(cfg.alpha, steps + 1),
            c: cfg.dt.powf(-cfg.alpha) * reciprocal_gamma(2.0 - cfg.alpha),
            cfg,
            field,
            mem: vec![0.0; nx],
            lower: vec![0.0; nx - 1],
            diag: vec![0.0; nx],
            upper: vec![0.0; nx - 1],
            scratch: vec![0.0; nx],
        })
    }

    pub fn config(&self) -> &FDConfig {
        &self.cfg
    }

    pub fn field(&self) -> &FDField {
        &self.field
    }

    pub fn into_field(self) -> FDField {
        self.field
    }

    /// Memory term Σ_{j=1}^{n} b_j (u^{n+1−j} − u^{n−j}) for the next level.
    fn accumulate_memory(&mut self) {
        let h = &self.field.history;
        let n = h.len() - 1;
        if self.weights.len() <= n {
            self.weights = l1_weights(self.cfg.alpha, 2 * n + 2);
        }
        self.mem.iter_mut().for_each(|v| *v = 0.0);
        for j in 1..=n {
            let bj = self.weights[j];
            let (newer, older) = (&h[n + 1 - j], &h[n - j]);
            for ((m, a), b) in self.mem.iter_mut().zip(newer).zip(older) {
                *m += bj * (a - b);
            }
        }
    }

    /// Appends one time level.
    pub fn advance(&mut self) -> Result<()> {
        self.accumulate_memory();
        let cfg = self.cfg;
        let nx = cfg.nx;
        let (dx, theta, c) = (cfg.dx, cfg.theta, self.c);
        let old = self.field.latest().to_vec();
        let t_new = self.field.times.len() as f64 * cfg.dt;

        // face conductances D_{i+1/2}/dx from the previous level
        let k: Vec<f64> = old
            .windows(2)
            .map(|w| 0.5 * (w[0].powf(cfg.m) + w[1].powf(cfg.m)) / dx)
            .collect();
        let flux = |i: usize| -k[i] * (old[i + 1] - old[i]);

        let rhs = &mut self.scratch;
        for i in 0..nx {
            let vol = if i == 0 { 0.5 * dx } else { dx };
            self.diag[i] = vol * c;
            rhs[i] = vol * c * (old[i] - self.mem[i]);
        }
        for i in 0..nx - 1 {
            // face between i and i+1
            self.diag[i] += theta * k[i];
            self.diag[i + 1] += theta * k[i];
            self.upper[i] = -theta * k[i];
            self.lower[i] = -theta * k[i];
            let f = (1.0 - theta) * flux(i);
            rhs[i] -= f;
            rhs[i + 1] += f;
        }
        self.apply_boundary();

        let mut next = std::mem::take(&mut self.scratch);
        let mut work = vec![0.0; nx];
        solve_tridiagonal_in_place(&self.lower, &self.diag, &self.upper, &mut next, &mut work)?;
        self.scratch = work;

        let mut clamped = 0.0;
        for v in next.iter_mut() {
            if *v < 0.0 {
                clamped -= *v;
                *v = 0.0;
                self.field.clamp_count += 1;
            }
        }
        if clamped > 0.0 {
            self.field.clamped_mass += clamped * dx;
            debug!("t = {t_new}: clamped undershoot {clamped:e}");
        }
        let total = trapezoid(&next, dx);
        if self.field.clamped_mass > CLAMP_LIMIT * total && self.field.clamped_mass > 0.0 {
            warn!("excessive clamping at t = {t_new}");
            return Err(Error::ExcessiveClamping {
                clamped: self.field.clamped_mass,
                total,
            });
        }
        let peak = next.iter().cloned().fold(0.0, f64::max);
        if peak > 0.0 && next[nx - 2] > OVERFLOW_LEVEL * peak {
            return Err(Error::DomainOverflow { t: t_new });
        }
        self.field.history.push(next);
        self.field.times.push(t_new);
        Ok(())
    }

    /// Boundary rows: node 0 from the face condition, node nx−1 held at zero.
    fn apply_boundary(&mut self) {
        let nx = self.cfg.nx;
        match self.cfg.bc {
            BoundaryCondition::Concentration => {
                self.diag[0] = 1.0;
                self.upper[0] = 0.0;
                self.scratch[0] = 1.0;
            }
            BoundaryCondition::Flux => {
                // unit inflow through the face of the half cell
                self.scratch[0] += 1.0;
            }
        }
        self.diag[nx - 1] = 1.0;
        self.lower[nx - 2] = 0.0;
        self.scratch[nx - 1] = 0.0;
    }

    /// Runs to t_end.
    pub fn run(&mut self) -> Result<()> {
        let steps = self.cfg.steps();
        while self.field.times.len() <= steps {
            self.advance()?;
        }
        Ok(())
    }
}

/// Appends one level to `field` for the given configuration.
pub fn advance(cfg: &FDConfig, field: FDField) -> Result<FDField> {
    let mut s = FDSolver::resume(*cfg, field)?;
    s.advance()?;
    Ok(s.into_field())
}

/// Runs a fresh simulation from the dry initial state to t_end.
pub fn run(cfg: &FDConfig) -> Result<FDField> {
    let mut s = FDSolver::new(*cfg)?;
    s.run()?;
    Ok(s.into_field())
}
