use serde::{Deserialize, Serialize};

use super::series::{profile, SeriesSolution};
use super::BoundaryCondition;
use crate::error::{Error, Result};

/// Physical scales of an experiment with D(u) = D₀ u^m.
///
/// `amplitude` is the face concentration C for the concentration condition
/// and the face flux Q (−D(u) u_x = Q) for the flux condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub length: f64,
    pub d0: f64,
    pub amplitude: f64,
}

impl Scaling {
    pub fn new(length: f64, d0: f64, amplitude: f64) -> Result<Self> {
        for (what, value) in [("length", length), ("D0", d0), ("amplitude", amplitude)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositive { what, value });
            }
        }
        Ok(Self {
            length,
            d0,
            amplitude,
        })
    }
}

/// u(x, t) = U_c (t/T)^a U((x/L) / (t/T)^b) in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionalProfile {
    pub solution: SeriesSolution,
    pub scaling: Scaling,
    /// Concentration scale U_c.
    pub u_scale: f64,
    /// Time scale T.
    pub time_scale: f64,
}

impl DimensionalProfile {
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let e = self.solution.exponents;
        let tau = t / self.time_scale;
        let eta = x / self.scaling.length / tau.powf(e.b);
        self.u_scale * tau.powf(e.a) * profile(&self.solution, eta)
    }

    /// Position of the wetting front at time t.
    pub fn front(&self, t: f64) -> f64 {
        let tau = t / self.time_scale;
        self.scaling.length * self.solution.eta_star * tau.powf(self.solution.exponents.b)
    }
}

/// Concentration condition: U_c = C and T = (L²/(D₀ C^m))^{1/α}.
/// Flux condition: U_c = (Q L / D₀)^{1/(m+1)} and T = (L²/(D₀ U_c^m))^{1/α}.
///
/// In both cases L drops out of u(x, t).
pub fn dimensionalize(sol: &SeriesSolution, scaling: Scaling) -> Result<DimensionalProfile> {
    let scaling = Scaling::new(scaling.length, scaling.d0, scaling.amplitude)?;
    let p = sol.problem;
    let u_scale = match p.bc {
        BoundaryCondition::Concentration => scaling.amplitude,
        BoundaryCondition::Flux => {
            (scaling.amplitude * scaling.length / scaling.d0).powf(1.0 / (p.m + 1.0))
        }
    };
    let time_scale =
        (scaling.length * scaling.length / (scaling.d0 * u_scale.powf(p.m))).powf(1.0 / p.alpha);
    Ok(DimensionalProfile {
        solution: sol.clone(),
        scaling,
        u_scale,
        time_scale,
    })
}
