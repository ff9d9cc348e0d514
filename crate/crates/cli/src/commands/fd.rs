use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use subflow_core::fd_solver::{
    self, collapse_diagnostic, cumulative_moisture_numeric, history_csv, wetting_front_numeric,
    DEFAULT_FRONT_THRESHOLD,
};
use subflow_core::selfsim::{cumulative_moisture, profile, similarity_exponents, DEFAULT_TERMS};
use subflow_core::{
    BoundaryCondition, FDConfig, FDField, MoistureMethod, SeriesSolution, SimilarityExponents,
    SimilarityProblem,
};

use super::row;
use crate::config::{self, require};
use crate::exit;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// JSON file with any of the parameters below; flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Fractional order in (0, 1]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Diffusivity exponent; 0 gives the linear equation
    #[arg(long)]
    pub m: Option<f64>,
    /// Boundary condition at x = 0: concentration or flux
    #[arg(long)]
    pub bc: Option<BoundaryCondition>,
    /// Number of grid nodes
    #[arg(long)]
    pub nx: Option<usize>,
    /// Grid spacing
    #[arg(long)]
    pub dx: Option<f64>,
    /// Time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Implicit weight of the diffusion term in [0, 1]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Times written to history.csv and approximant.csv
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    /// Times entering the collapse diagnostic (default: snapshots, or five
    /// equally spaced times when fewer than two snapshots are given)
    #[arg(long, value_delimiter = ',')]
    pub collapse_times: Option<Vec<f64>>,
    /// Amplitude exponent a for the collapse (default: similarity exponent)
    #[arg(long)]
    pub exponent_a: Option<f64>,
    /// Similarity-variable exponent b for the collapse (default: similarity exponent)
    #[arg(long)]
    pub exponent_b: Option<f64>,
    /// Taylor terms of the comparison approximant
    #[arg(long)]
    pub terms: Option<usize>,
    /// Front threshold relative to the boundary value
    #[arg(long)]
    pub front_threshold: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    #[serde(flatten)]
    grid: FDConfig,
    snapshots: Vec<f64>,
    collapse_times: Vec<f64>,
    exponent_a: f64,
    exponent_b: f64,
    terms: usize,
    front_threshold: f64,
    out: PathBuf,
}

/// Exponents for m >= 0; the formulas extend continuously to the linear case.
fn exponents(alpha: f64, m: f64, bc: BoundaryCondition) -> SimilarityExponents {
    similarity_exponents(&SimilarityProblem { alpha, m, bc })
}

fn resolve(p: Params) -> anyhow::Result<Resolved> {
    let grid = FDConfig {
        nx: p.nx.unwrap_or(600),
        dx: p.dx.unwrap_or(5e-4),
        dt: p.dt.unwrap_or(2.5e-5),
        t_end: p.t_end.unwrap_or(0.1),
        alpha: require(p.alpha, "alpha")?,
        m: require(p.m, "m")?,
        bc: require(p.bc, "bc")?,
        theta: p.theta.unwrap_or(1.0),
    };
    grid.validate()?;
    let fifths: Vec<f64> = (1..=5).map(|i| grid.t_end * i as f64 / 5.0).collect();
    let snapshots = p.snapshots.unwrap_or_else(|| fifths.clone());
    if let Some(t) = snapshots
        .iter()
        .find(|&&t| !(t > 0.0 && t <= grid.t_end * (1.0 + 1e-12)))
    {
        return Err(exit::validation(format!(
            "invalid parameter `snapshots`: {t} not in (0, t_end]"
        )));
    }
    // a collapse needs two times; a single snapshot falls back to the fifths
    let collapse_times = p.collapse_times.unwrap_or_else(|| {
        if snapshots.len() >= 2 {
            snapshots.clone()
        } else {
            fifths
        }
    });
    let e = exponents(grid.alpha, grid.m, grid.bc);
    let r = Resolved {
        grid,
        snapshots,
        collapse_times,
        exponent_a: p.exponent_a.unwrap_or(e.a),
        exponent_b: p.exponent_b.unwrap_or(e.b),
        terms: p.terms.unwrap_or(DEFAULT_TERMS),
        front_threshold: p.front_threshold.unwrap_or(DEFAULT_FRONT_THRESHOLD),
        out: p.out.unwrap_or_else(|| PathBuf::from(".")),
    };
    if r.terms == 0 {
        return Err(exit::validation(
            "invalid parameter `terms`: N must be at least 1",
        ));
    }
    if !(r.front_threshold > 0.0 && r.front_threshold < 1.0) {
        return Err(exit::validation(
            "invalid parameter `front_threshold`: must lie in (0, 1)",
        ));
    }
    Ok(r)
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let r = resolve(config::merge(&args.params, args.config.as_deref())?)?;
    let field = fd_solver::run(&r.grid)?;
    let dir = config::output_dir(&r.out)?;
    let header = config::header("fd", &r);
    let g = &r.grid;

    // the series approximant exists only for m > 0
    let approx = if g.m > 0.0 {
        Some(SeriesSolution::new(
            SimilarityProblem::new(g.alpha, g.m, g.bc)?,
            r.terms,
        )?)
    } else {
        None
    };

    let history = header.clone() + &history_csv(g, &field, Some(&r.snapshots));
    config::write(&dir.join("history.csv"), &history)?;

    let mut front = header.clone();
    front.push_str("t,x_front,x_front_selfsim\n");
    for (t, x) in wetting_front_numeric(&field, r.front_threshold) {
        let model = approx
            .as_ref()
            .map_or(f64::NAN, |s| s.eta_star * t.powf(s.exponents.b));
        row(&mut front, &[t, x, model]);
    }
    config::write(&dir.join("front.csv"), &front)?;

    let mut infiltration = header.clone();
    infiltration.push_str("t,I,I_selfsim\n");
    for (t, i) in cumulative_moisture_numeric(&field) {
        let model = match &approx {
            Some(s) if t > 0.0 => cumulative_moisture(s, t, MoistureMethod::Quadrature)?,
            _ => f64::NAN,
        };
        row(&mut infiltration, &[t, i, model]);
    }
    config::write(&dir.join("infiltration.csv"), &infiltration)?;

    if let Some(s) = &approx {
        config::write(
            &dir.join("approximant.csv"),
            &(header.clone() + &approximant_csv(&field, s, &r.snapshots)),
        )?;
    }

    let exps = SimilarityExponents {
        a: r.exponent_a,
        b: r.exponent_b,
    };
    let distance = collapse_diagnostic(&field, &exps, &r.collapse_times)?;
    let mut collapse = header;
    let _ = writeln!(collapse, "collapse_sup_distance={}", config::num(distance));
    config::write(&dir.join("collapse.txt"), &collapse)?;
    println!("collapse_sup_distance={}", config::num(distance));
    Ok(())
}

/// FD snapshots next to t^a U(x / t^b) on the same nodes.
fn approximant_csv(field: &FDField, sol: &SeriesSolution, snapshots: &[f64]) -> String {
    let mut out = String::from("t,x,u,u_selfsim\n");
    let e = sol.exponents;
    for &ts in snapshots {
        let Some(n) = field.level_index(ts) else {
            continue;
        };
        let t = field.times[n];
        for (i, &u) in field.history[n].iter().enumerate() {
            let x = i as f64 * field.dx;
            row(
                &mut out,
                &[t, x, u, t.powf(e.a) * profile(sol, x / t.powf(e.b))],
            );
        }
    }
    out
}
