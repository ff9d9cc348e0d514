use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use subflow_core::selfsim::{
    cumulative_moisture, profile, profile_csv, profile_derivative_at_zero, DEFAULT_TERMS,
};
use subflow_core::{BoundaryCondition, MoistureMethod, SeriesSolution, SimilarityProblem};

use super::{linspace, row};
use crate::config::{self, require};

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
    /// Diffusivity exponent, D(u) = D0 u^m
    #[arg(long)]
    pub m: Option<f64>,
    /// Boundary condition at x = 0: concentration or flux
    #[arg(long)]
    pub bc: Option<BoundaryCondition>,
    /// Number of Taylor terms N
    #[arg(long = "terms", short = 'N')]
    pub terms: Option<usize>,
    /// Points on [0, eta*] in profile.csv
    #[arg(long)]
    pub samples: Option<usize>,
    /// First time in moisture.csv
    #[arg(long)]
    pub t_min: Option<f64>,
    /// Last time in moisture.csv
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Number of times in moisture.csv
    #[arg(long)]
    pub t_count: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    alpha: f64,
    m: f64,
    bc: BoundaryCondition,
    terms: usize,
    samples: usize,
    t_min: f64,
    t_max: f64,
    t_count: usize,
    out: PathBuf,
}

fn resolve(p: Params) -> anyhow::Result<Resolved> {
    let r = Resolved {
        alpha: require(p.alpha, "alpha")?,
        m: require(p.m, "m")?,
        bc: require(p.bc, "bc")?,
        terms: p.terms.unwrap_or(DEFAULT_TERMS),
        samples: p.samples.unwrap_or(201),
        t_min: p.t_min.unwrap_or(0.1),
        t_max: p.t_max.unwrap_or(1.0),
        t_count: p.t_count.unwrap_or(10),
        out: p.out.unwrap_or_else(|| PathBuf::from(".")),
    };
    if r.terms == 0 {
        return Err(crate::exit::validation(
            "invalid parameter `terms`: N must be at least 1",
        ));
    }
    if r.samples < 2 {
        return Err(crate::exit::validation(
            "invalid parameter `samples`: need at least 2",
        ));
    }
    if !(r.t_min > 0.0 && r.t_max >= r.t_min) || r.t_count == 0 {
        return Err(crate::exit::validation(
            "invalid parameter `t_min`/`t_max`/`t_count`: need 0 < t_min <= t_max and t_count >= 1",
        ));
    }
    Ok(r)
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let r = resolve(config::merge(&args.params, args.config.as_deref())?)?;
    let problem = SimilarityProblem::new(r.alpha, r.m, r.bc)?;
    let sol = SeriesSolution::new(problem, r.terms)?;
    let dir = config::output_dir(&r.out)?;
    let header = config::header("selfsim", &r);

    config::write(
        &dir.join("profile.csv"),
        &(header.clone() + &profile_csv(&sol, r.samples)?),
    )?;

    let solution = json!({
        "config": r,
        "coeffs": sol.coeffs,
        "eta_star": sol.eta_star,
        "A": sol.abc.a,
        "B": sol.abc.b,
        "a": sol.exponents.a,
        "b": sol.exponents.b,
        "U0": profile(&sol, 0.0),
        "dU0": profile_derivative_at_zero(&sol),
    });
    config::write(
        &dir.join("solution.json"),
        &(serde_json::to_string_pretty(&solution)? + "\n"),
    )?;

    let mut moisture = header;
    moisture.push_str("t,I_quadrature,I_one_term,I_two_term\n");
    for t in linspace(r.t_min, r.t_max, r.t_count) {
        let values = [
            t,
            cumulative_moisture(&sol, t, MoistureMethod::Quadrature)?,
            cumulative_moisture(&sol, t, MoistureMethod::OneTerm)?,
            cumulative_moisture(&sol, t, MoistureMethod::TwoTerm)?,
        ];
        row(&mut moisture, &values);
    }
    config::write(&dir.join("moisture.csv"), &moisture)?;
    println!("eta_star={}", config::num(sol.eta_star));
    Ok(())
}
