use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::json;

use subflow_core::fitting::{fit, load_profile, model};
use subflow_core::selfsim::DEFAULT_TERMS;
use subflow_core::{FitOptions, ModelParams};

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
    /// Measured profile: `# time=` metadata and an `x,u` table
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Hold m at this value
    #[arg(long)]
    pub fix_m: Option<f64>,
    /// Taylor terms of the model profile
    #[arg(long)]
    pub terms: Option<usize>,
    /// Starting alpha (default: chosen from the data)
    #[arg(long)]
    pub start_alpha: Option<f64>,
    /// Starting D0 (default: chosen from the data)
    #[arg(long)]
    pub start_d0: Option<f64>,
    /// Starting m when m is fitted
    #[arg(long)]
    pub start_m: Option<f64>,
    /// Simplex convergence tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration budget of each simplex search
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    input: PathBuf,
    fix_m: Option<f64>,
    terms: usize,
    start_alpha: Option<f64>,
    start_d0: Option<f64>,
    start_m: Option<f64>,
    tol: f64,
    max_iter: usize,
    out: PathBuf,
}

fn resolve(p: Params) -> anyhow::Result<Resolved> {
    let defaults = FitOptions::default();
    let r = Resolved {
        input: require(p.input, "input")?,
        fix_m: p.fix_m,
        terms: p.terms.unwrap_or(DEFAULT_TERMS),
        start_alpha: p.start_alpha,
        start_d0: p.start_d0,
        start_m: p.start_m,
        tol: p.tol.unwrap_or(defaults.tol),
        max_iter: p.max_iter.unwrap_or(defaults.max_iter),
        out: p.out.unwrap_or_else(|| PathBuf::from(".")),
    };
    if r.terms == 0 {
        return Err(exit::validation(
            "invalid parameter `terms`: N must be at least 1",
        ));
    }
    if !(r.tol > 0.0) || r.max_iter == 0 {
        return Err(exit::validation(
            "invalid parameter `tol`/`max_iter`: both must be positive",
        ));
    }
    Ok(r)
}

/// A start point needs alpha and D0; m comes from `fix_m`, `start_m` or 1.
fn start(r: &Resolved) -> anyhow::Result<Option<ModelParams>> {
    match (r.start_alpha, r.start_d0) {
        (Some(alpha), Some(d0)) => Ok(Some(ModelParams {
            alpha,
            d0,
            m: r.fix_m.or(r.start_m).unwrap_or(1.0),
        })),
        (None, None) => Ok(None),
        _ => Err(exit::validation(
            "invalid parameter `start_alpha`/`start_d0`: give both or neither",
        )),
    }
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let r = resolve(config::merge(&args.params, args.config.as_deref())?)?;
    let data = load_profile(&r.input)?;
    let opts = FitOptions {
        fix_m: r.fix_m,
        start: start(&r)?,
        n_terms: r.terms,
        tol: r.tol,
        max_iter: r.max_iter,
    };
    let result = fit(&data, &opts).map_err(|e| exit::with_code(exit::FIT_FAILURE, e))?;
    let dir = config::output_dir(&r.out)?;
    let header = config::header("fit", &r);

    let report = json!({ "config": &r, "result": &result });
    config::write(
        &dir.join("fit.json"),
        &(serde_json::to_string_pretty(&report)? + "\n"),
    )?;

    let fitted = model(&data, &result.params(), r.terms)
        .map_err(|e| exit::with_code(exit::FIT_FAILURE, e))?;
    let mut overlay = header;
    overlay.push_str("x,u_data,u_model\n");
    for &(x, u) in &data.samples {
        row(&mut overlay, &[x, u, fitted.eval(x, data.time)]);
    }
    config::write(&dir.join("fit_overlay.csv"), &overlay)?;
    println!(
        "alpha={} D0={} m={}",
        config::num(result.alpha),
        config::num(result.d0),
        config::num(result.m)
    );
    Ok(())
}
