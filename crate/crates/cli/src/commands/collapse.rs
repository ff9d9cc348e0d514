use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use subflow_core::fd_solver::{collapse_diagnostic, read_history_csv};
use subflow_core::selfsim::similarity_exponents;
use subflow_core::{BoundaryCondition, SimilarityExponents, SimilarityProblem};

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
    /// history.csv written by `subflow fd`
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Times to compare (default: every stored time after t = 0)
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Fractional order (default: from the history metadata)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Diffusivity exponent (default: from the history metadata)
    #[arg(long)]
    pub m: Option<f64>,
    /// Boundary condition (default: from the history metadata)
    #[arg(long)]
    pub bc: Option<BoundaryCondition>,
    /// Amplitude exponent a, overriding the similarity exponent
    #[arg(long)]
    pub exponent_a: Option<f64>,
    /// Similarity-variable exponent b, overriding the similarity exponent
    #[arg(long)]
    pub exponent_b: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    input: PathBuf,
    times: Vec<f64>,
    exponent_a: f64,
    exponent_b: f64,
    out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let p = config::merge(&args.params, args.config.as_deref())?;
    let input = require(p.input, "input")?;
    let (meta, field) = read_history_csv(&input)?;
    let alpha = p.alpha.or(meta.map(|c| c.alpha));
    let m = p.m.or(meta.map(|c| c.m));
    let bc = p.bc.or(meta.map(|c| c.bc));
    let (a, b) = match (p.exponent_a, p.exponent_b) {
        (Some(a), Some(b)) => (a, b),
        (ea, eb) => {
            let problem = SimilarityProblem {
                alpha: require(alpha, "alpha")?,
                m: require(m, "m")?,
                bc: require(bc, "bc")?,
            };
            if !(problem.alpha > 0.0 && problem.alpha <= 1.0 && problem.m >= 0.0) {
                return Err(exit::validation(
                    "invalid parameter `alpha`/`m`: need alpha in (0, 1] and m >= 0",
                ));
            }
            // the exponent formulas hold down to the linear case m = 0
            let e = similarity_exponents(&problem);
            (ea.unwrap_or(e.a), eb.unwrap_or(e.b))
        }
    };
    let r = Resolved {
        input,
        times: p
            .times
            .unwrap_or_else(|| field.times.iter().copied().filter(|&t| t > 0.0).collect()),
        exponent_a: a,
        exponent_b: b,
        out: p.out.unwrap_or_else(|| PathBuf::from(".")),
    };
    let distance = collapse_diagnostic(&field, &SimilarityExponents { a, b }, &r.times)?;
    let dir = config::output_dir(&r.out)?;
    let mut text = config::header("collapse", &r);
    let _ = writeln!(text, "collapse_sup_distance={}", config::num(distance));
    config::write(&dir.join("collapse.txt"), &text)?;
    println!("collapse_sup_distance={}", config::num(distance));
    Ok(())
}
