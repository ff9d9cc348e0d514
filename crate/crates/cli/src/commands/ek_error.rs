use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use subflow_core::ek_operator::{
    ek_apply_direct, ek_apply_series, ek_one_term_error_bound, ek_series_error_bound, ExpDecay,
    PowerFront,
};
use subflow_core::{EKParams, Profile, QuadratureSpec};

use super::row;
use crate::config::{self, require};
use crate::exit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestFunction {
    /// U(eta) = exp(-eta)
    ExpDecay,
    /// U(eta) = sqrt(1 - eta) on [0, 1], zero beyond
    SqrtSupport,
}

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
    /// Test profile
    #[arg(long, value_enum)]
    pub function: Option<TestFunction>,
    /// Operator parameter beta > -1
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    /// Operator parameter gamma > 0
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Operator parameter delta, nonzero
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// Shorthand for (beta, gamma, delta) = (0, 1 - alpha, -2/alpha)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Truncation orders, e.g. 1,2,3
    #[arg(long, value_delimiter = ',')]
    pub terms: Option<Vec<usize>>,
    /// Largest eta sampled
    #[arg(long)]
    pub eta_max: Option<f64>,
    /// Number of eta samples on (0, eta_max]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Relative tolerance of the direct quadrature
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct Resolved {
    function: TestFunction,
    beta: f64,
    gamma: f64,
    delta: f64,
    terms: Vec<usize>,
    eta_max: f64,
    samples: usize,
    rel_tol: f64,
    out: PathBuf,
}

fn resolve(p: Params) -> anyhow::Result<Resolved> {
    let function = require(p.function, "function")?;
    let (beta, gamma, delta) = match (p.alpha, p.beta, p.gamma, p.delta) {
        (Some(alpha), None, None, None) => (0.0, 1.0 - alpha, -2.0 / alpha),
        (None, Some(b), Some(g), Some(d)) => (b, g, d),
        (Some(_), ..) => {
            return Err(exit::validation(
                "invalid parameter `alpha`: give either alpha or beta, gamma and delta",
            ))
        }
        _ => {
            return Err(exit::validation(
                "missing required parameter `beta`, `gamma` or `delta`",
            ))
        }
    };
    let terms = require(p.terms, "terms")?;
    if terms.is_empty() || terms.contains(&0) {
        return Err(exit::validation(
            "invalid parameter `terms`: need a non-empty list of orders >= 1",
        ));
    }
    let r = Resolved {
        function,
        beta,
        gamma,
        delta,
        terms,
        eta_max: p.eta_max.unwrap_or(match function {
            TestFunction::ExpDecay => 2.0,
            TestFunction::SqrtSupport => 0.995,
        }),
        samples: p.samples.unwrap_or(200),
        rel_tol: p.rel_tol.unwrap_or(1e-12),
        out: p.out.unwrap_or_else(|| PathBuf::from(".")),
    };
    if !(r.eta_max > 0.0) || r.samples == 0 {
        return Err(exit::validation(
            "invalid parameter `eta_max`/`samples`: need eta_max > 0, samples >= 1",
        ));
    }
    Ok(r)
}

pub fn run(args: Args) -> anyhow::Result<()> {
    let r = resolve(config::merge(&args.params, args.config.as_deref())?)?;
    let p = EKParams::new(r.beta, r.gamma, r.delta)?;
    let spec = QuadratureSpec::adaptive(r.rel_tol);
    spec.validate()?;
    let sqrt = PowerFront::sqrt_unit();
    let u: &dyn Profile = match r.function {
        TestFunction::ExpDecay => &ExpDecay,
        TestFunction::SqrtSupport => &sqrt,
    };
    let dir = config::output_dir(&r.out)?;

    let mut out = config::header("ek-error", &r);
    let mut cols = vec!["eta".to_string(), "direct".to_string()];
    for prefix in ["series", "rel_err", "abs_err", "bound"] {
        cols.extend(r.terms.iter().map(|n| format!("{prefix}_{n}")));
    }
    out.push_str(&cols.join(","));
    out.push('\n');

    for i in 1..=r.samples {
        let eta = r.eta_max * i as f64 / r.samples as f64;
        let direct = ek_apply_direct(u, eta, &p, &spec)?;
        let series = r
            .terms
            .iter()
            .map(|&n| ek_apply_series(u, eta, &p, n))
            .collect::<Result<Vec<f64>, _>>()?;
        let abs: Vec<f64> = series.iter().map(|s| (direct - s).abs()).collect();
        let rel: Vec<f64> = abs
            .iter()
            .map(|e| {
                if direct != 0.0 {
                    e / direct.abs()
                } else {
                    f64::NAN
                }
            })
            .collect();
        let bounds = r
            .terms
            .iter()
            .map(|&n| bound(r.function, u, eta, &p, n))
            .collect::<Result<Vec<f64>, _>>()?;
        let mut values = vec![eta, direct];
        for part in [&series, &rel, &abs, &bounds] {
            values.extend_from_slice(part);
        }
        row(&mut out, &values);
    }
    config::write(&dir.join("ek_error.csv"), &out)?;
    Ok(())
}

/// The series bound needs sup |U^(N)|, which is 1 for exp(-eta) and
/// unbounded for the square root; there only the one-term bound applies.
fn bound(
    f: TestFunction,
    u: &dyn Profile,
    eta: f64,
    p: &EKParams,
    n: usize,
) -> subflow_core::Result<f64> {
    match f {
        TestFunction::ExpDecay if p.delta > 0.0 => ek_series_error_bound(1.0, eta, p, n),
        _ if n == 1 => ek_one_term_error_bound(u, eta, p),
        _ => Ok(f64::NAN),
    }
}
