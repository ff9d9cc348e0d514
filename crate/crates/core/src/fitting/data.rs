use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::selfsim::BoundaryCondition;

/// Measured concentration samples at one acquisition time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoistureProfile {
    /// (x, u) pairs with x strictly increasing.
    pub samples: Vec<(f64, f64)>,
    pub time: f64,
    /// Face concentration C or face flux Q, depending on `bc`.
    pub amplitude: f64,
    pub bc: BoundaryCondition,
    #[serde(default)]
    pub x_unit: String,
    #[serde(default)]
    pub u_unit: String,
}

impl MoistureProfile {
    /// Validates and sorts the samples by x.
    pub fn new(
        mut samples: Vec<(f64, f64)>,
        time: f64,
        amplitude: f64,
        bc: BoundaryCondition,
    ) -> Result<Self> {
        if !(time > 0.0 && time.is_finite()) {
            return Err(Error::Validation(format!("time {time} must be positive")));
        }
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::Validation(format!(
                "amplitude {amplitude} must be positive"
            )));
        }
        for &(x, u) in &samples {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::Validation(format!("x = {x} must be non-negative")));
            }
            if !(u >= 0.0 && u.is_finite()) {
                return Err(Error::Validation(format!(
                    "u = {u} at x = {x} must be non-negative"
                )));
            }
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = samples.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Validation(format!("duplicate x = {}", w[0].0)));
        }
        Ok(Self {
            samples,
            time,
            amplitude,
            bc,
            x_unit: String::new(),
            u_unit: String::new(),
        })
    }

    pub fn xs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn us(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn parse_number(line: usize, key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("`{key}` is not a number: `{}`", v.trim()),
    })
}

/// Parses the CSV layout
///
/// ```text
/// # time=100
/// # amplitude=1
/// # bc=concentration
/// x,u
/// 0.1,0.93
/// ```
///
/// `# x_unit=` and `# u_unit=` are optional; other `#` lines are ignored.
pub fn parse_profile(text: &str) -> Result<MoistureProfile> {
    let mut time = None;
    let mut amplitude = None;
    let mut bc = None;
    let (mut x_unit, mut u_unit) = (String::new(), String::new());
    let mut header = false;
    let mut samples = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let Some((k, v)) = rest.split_once('=') else {
                continue;
            };
            match k.trim() {
                "time" => time = Some(parse_number(line_no, "time", v)?),
                "amplitude" => amplitude = Some(parse_number(line_no, "amplitude", v)?),
                "bc" => {
                    bc = Some(v.parse::<BoundaryCondition>().map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?)
                }
                "x_unit" => x_unit = v.trim().to_string(),
                "u_unit" => u_unit = v.trim().to_string(),
                _ => {}
            }
            continue;
        }
        if !header {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != ["x", "u"] {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header `x,u`, found `{line}`"),
                });
            }
            header = true;
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 2 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 2 columns, found {}", cols.len()),
            });
        }
        samples.push((
            parse_number(line_no, "x", cols[0])?,
            parse_number(line_no, "u", cols[1])?,
        ));
    }
    if !header {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing header `x,u`".into(),
        });
    }
    let missing = |k: &str| Error::Validation(format!("missing `# {k}=` metadata"));
    let mut p = MoistureProfile::new(
        samples,
        time.ok_or_else(|| missing("time"))?,
        amplitude.unwrap_or(1.0),
        bc.unwrap_or(BoundaryCondition::Concentration),
    )?;
    p.x_unit = x_unit;
    p.u_unit = u_unit;
    Ok(p)
}

pub fn load_profile(path: &Path) -> Result<MoistureProfile> {
    parse_profile(&std::fs::read_to_string(path)?)
}
