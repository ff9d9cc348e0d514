use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::scheme::{FDConfig, FDField};
use crate::error::{Error, Result};

/// `#` metadata lines describing a run.
pub fn metadata_lines(cfg: &FDConfig, field: &FDField) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# alpha={:.16e}", cfg.alpha);
    let _ = writeln!(out, "# m={:.16e}", cfg.m);
    let _ = writeln!(out, "# bc={}", cfg.bc);
    let _ = writeln!(out, "# nx={}", cfg.nx);
    let _ = writeln!(out, "# dx={:.16e}", cfg.dx);
    let _ = writeln!(out, "# dt={:.16e}", cfg.dt);
    let _ = writeln!(out, "# t_end={:.16e}", cfg.t_end);
    let _ = writeln!(out, "# theta={:.16e}", cfg.theta);
    let _ = writeln!(out, "# clamp_count={}", field.clamp_count);
    out
}

/// History as CSV rows (t, x, u). With `snapshots`, only the stored levels
/// nearest to those times are written; otherwise every level is.
pub fn history_csv(cfg: &FDConfig, field: &FDField, snapshots: Option<&[f64]>) -> String {
    let mut levels: Vec<usize> = match snapshots {
        Some(ts) => ts.iter().filter_map(|&t| field.level_index(t)).collect(),
        None => (0..field.times.len()).collect(),
    };
    levels.dedup();
    let mut out = metadata_lines(cfg, field);
    out.push_str("t,x,u\n");
    for &n in &levels {
        let t = field.times[n];
        for (i, u) in field.history[n].iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", t, i as f64 * field.dx, u);
        }
    }
    out
}

pub fn write_history_csv(
    path: &Path,
    cfg: &FDConfig,
    field: &FDField,
    snapshots: Option<&[f64]>,
) -> Result<()> {
    std::fs::write(path, history_csv(cfg, field, snapshots))?;
    Ok(())
}

fn parse_meta(meta: &BTreeMap<String, String>) -> Option<FDConfig> {
    let num = |k: &str| meta.get(k)?.parse::<f64>().ok();
    Some(FDConfig {
        nx: meta.get("nx")?.parse().ok()?,
        dx: num("dx")?,
        dt: num("dt")?,
        t_end: num("t_end")?,
        alpha: num("alpha")?,
        m: num("m")?,
        bc: meta.get("bc")?.parse().ok()?,
        theta: num("theta").unwrap_or(1.0),
    })
}

/// Reads a history written by [`history_csv`]. The configuration is
/// returned when the metadata is complete.
pub fn parse_history_csv(text: &str) -> Result<(Option<FDConfig>, FDField)> {
    let mut meta = BTreeMap::new();
    let mut rows: Vec<(f64, f64, f64)> = Vec::new();
    let mut header_seen = false;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != ["t", "x", "u"] {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected header `t,x,u`, found `{line}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
        if vals.len() != 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 3 columns, found {}", vals.len()),
            });
        }
        rows.push((vals[0], vals[1], vals[2]));
    }
    if rows.is_empty() {
        return Err(Error::Validation("history contains no rows".into()));
    }
    let cfg = parse_meta(&meta);
    let mut times: Vec<f64> = Vec::new();
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut xs: Vec<f64> = Vec::new();
    for (t, x, u) in rows {
        if times.last() != Some(&t) {
            times.push(t);
            history.push(Vec::new());
        }
        let level = history.len() - 1;
        if level == 0 {
            xs.push(x);
        }
        history[level].push(u);
    }
    let nx = history[0].len();
    if history.iter().any(|h| h.len() != nx) {
        return Err(Error::Validation(
            "levels have different node counts".into(),
        ));
    }
    let dx = match cfg {
        Some(c) => c.dx,
        None if nx > 1 => xs[1] - xs[0],
        None => return Err(Error::Validation("cannot infer dx".into())),
    };
    let clamp_count = meta
        .get("clamp_count")
        .and_then(|v| v.parse().ok())
        .unwrap_or(0);
    Ok((
        cfg,
        FDField {
            dx,
            times,
            history,
            clamp_count,
            clamped_mass: 0.0,
        },
    ))
}

pub fn read_history_csv(path: &Path) -> Result<(Option<FDConfig>, FDField)> {
    parse_history_csv(&std::fs::read_to_string(path)?)
}
