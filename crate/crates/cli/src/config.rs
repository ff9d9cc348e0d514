//! Optional JSON config files, overridden key by key by command-line flags.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::exit;

/// Flags merged over the config file. Keys in the file use the flag names
/// with underscores, e.g. `t_end` for `--t-end`.
pub fn merge<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&Path>) -> anyhow::Result<T> {
    let mut base = match file {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))
                .map_err(|e| exit::with_code(exit::VALIDATION, e))?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                Ok(_) => {
                    return Err(exit::validation(format!(
                        "config {} is not a JSON object",
                        path.display()
                    )))
                }
                Err(e) => return Err(exit::validation(format!("config {}: {e}", path.display()))),
            }
        }
        None => Map::new(),
    };
    if let Value::Object(over) = serde_json::to_value(flags)? {
        for (k, v) in over {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(Value::Object(base))
        .map_err(|e| exit::validation(format!("config: {e}")))
}

pub fn require<T>(value: Option<T>, name: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| exit::validation(format!("missing required parameter `{name}`")))
}

/// `#` lines naming the command and its fully resolved configuration.
pub fn header<T: Serialize>(command: &str, resolved: &T) -> String {
    let json = serde_json::to_string(resolved).unwrap_or_default();
    let mut out = String::new();
    let _ = writeln!(out, "# command={command}");
    let _ = writeln!(out, "# config={json}");
    out
}

pub fn output_dir(dir: &Path) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
        .map_err(|e| exit::with_code(exit::VALIDATION, e))?;
    Ok(dir.to_path_buf())
}

pub fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Fixed 17-significant-digit formatting used in every CSV.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}
