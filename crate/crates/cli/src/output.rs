//! File plumbing shared by the commands: headers, envelopes, SNR grids.

use std::path::Path;

use polar_scl::{FORMAT_VERSION, VERSION};
use serde_json::{Map, Value};

use crate::{CliError, SnrGrid};

/// Writes `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Comment lines that open every CSV file.
pub fn csv_preamble(spec: &Value) -> String {
    format!("# version {VERSION}\n# format {FORMAT_VERSION}\n# spec {spec}\n")
}

/// JSON object carrying the format tag, toolkit version and the run's spec,
/// followed by `fields`.
pub fn envelope(spec: &Value, fields: Map<String, Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("format".into(), FORMAT_VERSION.into());
    obj.insert("version".into(), VERSION.into());
    obj.insert("spec".into(), spec.clone());
    obj.extend(fields);
    Value::Object(obj)
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Inclusive grid `from, from+step, ..., <= to`. Points are rounded to 1e-9
/// so accumulated steps print cleanly.
pub fn snr_points(g: &SnrGrid) -> Result<Vec<f64>, CliError> {
    if !(g.step > 0.0) || !g.from.is_finite() || !g.to.is_finite() {
        return Err(CliError::Usage(
            "--snr-step must be positive and the range finite".into(),
        ));
    }
    if g.to < g.from {
        return Err(CliError::Usage(
            "--snr-to must not be below --snr-from".into(),
        ));
    }
    let count = ((g.to - g.from) / g.step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((g.from + g.step * i as f64) * 1e9).round() / 1e9)
        .collect())
}
