//! Fixed-format numbers, CSV tables and run metadata.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::CliError;

/// `x` in C's `%.12e` layout: two-digit signed exponent, `nan`, `inf`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

/// A named-column table; every column has the same length.
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn write_csv(&self, out: &mut dyn Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|&x| sci(x))).map_err(io)?;
        }
        w.flush().map_err(|e| CliError::Output(e.to_string()))
    }
}

/// Everything needed to rerun a command: the config with defaults filled
/// in, the tool version, and the tolerances in force.
pub fn metadata(command: &str, cfg: &RunConfig, extra: Value) -> Value {
    let mut m = json!({
        "tool": "lioup",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": cfg,
        "tolerances": cfg.tolerances,
    });
    if let (Value::Object(m), Value::Object(extra)) = (&mut m, extra) {
        m.extend(extra);
    }
    m
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn write_to(
    out: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> Result<(), CliError>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
            let mut w = std::io::BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::Output(e.to_string()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

pub fn emit_json(out: Option<&Path>, doc: &Value) -> Result<(), CliError> {
    write_to(out, |w| {
        serde_json::to_writer_pretty(&mut *w, doc).map_err(|e| CliError::Output(e.to_string()))?;
        writeln!(w).map_err(|e| CliError::Output(e.to_string()))
    })
}

/// Writes the table, and the metadata next to it when writing to a file.
pub fn emit_table(out: Option<&Path>, table: &Table, meta: &Value) -> Result<(), CliError> {
    write_to(out, |w| table.write_csv(w))?;
    if let Some(path) = out {
        emit_json(Some(&sidecar_path(path)), meta)?;
    }
    Ok(())
}
