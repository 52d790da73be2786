//! Output helpers: 12 significant digits everywhere, CSV or JSON, stdout or
//! file.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::{Format, OutputArgs};

#[derive(Debug)]
pub struct CmdError {
    pub code: u8,
    pub message: String,
}

impl CmdError {
    pub fn config(msg: impl Into<String>) -> Self {
        Self {
            code: crate::EXIT_CONFIG,
            message: msg.into(),
        }
    }
}

pub type CmdResult = Result<(), CmdError>;

/// `x` rounded to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt12(x: f64) -> String {
    let r = sig12(x);
    if r != 0.0 && (r.abs() < 1e-6 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(sig12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(m) => m.values_mut().for_each(round_value),
        _ => {}
    }
}

pub fn to_json<S: Serialize>(value: &S) -> Result<String, CmdError> {
    let mut v = serde_json::to_value(value).map_err(|e| CmdError::config(e.to_string()))?;
    round_value(&mut v);
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CmdError::config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CmdError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CmdError::config(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CmdError::config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CmdError::config(e.to_string()))
}

pub fn emit(text: &str, path: Option<&Path>) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CmdError::config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CmdError::config(e.to_string()))
        }
    }
}

/// Writes either the CSV table or the JSON document.
pub fn emit_table<S: Serialize>(
    out: &OutputArgs,
    header: &[&str],
    rows: &[Vec<String>],
    doc: &S,
) -> CmdResult {
    let text = match out.format {
        Format::Csv => to_csv(header, rows)?,
        Format::Json => to_json(doc)?,
    };
    emit(&text, out.output.as_deref())
}

pub fn opt12(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(std::f64::consts::SQRT_2), "1.41421356237");
        assert_eq!(fmt12(2.0), "2");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.0e-20 / 3.0), "3.33333333333e-21");
        let s = to_json(&serde_json::json!({"x": [std::f64::consts::PI], "n": 3})).unwrap();
        assert!(s.contains("3.14159265359"));
        assert!(s.contains("\"n\": 3"));
    }
}
