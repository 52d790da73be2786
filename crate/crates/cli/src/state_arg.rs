//! Lenient parsing of `--state`: `{"T": ...}` with a 3×3 array or a
//! `diag(a,b,c)` string, optional `a` and `b` Bloch vectors, or the strings
//! `singlet` / `{"T": "singlet"}`.

use serde_json::Value;

use bell_recycle::TwoQubitState;

pub fn parse_state(text: &str) -> Result<TwoQubitState, String> {
    match parse_parts(text)? {
        None => Ok(TwoQubitState::singlet()),
        Some((a, b, t)) => TwoQubitState::new(a, b, t).map_err(|e| e.to_string()),
    }
}

/// Only the correlation matrix, without checking that a state with this
/// matrix exists.
pub fn parse_correlation(text: &str) -> Result<[[f64; 3]; 3], String> {
    Ok(match parse_parts(text)? {
        None => TwoQubitState::singlet().correlation(),
        Some((_, _, t)) => t,
    })
}

type Parts = ([f64; 3], [f64; 3], [[f64; 3]; 3]);

/// `None` stands for the singlet.
fn parse_parts(text: &str) -> Result<Option<Parts>, String> {
    let text = text.trim();
    if text == "singlet" {
        return Ok(None);
    }
    let v: Value = serde_json::from_str(text).map_err(|e| format!("state is not JSON: {e}"))?;
    let obj = v.as_object().ok_or("state must be a JSON object")?;
    let t = obj.get("T").or_else(|| obj.get("t")).ok_or("state needs a \"T\" entry")?;
    let t = match t {
        Value::String(s) if s.trim() == "singlet" => return Ok(None),
        Value::String(s) => parse_diag(s)?,
        other => serde_json::from_value::<[[f64; 3]; 3]>(other.clone())
            .map_err(|e| format!("\"T\" must be a 3×3 array or diag(...): {e}"))?,
    };
    let vec3 = |key: &str| -> Result<[f64; 3], String> {
        match obj.get(key) {
            None => Ok([0.0; 3]),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| format!("\"{key}\": {e}")),
        }
    };
    Ok(Some((vec3("a")?, vec3("b")?, t)))
}

fn parse_diag(s: &str) -> Result<[[f64; 3]; 3], String> {
    let inner = s
        .trim()
        .strip_prefix("diag(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected diag(a,b,c), got '{s}'"))?;
    let d: Vec<f64> = inner
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number '{x}' in '{s}'")))
        .collect::<Result<_, _>>()?;
    let [a, b, c] = d[..] else {
        return Err(format!("diag needs three entries, got {}", d.len()));
    };
    Ok([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
}
