//! Grid syntax: comma-separated values and inclusive `start:stop:step`
//! ranges.

const ENDPOINT_TOL: f64 = 1e-12;

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(number(v)?),
            [a, b, h] => {
                let (start, stop, step) = (number(a)?, number(b)?, number(h)?);
                if !(step > 0.0) {
                    return Err(format!("step must be positive in '{part}'"));
                }
                if stop < start {
                    return Err(format!("stop below start in '{part}'"));
                }
                let count = ((stop - start) / step + ENDPOINT_TOL).floor() as usize;
                // multiply rather than accumulate to keep values reproducible
                out.extend((0..=count).map(|k| start + k as f64 * step));
                if let Some(last) = out.last_mut() {
                    if (*last - stop).abs() <= ENDPOINT_TOL.max(step * 1e-9) {
                        *last = stop;
                    }
                }
            }
            _ => return Err(format!("cannot parse grid entry '{part}'")),
        }
    }
    if out.is_empty() {
        return Err("grid is empty".into());
    }
    let max = 2.0 * std::f64::consts::SQRT_2;
    for s in out.iter_mut() {
        if !(*s >= -ENDPOINT_TOL && *s <= max + ENDPOINT_TOL) {
            return Err(format!("grid value {s} outside [0, 2√2]"));
        }
        *s = s.clamp(0.0, max);
    }
    Ok(out)
}

fn number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    match s {
        "2sqrt2" | "2√2" => Ok(2.0 * std::f64::consts::SQRT_2),
        _ => s.parse().map_err(|_| format!("not a number: '{s}'")),
    }
}
