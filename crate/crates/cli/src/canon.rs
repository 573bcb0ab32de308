//! Canonical JSON: sorted keys, floats rounded to 12 significant digits,
//! no insignificant whitespace.

use serde::Serialize;
use serde_json::{Map, Number, Value};

pub fn to_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = canonical(serde_json::to_value(value)?);
    let mut s = serde_json::to_string(&v)?;
    s.push('\n');
    Ok(s)
}

fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round(n.as_f64().unwrap_or(0.0)),
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        // serde_json's map is ordered by key unless `preserve_order` is on;
        // rebuild anyway so the order never depends on that feature
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect::<Map<_, _>>())
        }
        other => other,
    }
}

fn round(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    // fold −0 into 0
    let r = if r == 0.0 { 0.0 } else { r };
    Number::from_f64(r).map_or(Value::Null, Value::Number)
}
