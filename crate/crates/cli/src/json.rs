use serde::Serialize;
use serde_json::{Number, Value};

/// Significant digits kept for every float written by the CLI.
pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(0.0));
            // -0.0 and 0.0 print differently
            let x = if x == 0.0 { 0.0 } else { x };
            *v = Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null);
        }
        Value::Array(a) => a.iter_mut().for_each(round_value),
        Value::Object(o) => o.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Serializable value as a JSON tree with floats rounded.
pub fn to_value<T: Serialize + ?Sized>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("report types serialize");
    round_value(&mut v);
    v
}

/// The document printed on standard output.
pub fn to_json<T: Serialize + ?Sized>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(&to_value(x)).expect("values serialize");
    s.push('\n');
    s
}
