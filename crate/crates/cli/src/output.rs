//! Output plumbing shared by every subcommand: the 12-significant-digit
//! float policy and writing to `--out` or stdout.

use std::fs;
use std::path::Path;

use fptclust_core::{Error, Result};
use serde_json::Value;

/// Round to 12 significant decimal digits so serialized floats are stable
/// across runs and platforms.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Render a float for CSV cells under the same 12-digit policy.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        let r = round_sig(x);
        if r == r.trunc() && r.abs() < 1e15 {
            format!("{r:.1}")
        } else {
            format!("{r}")
        }
    }
}

/// Apply [`round_sig`] to every non-integral number in the tree. Non-finite
/// values become `null`.
pub fn round_json_floats(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                let f = n.as_f64().expect("is_f64 checked");
                *v = match serde_json::Number::from_f64(round_sig(f)) {
                    Some(r) => Value::Number(r),
                    None => Value::Null,
                };
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json_floats),
        Value::Object(map) => map.values_mut().for_each(round_json_floats),
        _ => {}
    }
}

pub fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn write_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Malformed(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Write a JSON document (rounded, pretty, trailing newline) to `--out` or
/// stdout.
pub fn write_json(mut value: Value, out: Option<&Path>) -> Result<()> {
    round_json_floats(&mut value);
    let mut text =
        serde_json::to_string_pretty(&value).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push('\n');
    write_text(&text, out)
}

pub fn write_csv(text: &str, out: Option<&Path>) -> Result<()> {
    write_text(text, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_twelve_significant_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(123456.789012345), 123456.789012);
        assert_eq!(round_sig(0.0), 0.0);
        assert_eq!(round_sig(-2.5), -2.5);
        assert!(round_sig(f64::INFINITY).is_infinite());
    }

    #[test]
    fn json_walker_rounds_floats_and_nulls_non_finite() {
        let mut v = json!({
            "a": 1.0 / 3.0,
            "b": [7, 2.0f64.sqrt()],
            "c": {"nested": 5}
        });
        round_json_floats(&mut v);
        assert_eq!(v["a"], json!(0.333333333333));
        assert_eq!(v["b"][0], json!(7));
        assert_eq!(v["b"][1], json!(1.41421356237));
        assert_eq!(v["c"]["nested"], json!(5));
    }

    #[test]
    fn csv_floats_are_stable_and_integral_costs_keep_a_decimal() {
        assert_eq!(fmt_float(4.0), "4.0");
        assert_eq!(fmt_float(0.1 + 0.2), "0.3");
        assert_eq!(fmt_float(f64::INFINITY), "inf");
    }
}
