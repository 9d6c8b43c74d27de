//! Invariant reports and canonical JSON output.
//!
//! Canonical JSON has sorted object keys (the default `serde_json` map) and
//! floats rounded to 12 significant digits, so that repeated runs serialize
//! byte-identically.

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Negative zero becomes zero.
pub fn rounded(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest text of the rounded value; scientific notation outside `[1e-4, 1e16)`.
pub fn format_float(x: f64) -> String {
    let r = rounded(x);
    if r != 0.0 && r.is_finite() && (r.abs() < 1e-4 || r.abs() >= 1e16) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// `a + bi` / `a - bi` with both parts through [`format_float`].
pub fn format_complex(re: f64, im: f64) -> String {
    let im = rounded(im);
    if im < 0.0 {
        format!("{} - {}i", format_float(re), format_float(-im))
    } else {
        format!("{} + {}i", format_float(re), format_float(im))
    }
}

/// Rounds every float in a JSON tree. Integers are left alone.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = rounded(n.as_f64().unwrap_or(0.0));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Pretty, canonical JSON text with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(v.clone())).unwrap_or_default();
    s.push('\n');
    s
}

/// One checked identity: both sides, the tolerance used and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl InvariantReport {
    /// Passes when `|lhs − rhs| ≤ tolerance·max(1, |rhs|)`.
    pub fn relative(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let pass = (lhs - rhs).abs() <= tolerance * rhs.abs().max(1.0);
        Self { name: name.into(), lhs, rhs, tolerance, pass }
    }

    pub fn exact(name: impl Into<String>, lhs: i64, rhs: i64) -> Self {
        Self { name: name.into(), lhs: lhs as f64, rhs: rhs as f64, tolerance: 0.0, pass: lhs == rhs }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(rounded(0.1 + 0.2), 0.3);
        assert_eq!(rounded(1624.0000000000002), 1624.0);
        assert_eq!(rounded(-0.0), 0.0);
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_float(-2.314142271314e-16), "-2.31414227131e-16");
        assert_eq!(format_complex(48.0, -5.9e-15), "48 - 5.9e-15i");
    }

    #[test]
    fn canonical_json_sorts_keys_and_round_trips() {
        let v = json!({"zeta": 0.1 + 0.2, "alpha": [1, 2.5000000000000004], "mid": {"b": 1, "a": -0.0}});
        let s = to_canonical_string(&v);
        let pos = |k: &str| s.find(k).unwrap();
        assert!(pos("alpha") < pos("mid") && pos("mid") < pos("zeta"));
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(to_canonical_string(&back), s);
    }

    #[test]
    fn invariant_report_serializes_expected_fields() {
        let r = InvariantReport::relative("euler", 2.0, 2.0 + 1e-12, 1e-10);
        assert!(r.pass);
        let j = r.to_json();
        for key in ["name", "lhs", "rhs", "tolerance", "pass"] {
            assert!(j.get(key).is_some());
        }
        assert!(!InvariantReport::exact("betti", 1, 2).pass);
    }
}
