//! Check reports and their fixed-precision text forms.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

/// What a check is supposed to find: theorem-backed checks expect `Holds`,
/// counterexample checks expect `Violated`, and checks with no guarantee
/// either way are `Informational`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Violated,
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub check: String,
    pub params: BTreeMap<String, f64>,
    pub grid: Vec<f64>,
    /// Named columns aligned with `grid`.
    pub values: BTreeMap<String, Vec<f64>>,
    pub verdict: Verdict,
    pub expected: Expectation,
    /// Smallest normalized slack; negative beyond `-tol` means violated.
    pub worst_margin: f64,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn new(check: &str, grid: Vec<f64>) -> Self {
        InequalityReport {
            check: check.to_string(),
            params: BTreeMap::new(),
            grid,
            values: BTreeMap::new(),
            verdict: Verdict::Holds,
            expected: Expectation::Holds,
            worst_margin: f64::INFINITY,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn column(mut self, name: &str, values: Vec<f64>) -> Self {
        self.values.insert(name.to_string(), values);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn expecting_violation(mut self) -> Self {
        self.expected = Expectation::Violated;
        self
    }

    pub fn expecting(mut self, expected: Expectation) -> Self {
        self.expected = expected;
        self
    }

    /// Fold margins into `worst_margin` and set the verdict against `tol`.
    pub fn judge(mut self, margins: &[f64], tol: f64) -> Self {
        let worst = margins.iter().copied().fold(f64::INFINITY, f64::min);
        self.worst_margin = if worst.is_finite() { worst } else { 0.0 };
        self.verdict = if self.worst_margin >= -tol { Verdict::Holds } else { Verdict::Violated };
        self.params.insert("tol".to_string(), tol);
        self
    }

    /// The observation matches what the check expects.
    pub fn passed(&self) -> bool {
        matches!(
            (self.verdict, self.expected),
            (Verdict::Holds, Expectation::Holds)
                | (Verdict::Violated, Expectation::Violated)
                | (_, Expectation::Informational)
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&JsonReport::from(self)).expect("report serializes")
    }

    /// Grid plus value columns, one row per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("grid");
        for name in self.values.keys() {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (i, z) in self.grid.iter().enumerate() {
            out.push_str(&format_float(*z));
            for column in self.values.values() {
                out.push(',');
                if let Some(v) = column.get(i) {
                    out.push_str(&format_float(*v));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn summary_line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let observed = match self.verdict {
            Verdict::Holds => "holds",
            Verdict::Violated => "violation observed",
        };
        let expectation = match (self.verdict, self.expected) {
            (_, Expectation::Holds) => "",
            (Verdict::Violated, Expectation::Violated) => " (expected)",
            (Verdict::Holds, Expectation::Violated) => " (violation expected)",
            (_, Expectation::Informational) => " (informational)",
        };
        format!("{status} {}: {observed}{expectation}, worst margin {}", self.check, format_float(self.worst_margin))
    }
}

/// JSON mirror with every float rendered through `format_float`, so that
/// reports are byte-stable across platforms.
#[derive(Serialize)]
struct JsonReport {
    check: String,
    params: BTreeMap<String, serde_json::Value>,
    grid: Vec<serde_json::Value>,
    values: BTreeMap<String, Vec<serde_json::Value>>,
    verdict: Verdict,
    expected: Expectation,
    worst_margin: serde_json::Value,
    notes: Vec<String>,
}

/// A number rendered through [`format_float`], as a JSON value.
pub fn json_number(x: f64) -> serde_json::Value {
    if x.is_finite() {
        let text = format_float(x);
        serde_json::from_str(&text).unwrap_or(serde_json::Value::String(text))
    } else {
        serde_json::Value::String(format!("{x}"))
    }
}

impl From<&InequalityReport> for JsonReport {
    fn from(r: &InequalityReport) -> Self {
        JsonReport {
            check: r.check.clone(),
            params: r.params.iter().map(|(k, v)| (k.clone(), json_number(*v))).collect(),
            grid: r.grid.iter().map(|v| json_number(*v)).collect(),
            values: r.values.iter().map(|(k, v)| (k.clone(), v.iter().map(|x| json_number(*x)).collect())).collect(),
            verdict: r.verdict,
            expected: r.expected,
            worst_margin: json_number(r.worst_margin),
            notes: r.notes.clone(),
        }
    }
}

/// Twelve significant digits; scientific notation when `|x|` lies outside
/// `[1e-4, 1e6)` after rounding.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if !(-4..6).contains(&exponent) {
        return sci;
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    if exponent >= 0 {
        let split = exponent as usize + 1;
        format!("{sign}{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("{sign}0.{}{digits}", "0".repeat((-exponent - 1) as usize))
    }
}

/// Several reports as one JSON array.
pub fn reports_to_json(reports: &[InequalityReport]) -> String {
    let mirrors: Vec<JsonReport> = reports.iter().map(JsonReport::from).collect();
    serde_json::to_string_pretty(&mirrors).expect("reports serialize")
}

/// Several reports in one CSV, each preceded by a `# check` line.
pub fn reports_to_csv(reports: &[InequalityReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "# {}", r.check);
        out.push_str(&r.to_csv());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_float(-16.845299), "-16.8452990000");
        assert_eq!(format_float(0.001), "0.00100000000000");
        assert_eq!(format_float(1.5e-7), "1.50000000000e-7");
        assert_eq!(format_float(2.5e6), "2.50000000000e6");
        assert_eq!(format_float(0.0), "0");
    }

    #[test]
    fn carry_does_not_add_a_digit() {
        let s = format_float(9.9999999999999);
        assert_eq!(s.chars().filter(|c| c.is_ascii_digit()).count(), 12, "{s}");
    }

    #[test]
    fn verdict_and_expectation() {
        let r = InequalityReport::new("x", vec![1.0]).judge(&[-0.5], 1e-3);
        assert_eq!(r.verdict, Verdict::Violated);
        assert!(!r.passed());
        assert!(r.clone().expecting_violation().passed());
        let r = InequalityReport::new("x", vec![1.0]).judge(&[-1e-4], 1e-3);
        assert!(r.passed());
    }

    #[test]
    fn json_has_the_documented_keys() {
        let r = InequalityReport::new("yang", vec![1.0, 2.0]).column("s", vec![0.5, -0.25]).judge(&[0.1], 1e-6);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["check", "params", "grid", "values", "verdict", "expected", "worst_margin", "notes"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
