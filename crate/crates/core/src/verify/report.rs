use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// One certified quantity. `bound` is `None` for reported-only ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub pass: bool,
    pub meta: Map<String, Value>,
}

impl CheckRecord {
    /// `measured <= bound`; NaN fails.
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            measured: Some(measured),
            bound: Some(bound),
            pass: measured <= bound,
            meta: Map::new(),
        }
    }

    /// A reported value with no asserted bound; passes when finite.
    pub fn report(name: &str, measured: f64) -> Self {
        Self {
            name: name.to_string(),
            measured: Some(measured),
            bound: None,
            pass: measured.is_finite(),
            meta: Map::new(),
        }
    }

    pub fn failed(name: &str, error: impl ToString) -> Self {
        let mut meta = Map::new();
        meta.insert("error".into(), Value::String(error.to_string()));
        Self {
            name: name.to_string(),
            measured: None,
            bound: None,
            pass: false,
            meta,
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    /// Adds an extra pass condition, recorded under `key`.
    pub fn require(mut self, key: &str, ok: bool) -> Self {
        self.pass &= ok;
        self.meta.insert(key.to_string(), Value::Bool(ok));
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    /// Sorts records by name and sets the aggregate flag.
    pub fn new(seed: u64, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = checks.iter().all(|c| c.pass);
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            checks,
            pass,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        let fmt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6e}"));
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:>13}  {:>13}  result",
            "check", "measured", "bound"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<width$}  {:>13}  {:>13}  {}",
                c.name,
                fmt(c.measured),
                fmt(c.bound),
                if c.pass { "pass" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} checks, {} failed: {}",
            self.checks.len(),
            failed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails() {
        assert!(!CheckRecord::at_most("x", f64::NAN, 1.0).pass);
        assert!(!CheckRecord::report("x", f64::INFINITY).pass);
    }

    #[test]
    fn sorted_and_aggregated() {
        let r = VerificationReport::new(
            7,
            vec![
                CheckRecord::at_most("b", 1.0, 2.0),
                CheckRecord::at_most("a", 3.0, 2.0),
            ],
        );
        assert_eq!(r.checks[0].name, "a");
        assert!(!r.pass);
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn json_schema_keys() {
        let r = VerificationReport::new(1, vec![CheckRecord::report("ratio", 1.5).with("n", 3)]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let c = &v["checks"][0];
        for key in ["name", "measured", "bound", "pass", "meta"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        for key in ["version", "seed", "checks", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
