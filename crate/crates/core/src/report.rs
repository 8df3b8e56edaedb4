//! Machine-readable check results.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    HypothesisFailed,
}

/// The offending sample behind a failed check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Complex64>,
    pub value: f64,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    pub margins: BTreeMap<String, f64>,
    pub metadata: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Pass,
            margins: BTreeMap::new(),
            metadata: BTreeMap::new(),
            witness: None,
            notes: Vec::new(),
            config_hash: None,
            timing_ms: None,
        }
    }

    pub fn margin(mut self, name: &str, value: f64) -> CheckReport {
        self.margins.insert(name.to_string(), value);
        self
    }

    pub fn meta(mut self, name: &str, value: impl Serialize) -> CheckReport {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.metadata.insert(name.to_string(), v);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> CheckReport {
        self.notes.push(text.into());
        self
    }

    /// Marks the report failed with the offending sample.
    pub fn fail(mut self, point: Option<Complex64>, value: f64, description: impl Into<String>) -> CheckReport {
        self.verdict = Verdict::Fail;
        self.witness = Some(Witness {
            point,
            value,
            description: description.into(),
        });
        self
    }

    pub fn hypothesis_failed(mut self, reason: impl Into<String>) -> CheckReport {
        self.verdict = Verdict::HypothesisFailed;
        self.notes.push(reason.into());
        self
    }

    pub fn indeterminate(mut self, reason: impl Into<String>) -> CheckReport {
        self.verdict = Verdict::Indeterminate;
        self.notes.push(reason.into());
        self
    }

    /// A failed report that carries an error as its witness.
    pub fn from_error(check: impl Into<String>, err: &crate::Error) -> CheckReport {
        let point = match err.root_cause() {
            crate::Error::BoundaryRoot { near, .. }
            | crate::Error::PathTooCloseToZero { near }
            | crate::Error::ClusterUnresolved { near } => Some(*near),
            crate::Error::DomainExceeded { z, .. } | crate::Error::OutsideStrip { z, .. } => Some(*z),
            _ => None,
        };
        let report = CheckReport::new(check);
        match err.root_cause() {
            crate::Error::Indeterminate(_) => report.indeterminate(err.to_string()),
            crate::Error::HypothesisFailed(_)
            | crate::Error::HypothesisUnchecked(_)
            | crate::Error::PremiseFailed(_)
            | crate::Error::OmissionFailed { .. }
            | crate::Error::GuardRejected(_)
            | crate::Error::NoUnitPoint { .. } => report.hypothesis_failed(err.to_string()),
            _ => report.fail(point, f64::NAN, err.to_string()),
        }
    }

    /// Every failed report carries a witness.
    pub fn is_well_formed(&self) -> bool {
        self.verdict != Verdict::Fail || self.witness.is_some()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let r = CheckReport::new("demo").margin("m", 0.5).meta("grid", [8, 16]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        assert_eq!(v["verdict"], "Pass");
        assert_eq!(v["margins"]["m"], 0.5);
        assert!(v.get("witness").is_none());
        assert!(v.get("timing_ms").is_none());
    }

    #[test]
    fn failures_carry_witnesses() {
        let r = CheckReport::new("demo").fail(Some(Complex64::new(1.0, 2.0)), 3.0, "too big");
        assert!(r.is_well_formed());
        let e = crate::Error::BoundaryRoot { min_modulus: 0.0, near: Complex64::new(0.5, 0.0) };
        let r = CheckReport::from_error("count", &e);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness.unwrap().point, Some(Complex64::new(0.5, 0.0)));
    }
}
