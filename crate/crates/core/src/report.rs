//! Structured pass/fail reports shared by the verification operations and the
//! command-line driver.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    HypothesisViolation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// The inputs (basis labels or tuples) that exhibit the fact.
    pub inputs: Vec<String>,
    /// The offending value, printed in sparse `coeff·label` form.
    pub value: String,
}

impl Witness {
    pub fn new(inputs: Vec<String>, value: impl fmt::Display) -> Self {
        Witness { inputs, value: value.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check { name: name.into(), status: CheckStatus::Pass, witness: None, detail: None }
    }

    pub fn pass_with_detail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: CheckStatus::Pass,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    pub fn fail(name: impl Into<String>, witness: Option<Witness>) -> Self {
        Check { name: name.into(), status: CheckStatus::Fail, witness, detail: None }
    }

    pub fn violation(name: impl Into<String>, witness: Option<Witness>) -> Self {
        Check { name: name.into(), status: CheckStatus::HypothesisViolation, witness, detail: None }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// The outcome of one verification subject: a list of named checks plus
/// free-form structured data (dimensions, orders, representatives, ...).
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty", default)]
    pub data: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new(), data: serde_json::Map::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn insert_data(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn has_hypothesis_violation(&self) -> bool {
        self.checks
            .iter()
            .any(|c| c.status == CheckStatus::HypothesisViolation)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        for (k, v) in other.data {
            self.data.insert(k, v);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}]", self.subject)?;
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::HypothesisViolation => "hypothesis-violation",
            };
            write!(f, "  {:<52} {}", c.name, tag)?;
            if let Some(w) = &c.witness {
                write!(f, "  [{} -> {}]", w.inputs.join(", "), w.value)?;
            }
            if let Some(d) = &c.detail {
                write!(f, "  ({d})")?;
            }
            writeln!(f)?;
        }
        for (k, v) in &self.data {
            writeln!(f, "  {k} = {v}")?;
        }
        Ok(())
    }
}
