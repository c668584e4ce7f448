//! Machine-readable report assembly and exit-code mapping.

use derived_brackets::{Check, CheckStatus, Error, Report, Witness};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    HypothesisViolation,
    MalformedInput,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail | Outcome::HypothesisViolation => 1,
            Outcome::MalformedInput => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::HypothesisViolation => "hypothesis-violation",
            Outcome::MalformedInput => "malformed-input",
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CliReport {
    pub command: String,
    pub subject: String,
    pub status: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub data: serde_json::Map<String, serde_json::Value>,
    pub timing_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl CliReport {
    pub fn from_report(command: String, report: Report, timing_ms: u128, seed: Option<u64>) -> Self {
        let status = if report.has_hypothesis_violation() {
            Outcome::HypothesisViolation
        } else if report.passed() {
            Outcome::Pass
        } else {
            Outcome::Fail
        };
        CliReport {
            command,
            subject: report.subject.clone(),
            status: status.label().to_string(),
            checks: report.checks,
            data: report.data,
            timing_ms,
            seed,
        }
    }

    /// Wraps a hard error from the library as a single-check report.
    pub fn from_error(command: String, subject: &str, err: &Error, timing_ms: u128) -> Self {
        let outcome = outcome_of_error(err);
        let check = match err {
            Error::HypothesisViolation { condition, witness } => Check {
                name: condition.clone(),
                status: CheckStatus::HypothesisViolation,
                witness: Some(Witness::new(vec![], witness.clone())),
                detail: None,
            },
            other => Check {
                name: "input".into(),
                status: if outcome == Outcome::MalformedInput {
                    CheckStatus::Fail
                } else {
                    CheckStatus::HypothesisViolation
                },
                witness: None,
                detail: Some(other.to_string()),
            },
        };
        CliReport {
            command,
            subject: subject.to_string(),
            status: outcome.label().to_string(),
            checks: vec![check],
            data: serde_json::Map::new(),
            timing_ms,
            seed: None,
        }
    }

    pub fn outcome(&self) -> Outcome {
        match self.status.as_str() {
            "pass" => Outcome::Pass,
            "fail" => Outcome::Fail,
            "hypothesis-violation" => Outcome::HypothesisViolation,
            _ => Outcome::MalformedInput,
        }
    }

    pub fn print_human(&self) {
        println!("[{}]", self.subject);
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "pass",
                CheckStatus::Fail => "FAIL",
                CheckStatus::HypothesisViolation => "hypothesis-violation",
            };
            print!("  {:<56} {}", c.name, tag);
            if let Some(w) = &c.witness {
                if w.inputs.is_empty() {
                    print!("  [{}]", w.value);
                } else {
                    print!("  [{} -> {}]", w.inputs.join(", "), w.value);
                }
            }
            if let Some(d) = &c.detail {
                print!("  ({d})");
            }
            println!();
        }
        for (k, v) in &self.data {
            println!("  {k} = {v}");
        }
        println!("result: {} ({} ms)", self.status, self.timing_ms);
    }
}

pub fn outcome_of_error(err: &Error) -> Outcome {
    match err {
        Error::MalformedInput(_)
        | Error::InvalidArgument(_)
        | Error::UnknownLabel(_)
        | Error::BasisMismatch(_) => Outcome::MalformedInput,
        Error::HypothesisViolation { .. }
        | Error::MissingUnit
        | Error::NotFirstOrder { .. }
        | Error::UnsupportedInput(_) => Outcome::HypothesisViolation,
    }
}
