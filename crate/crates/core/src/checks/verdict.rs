//! The common verdict type.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The input did not meet the check's hypotheses; nothing was asserted.
    PreconditionViolated,
    /// The instance is trivial and nothing was computed.
    Trivial,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::PreconditionViolated => "precondition-violated",
            Outcome::Trivial => "trivial",
        }
    }
}

/// Where a check was violated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckWitness {
    /// Name of the quantity located, e.g. `s`, `node`, `lambda`.
    pub label: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
}

impl CheckWitness {
    pub fn new(label: &str, value: f64) -> Self {
        CheckWitness {
            label: label.to_string(),
            value,
            node: None,
        }
    }

    pub fn at_node(node: usize, value: f64) -> Self {
        CheckWitness {
            label: "node".to_string(),
            value,
            node: Some(node),
        }
    }
}

/// Outcome of a check with its witness and quantitative margin
/// (positive slack when passing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub name: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<CheckWitness>,
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckVerdict {
    pub fn pass(name: &str, margin: f64) -> Self {
        CheckVerdict {
            name: name.to_string(),
            outcome: Outcome::Pass,
            witness: None,
            margin,
            note: None,
        }
    }

    pub fn fail(name: &str, witness: CheckWitness, margin: f64) -> Self {
        CheckVerdict {
            name: name.to_string(),
            outcome: Outcome::Fail,
            witness: Some(witness),
            margin,
            note: None,
        }
    }

    pub fn precondition(name: &str, witness: CheckWitness, note: String) -> Self {
        CheckVerdict {
            name: name.to_string(),
            outcome: Outcome::PreconditionViolated,
            witness: Some(witness),
            margin: f64::NAN,
            note: Some(note),
        }
    }

    pub fn trivial(name: &str, note: &str) -> Self {
        CheckVerdict {
            name: name.to_string(),
            outcome: Outcome::Trivial,
            witness: None,
            margin: 0.0,
            note: Some(note.to_string()),
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}
