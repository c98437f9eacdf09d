use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

use crate::algebraic::AlgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Indeterminate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not-applicable",
            Status::Indeterminate => "indeterminate",
        }
    }

    /// Combines statuses: any fail wins, then indeterminate, else pass.
    pub fn overall<'a>(it: impl IntoIterator<Item = &'a Status>) -> Status {
        let mut out = Status::Pass;
        for s in it {
            match s {
                Status::Fail => return Status::Fail,
                Status::Indeterminate => out = Status::Indeterminate,
                _ => {}
            }
        }
        out
    }
}

/// The instantiated inequality or the hypothesis that gated the check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckVerdict {
    pub name: String,
    pub status: Status,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub witness: Witness,
}

impl CheckVerdict {
    /// A pass or fail verdict for `lhs rel rhs`.
    pub fn compare(name: &str, lhs: impl Display, rel: &str, rhs: impl Display, holds: bool) -> Self {
        CheckVerdict {
            name: name.to_string(),
            status: if holds { Status::Pass } else { Status::Fail },
            lhs: Some(lhs.to_string()),
            rhs: Some(rhs.to_string()),
            witness: Witness { relation: Some(rel.to_string()), ..Witness::default() },
        }
    }

    pub fn le(name: &str, lhs: i64, rhs: i64) -> Self {
        Self::compare(name, lhs, "<=", rhs, lhs <= rhs)
    }

    pub fn lt(name: &str, lhs: i64, rhs: i64) -> Self {
        Self::compare(name, lhs, "<", rhs, lhs < rhs)
    }

    pub fn ge(name: &str, lhs: i64, rhs: i64) -> Self {
        Self::compare(name, lhs, ">=", rhs, lhs >= rhs)
    }

    pub fn not_applicable(name: &str, hypothesis: impl Into<String>) -> Self {
        CheckVerdict {
            name: name.to_string(),
            status: Status::NotApplicable,
            lhs: None,
            rhs: None,
            witness: Witness { note: Some(hypothesis.into()), ..Witness::default() },
        }
    }

    pub fn indeterminate(name: &str, err: &AlgError) -> Self {
        CheckVerdict {
            name: name.to_string(),
            status: Status::Indeterminate,
            lhs: None,
            rhs: None,
            witness: Witness { note: Some(err.to_string()), ..Witness::default() },
        }
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.witness.values.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.witness.note = Some(note.into());
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Collapses an exact computation that may be undecidable into a verdict.
pub fn decide(name: &str, f: impl FnOnce() -> Result<CheckVerdict, AlgError>) -> CheckVerdict {
    f().unwrap_or_else(|e| CheckVerdict::indeterminate(name, &e))
}
