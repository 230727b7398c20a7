//! Outcome records shared by every verification pass.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub reference: String,
}

impl CheckResult {
    pub fn pass(name: &str, reference: &str) -> Self {
        CheckResult { name: name.into(), status: Status::Pass, witness: None, reference: reference.into() }
    }

    pub fn fail(name: &str, reference: &str, witness: impl Into<String>) -> Self {
        CheckResult { name: name.into(), status: Status::Fail, witness: Some(witness.into()), reference: reference.into() }
    }

    pub fn skipped(name: &str, reason: &str) -> Self {
        CheckResult { name: name.into(), status: Status::Skipped, witness: Some(reason.into()), reference: String::new() }
    }

    /// Passes when no witness of failure was found.
    pub fn from_witness(name: &str, reference: &str, witness: Option<String>) -> Self {
        match witness {
            None => Self::pass(name, reference),
            Some(w) => Self::fail(name, reference, w),
        }
    }

    /// A negative control passes exactly when the corrupted fixture was caught.
    pub fn negative_control(name: &str, reference: &str, caught: Option<String>) -> Self {
        match caught {
            Some(w) => CheckResult {
                name: name.into(),
                status: Status::Pass,
                witness: Some(format!("corruption detected: {w}")),
                reference: reference.into(),
            },
            None => Self::fail(name, reference, "corrupted fixture was not detected"),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    /// Attaches a printable value to a passing check as well.
    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    /// Like `with_witness`, but leaves failures and their witnesses alone.
    pub fn with_note(self, w: impl Into<String>) -> Self {
        if self.status == Status::Pass {
            self.with_witness(w)
        } else {
            self
        }
    }

    pub fn with_name_prefix(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}
