//! Machine-readable verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::check::{CheckResult, Status};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    #[serde(flatten)]
    pub check: CheckResult,
    /// Wall time of the job that produced the check; only recorded on request
    /// so that reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub options: BTreeMap<String, String>,
    pub checks: Vec<Entry>,
    pub summary: Summary,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, input: &str, text: &str, options: BTreeMap<String, String>) -> Self {
        Report {
            schema: SCHEMA,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input: input.to_string(),
            input_sha256: sha256_hex(text),
            options,
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, check: CheckResult, elapsed: Option<Duration>) {
        match check.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Skipped => self.summary.skipped += 1,
        }
        self.checks.push(Entry { check, elapsed_ms: elapsed.map(|d| d.as_millis() as u64) });
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().map(|e| &e.check).find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} {} {} (sha256 {})", self.tool, self.version, self.command, self.input, &self.input_sha256[..16]);
        for e in &self.checks {
            let c = &e.check;
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(s, "{tag}  {}", c.name);
            if !c.reference.is_empty() {
                let _ = write!(s, "  [{}]", c.reference);
            }
            if let Some(ms) = e.elapsed_ms {
                let _ = write!(s, "  {ms} ms");
            }
            let _ = writeln!(s);
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "      {w}");
            }
        }
        let _ = writeln!(s, "summary: {} pass, {} fail, {} skipped", self.summary.pass, self.summary.fail, self.summary.skipped);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_exit_code() {
        let mut r = Report::new("verify", "x", "abc", BTreeMap::new());
        r.push(CheckResult::pass("a", "ref"), None);
        assert_eq!(r.exit_code(), 0);
        r.push(CheckResult::fail("b", "ref", "1 != 2"), None);
        r.push(CheckResult::skipped("c", "nothing to do"), None);
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, skipped: 1 });
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.input_sha256, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        let j: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["checks"][1]["status"], "fail");
        assert!(j["checks"][0].get("elapsed_ms").is_none());
        assert!(r.to_text().contains("FAIL  b"));
    }
}
