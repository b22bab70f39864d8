//! Run reports: the JSON envelope every command and pipeline stage emits.
//!
//! Reports are byte-identical across runs with the same seeds and inputs, so
//! nothing volatile (wall time, absolute paths, machine names) goes in here;
//! timing is logged separately on stderr by the CLI.

use crate::ratio::RatioRepr;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// One named check with an optional exact margin. Inconclusive is a
/// first-class status (budget ran out), distinct from failure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<RatioRepr>,
    pub detail: String,
}

impl Verdict {
    pub fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), status: VerdictStatus::Pass, margin: None, detail: detail.into() }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), status: VerdictStatus::Fail, margin: None, detail: detail.into() }
    }

    pub fn inconclusive(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: VerdictStatus::Inconclusive,
            margin: None,
            detail: detail.into(),
        }
    }

    pub fn of(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Verdict::pass(name, detail)
        } else {
            Verdict::fail(name, detail)
        }
    }

    pub fn with_margin(mut self, margin: RatioRepr) -> Self {
        self.margin = Some(margin);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportProvenance {
    pub seed: Option<u64>,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Invoked subcommand plus normalised arguments.
    pub command: String,
    /// Content hashes of the input artifacts, keyed by role.
    pub inputs: Vec<(String, String)>,
    /// Operation-specific payload.
    pub results: serde_json::Value,
    pub provenance: ReportProvenance,
    pub verdicts: Vec<Verdict>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            results: serde_json::Value::Null,
            provenance: ReportProvenance { seed, version: env!("CARGO_PKG_VERSION").into() },
            verdicts: Vec::new(),
        }
    }

    pub fn input(mut self, role: impl Into<String>, content: &[u8]) -> Self {
        self.inputs.push((role.into(), content_hash(content)));
        self
    }

    /// Exit code contract: 0 all pass, 1 any fail, 2 any inconclusive
    /// (failures dominate).
    pub fn exit_code(&self) -> i32 {
        if self.verdicts.iter().any(|v| v.status == VerdictStatus::Fail) {
            1
        } else if self.verdicts.iter().any(|v| v.status == VerdictStatus::Inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// Hex SHA-256 of the content, truncated to 16 bytes of output; enough to
/// re-identify artifacts across stages.
pub fn content_hash(content: &[u8]) -> String {
    let digest = Sha256::digest(content);
    let mut out = String::with_capacity(32);
    for b in &digest[..16] {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_contract() {
        let mut r = RunReport::new("x", None);
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(Verdict::pass("a", ""));
        assert_eq!(r.exit_code(), 0);
        r.verdicts.push(Verdict::inconclusive("b", ""));
        assert_eq!(r.exit_code(), 2);
        r.verdicts.push(Verdict::fail("c", ""));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn reports_are_deterministic() {
        let build = || {
            let mut r = RunReport::new("certify --clique 4", Some(7));
            r = r.input("graph", b"DqK");
            r.verdicts.push(Verdict::pass("k4-free", "absence certificate"));
            r.to_json()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        assert_eq!(content_hash(b"abc"), content_hash(b"abc"));
        assert_ne!(content_hash(b"abc"), content_hash(b"abd"));
        assert_eq!(content_hash(b"abc").len(), 32);
    }
}
