use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exit {
    Ok = 0,
    /// A search stopped on its budget.
    Inconclusive = 2,
    /// A check failed: verification, reproduction or sweep mismatch.
    Mismatch = 3,
    Usage = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputHash {
    pub path: String,
    /// SHA-256 of the file bytes.
    pub sha256: String,
}

impl InputHash {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        Self {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Uniform JSON envelope for every subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputHash>,
    pub status: Exit,
    pub result: Value,
    /// Wall-clock milliseconds per phase; only filled on request so that
    /// reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            tool: "otisham",
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: Vec::new(),
            status: Exit::Ok,
            result: Value::Null,
            timings_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timings_are_omitted_unless_set() {
        let mut r = RunReport::new(vec!["gen".into()]);
        assert!(!r.to_json().contains("timings_ms"));
        r.timings_ms = Some(BTreeMap::from([("wall".to_string(), 3)]));
        assert!(r.to_json().contains("\"wall\": 3"));
    }

    #[test]
    fn exit_codes() {
        assert_eq!([Exit::Ok, Exit::Inconclusive, Exit::Mismatch, Exit::Usage].map(Exit::code), [0, 2, 3, 4]);
        assert_eq!(serde_json::to_string(&Exit::Mismatch).unwrap(), "\"mismatch\"");
    }

    #[test]
    fn hashes_bytes() {
        assert_eq!(
            InputHash::of("x", b"").sha256,
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
