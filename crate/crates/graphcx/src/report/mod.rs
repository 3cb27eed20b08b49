//! Job configs, the on-disk cache and report envelopes.

pub mod cache;
pub mod config;

pub use cache::{basis_body, Cache, CacheError, Lookup, CACHE_ENV};
pub use config::{ConfigError, JobConfig, TwistName};

use serde::Serialize;

/// Version of the sign and normalization conventions every report was produced under.
pub const LEDGER_VERSION: &str = "conventions-1";

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Usage = 1,
    Integrity = 2,
    Resource = 3,
}

/// A result together with everything needed to reproduce it.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub command: String,
    pub config: serde_json::Value,
    pub ledger_version: &'static str,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, config: &impl Serialize, result: T) -> Self {
        Report {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            ledger_version: LEDGER_VERSION,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `# ` lines carrying the config and ledger version, for CSV and text outputs.
    pub fn preamble(&self) -> String {
        format!("# command {}\n# config {}\n# ledger {}\n", self.command, self.config, self.ledger_version)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_deterministic() {
        let cfg = JobConfig::from_json(r#"{"family": "GC2", "n": 2, "j": 2}"#).unwrap();
        let a = Report::new("euler", &cfg, 3).to_json();
        let b = Report::new("euler", &cfg, 3).to_json();
        assert_eq!(a, b);
        assert!(a.contains(LEDGER_VERSION));
        assert!(Report::new("euler", &cfg, 3).preamble().starts_with("# command euler\n"));
    }
}
