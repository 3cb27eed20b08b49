//! The JSON job record and its translation into a spec and window.

use crate::complexes::{check_window, ComplexError, ComplexSpec, Family, HairBound, Twist, Window};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Json(String),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwistName {
    #[default]
    None,
    Alpha,
}

/// `{family, n, m, N, j, H_max, V_max, degree_range, twist}` plus two window flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub family: String,
    pub n: i64,
    #[serde(default)]
    pub m: Option<i64>,
    #[serde(rename = "N", default)]
    pub arity: Option<usize>,
    #[serde(default)]
    pub j: Option<i64>,
    #[serde(rename = "H_max", default)]
    pub h_max: Option<usize>,
    #[serde(rename = "V_max", default)]
    pub v_max: Option<usize>,
    #[serde(default)]
    pub degree_range: Option<(i64, i64)>,
    #[serde(default)]
    pub twist: TwistName,
    #[serde(default)]
    pub connected: bool,
    #[serde(default)]
    pub tadpoles: bool,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn spec(&self) -> Result<ComplexSpec, ConfigError> {
        let family = Family::parse(&self.family).ok_or_else(|| ConfigError::Invalid(format!("unknown family {}", self.family)))?;
        let spec = ComplexSpec { family, n: self.n, m: self.m, arity: self.arity, twist: Twist::None }.validated()?;
        match self.twist {
            TwistName::None => Ok(spec),
            TwistName::Alpha => {
                if self.h_max.is_none() {
                    return Err(ConfigError::Invalid("a twisted complex needs H_max".into()));
                }
                if self.m != Some(self.n - 1) {
                    return Err(ConfigError::Invalid("the twist by alpha lives on m = n - 1".into()));
                }
                Ok(spec.with_twist(Twist::Alpha)?)
            }
        }
    }

    pub fn window(&self) -> Window {
        let mut w = Window { loop_order: self.j, ..Window::default() };
        if let Some(h) = self.h_max {
            w = w.with_hairs(HairBound::AtMost(h));
        }
        if let Some(v) = self.v_max {
            w = w.with_max_internal(v);
        }
        if let Some((lo, hi)) = self.degree_range {
            w = w.with_degrees(lo, hi);
        }
        if self.connected {
            w = w.connected();
        }
        if self.tadpoles {
            w = w.with_tadpoles();
        }
        w
    }

    /// Spec and window, with the window checked to be finite.
    pub fn resolve(&self) -> Result<(ComplexSpec, Window), ConfigError> {
        let spec = self.spec()?;
        let window = self.window();
        let base = ComplexSpec { twist: Twist::None, ..spec };
        check_window(&base, &window)?;
        Ok((spec, window))
    }

    /// Hex sha256 of the serialized record.
    pub fn content_hash(&self) -> String {
        Sha256::digest(self.to_json().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hash() {
        let c = JobConfig::from_json(r#"{"family": "Graphs", "n": 2, "N": 3, "j": 0}"#).unwrap();
        assert_eq!(c.arity, Some(3));
        assert_eq!(JobConfig::from_json(&c.to_json()).unwrap(), c);
        assert_eq!(c.content_hash().len(), 64);
        let d = JobConfig { j: Some(1), ..c.clone() };
        assert_ne!(c.content_hash(), d.content_hash());
        assert!(c.resolve().is_ok());
    }

    #[test]
    fn rejects_bad_records() {
        assert!(matches!(JobConfig::from_json(r#"{"family": "Graphs", "n": 2, "bogus": 1}"#), Err(ConfigError::Json(_))));
        let c = JobConfig::from_json(r#"{"family": "Nope", "n": 2}"#).unwrap();
        assert!(matches!(c.resolve(), Err(ConfigError::Invalid(_))));
        let c = JobConfig::from_json(r#"{"family": "GC2", "n": 2, "j": 1}"#).unwrap();
        assert!(matches!(c.resolve(), Err(ConfigError::Complex(ComplexError::Window(_)))));
        let c = JobConfig::from_json(r#"{"family": "HGC", "n": 2, "m": 1, "j": 1, "twist": "alpha"}"#).unwrap();
        assert!(matches!(c.resolve(), Err(ConfigError::Invalid(_))));
    }
}
