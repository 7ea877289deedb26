//! Runtime configuration: field choice, monomial order, resource caps, and
//! output verbosity. Round-trips through JSON; flags override file values.

use crate::closure::ClosureCaps;
use crate::limits::GbLimits;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct Config {
    /// Default coefficient field for rings built without a descriptor.
    pub field: crate::field::FieldDesc,
    /// Default monomial order name: "grevlex" or "lex".
    pub order: String,
    pub cap_pairs: usize,
    pub cap_degree: u32,
    /// Reduction-criterion iteration cap.
    pub closure_cap_n: u32,
    /// Power-certificate exponent cap.
    pub closure_cap_s: u32,
    pub verbosity: u8,
    pub workers: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub corpus_paths: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        let gb = GbLimits::default();
        let cl = ClosureCaps::default();
        Config {
            field: crate::field::FieldDesc::Q,
            order: "grevlex".to_string(),
            cap_pairs: gb.max_pairs,
            cap_degree: gb.max_degree,
            closure_cap_n: cl.max_reduction_n,
            closure_cap_s: cl.max_power_s,
            verbosity: 0,
            workers: 1,
            corpus_paths: Vec::new(),
        }
    }
}

impl Config {
    pub fn gb_limits(&self) -> GbLimits {
        GbLimits {
            max_pairs: self.cap_pairs,
            max_degree: self.cap_degree,
        }
    }

    pub fn closure_caps(&self) -> ClosureCaps {
        ClosureCaps {
            max_power_s: self.closure_cap_s,
            max_reduction_n: self.closure_cap_n,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.cap_pairs == 0 || self.cap_degree == 0 {
            return Err("caps must be positive".into());
        }
        if self.closure_cap_s == 0 {
            return Err("closure power cap must be positive".into());
        }
        if self.workers == 0 {
            return Err("workers must be positive".into());
        }
        self.field.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_roundtrip() {
        let c = Config {
            cap_pairs: 1234,
            closure_cap_s: 5,
            workers: 3,
            ..Config::default()
        };
        let json = serde_json::to_string(&c).unwrap();
        let back: Config = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
        assert!(back.validate().is_ok());
    }

    #[test]
    fn zero_caps_are_rejected() {
        let c = Config {
            cap_pairs: 0,
            ..Config::default()
        };
        assert!(c.validate().is_err());
    }
}
