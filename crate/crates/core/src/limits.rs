//! Resource caps for Gröbner-basis computations.
//!
//! Exceeding a cap is a reported outcome distinct from any true/false answer;
//! the engine never degrades to a wrong result.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Caps on the Buchberger loop: total S-pairs processed and the maximum
/// total degree of any polynomial the loop may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbLimits {
    pub max_pairs: usize,
    pub max_degree: u32,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_pairs: 200_000,
            max_degree: 40,
        }
    }
}

impl GbLimits {
    pub fn relaxed(factor: usize) -> Self {
        let d = GbLimits::default();
        GbLimits {
            max_pairs: d.max_pairs.saturating_mul(factor),
            max_degree: d.max_degree.saturating_mul(factor as u32).min(u16::MAX as u32),
        }
    }
}

/// A resource cap was exceeded. Carries which cap and where.
#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize, Deserialize)]
pub enum CapExceeded {
    #[error("S-pair budget exceeded ({0} pairs)")]
    Pairs(usize),
    #[error("degree budget exceeded (degree {0})")]
    Degree(u32),
}
