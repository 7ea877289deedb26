//! Exact computer-algebra workbench for Briançon-Skoda-type containments.
//!
//! The crate builds Koszul, Buchsbaum-Eisenbud (via Eagon-Northcott) and
//! Čech complexes over finitely presented rings, decides ideal and module
//! questions with Gröbner bases, certifies integral-closure membership, and
//! mechanically verifies containments of the form `closure(J^(n+k-1)) ⊆ J^k`
//! together with constructive vanishing witnesses on blowups.

pub mod field;
pub mod monomial;
pub mod poly;
pub mod limits;
pub mod gb;
pub mod ring;
pub mod parser;
pub mod ideal;
pub mod module;
pub mod newton;
pub mod complex;
pub mod bs;
pub mod blowup;
pub mod total;
pub mod fixtures;
pub mod closure;
pub mod oracle;
pub mod workbench;
pub mod config;

pub use config::Config;
pub use field::{FieldDesc, Scalar};
pub use ideal::Ideal;
pub use limits::{CapExceeded, GbLimits};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Poly;
pub use ring::{Ring, RingDescriptor, RingPresentation};
