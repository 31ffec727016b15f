//! A finite workbench for exact completions of quasi-cartesian categories.
//!
//! The base category is finite sets with pluggable weak limits. On top of it
//! the crate builds the proof-relevant internal logic, the exact completion
//! of pseudo-equivalence relations, full families of pseudo-relations, and
//! universal dependent products, each with brute-force cross-checks.

pub mod bhk;
pub mod cetcs;
pub mod depprod;
pub mod excompletion;
pub mod error;
pub mod finset;
pub mod fullness;
pub mod qcart;
pub mod suite;
pub mod unionfind;

pub use error::{Error, Result};
pub use finset::{FiniteMap, FiniteSet};
pub use fullness::Limits;
pub use qcart::WeakLimitStrategy;
