//! Instance documents, formula syntax and subcommands of the `excomp`
//! command-line driver.

pub mod commands;
pub mod formula;
pub mod instance;

/// The finite-set instance used when `cetcs` is run without a document.
pub const BUNDLED_INSTANCE: &str = include_str!("../instances/finite_sets.json");
