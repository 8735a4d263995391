//! Scenario runner for the `wva-core` model.
//!
//! Each scenario is a named parameter sweep that writes a CSV table and a
//! `key=value` summary. [`checks`] holds the pass/fail criteria used by
//! `wva-lab verify` and the acceptance suite.

pub mod checks;
pub mod config;
pub mod error;
pub mod model;
pub mod scenarios;
pub mod table;

pub use config::{Config, Param};
pub use error::{LabError, Result};
pub use scenarios::{find, registry, Outcome, Scenario, Summary};
