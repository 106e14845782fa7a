//! File formats, experiment runners and the command line for `h3-core`.

pub mod classify;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod format;
pub mod implication;

pub use error::{HarnessError, Result};
