//! File formats, reports and the command-line front end for `desir-core`.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;
pub mod script;

pub use error::CliError;
