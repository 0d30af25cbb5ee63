//! Command-line front end for `ripscollapse`: file input, dataset generators, reports and
//! the verification pipelines that exercise the collapse theorems end to end.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod pipelines;
pub mod report;

pub use error::CliError;
pub use report::RunReport;
