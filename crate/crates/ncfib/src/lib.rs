//! Command-line front end, JSON report and config formats for `ncfib-core`.

pub mod cli;
pub mod config;
pub mod render;
pub mod report;

pub use cli::run;
pub use report::{CheckReport, ExampleReport, SCHEMA_VERSION};
