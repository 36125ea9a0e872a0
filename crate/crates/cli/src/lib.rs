//! Command-line front end for the subnormality engines: single-point
//! reports, reference-case checks and parameter-plane scans.

pub mod commands;
pub mod config;
pub mod error;
pub mod golden;
pub mod records;
pub mod scan;
pub mod svg;

pub use config::{Grid, OutputFormat, RunConfig};
pub use error::{CliError, Result};
pub use records::{ScanDocument, ScanRecord, WitnessSummary};
