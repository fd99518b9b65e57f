//! Batch front end for the `propertime` library: scenario configs in, CSV
//! tables out, plus the invariant verification suite.

pub mod config;
pub mod constants;
pub mod error;
pub mod scenarios;
pub mod table;
pub mod verify;

pub use config::Config;
pub use error::CliError;
pub use table::ResultTable;
