//! Library side of the `fracoga` command-line tool: configuration parsing,
//! table output, sweeps and the built-in verification suite.

pub mod config;
pub mod error;
pub mod experiment;
pub mod table;
pub mod verify;

pub use error::{exit, CliError, Result};
