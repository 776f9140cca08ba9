//! Command-line driver, file formats and plots on top of `scarmps-core`.

pub mod cache;
pub mod cli;
pub mod config;
pub mod dense;
pub mod error;
pub mod parallel;
pub mod plot;
pub mod table;
pub mod verify;

pub use error::{Result, ToolError};
