//! Command-line front end for the thermal dwell-time library: argument
//! parsing, config-file merging, sweep execution and loss-free CSV/JSON
//! emission.

pub mod args;
pub mod config;
pub mod dispatch;
pub mod output;
pub mod sweep;

pub use dispatch::cli_dispatch;
