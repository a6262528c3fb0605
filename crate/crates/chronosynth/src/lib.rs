//! File formats, configuration and subcommand logic behind the `chronosynth`
//! binary.

pub mod check;
pub mod commands;
pub mod config;
pub mod format;
pub mod session;
