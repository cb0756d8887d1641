//! Library side of the `searoute` command-line tool: configuration files,
//! run reports, SVG rendering and the subcommand implementations. The binary
//! in `main.rs` only parses arguments and maps errors to exit codes.

pub mod commands;
pub mod config;
pub mod render;
pub mod report;
