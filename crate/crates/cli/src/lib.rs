//! The `schubpf` command-line tool as a library: argument types, the output
//! document, built-in reference tables and renderers.

pub mod args;
pub mod commands;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod latex;
pub mod render;

pub use args::{Cli, Command, Format, Method};
pub use commands::run;
pub use document::OutputDocument;
pub use error::CliError;
