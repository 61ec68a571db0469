//! Command line front end: file formats, presets and verb dispatch.

pub mod commands;
pub mod io;
pub mod presets;

pub use commands::{run, Cli, Outcome};
