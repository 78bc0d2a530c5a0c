//! Command-line front end for the `lfda` crate: CSV input, JSON model
//! files, CSV embeddings and SVG plots.

pub mod commands;
pub mod dataset;
pub mod error;
pub mod model_file;
pub mod plot;

pub use commands::{run, Cli};
pub use error::{CliError, CliResult};
