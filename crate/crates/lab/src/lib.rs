//! Model files, reports, and the `subentity-lab` command line.

pub mod build;
pub mod cli;
pub mod model;
pub mod parse;
pub mod report;
pub mod serialize;

pub use cli::run;
pub use model::{Body, ModelDocument, ModelKind};
pub use parse::{parse_model, parse_model_with, ParseError};
pub use report::Report;
pub use serialize::serialize_model;
