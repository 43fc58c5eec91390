//! File formats, certificate checking and the command-line front end for
//! `taylor-core`.

pub mod certfile;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod suite;
pub mod text;

pub use error::{Error, Result};
