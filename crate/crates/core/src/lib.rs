//! Computational toolkit for finite idempotent algebras.
//!
//! Everything here is pure and allocation-based: operation tables, closure
//! inside finite powers (subpowers, free algebras, clone membership),
//! congruence lattices, absorption and edge detection, constrained search over
//! operation tables, an embedded catalog of small minimal Taylor algebras, and a
//! certificate language that replays facts about the catalog.
//!
//! Text formats, file IO and the command-line front end live in the `alg`
//! crate.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod certify;
pub mod congruence;
pub mod error;
pub mod groups;
pub mod op;
pub mod partition;
pub mod search;
pub mod structure;
pub mod subpower;
pub mod term;

pub use error::{Error, Result};
pub use op::{Algebra, Elem, OperationTable, PartialTable};
pub use partition::Partition;
pub use subpower::{GeneratedSet, DEFAULT_CAP};
pub use term::Term;
