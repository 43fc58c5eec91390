use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::op::Elem;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    ArityMismatch { expected: usize, found: usize },
    OutOfRange { value: usize, domain: usize },
    DomainMismatch { expected: usize, found: usize },
    LengthMismatch { expected: usize, found: usize },
    /// Some value escapes the subset; carries the offending argument tuple.
    NotClosed { op: String, args: Vec<Elem> },
    NotACongruence,
    NotIdempotent { op: String },
    SignatureMismatch,
    DuplicateOperation(String),
    EmptyAlgebra,
    InvalidPartition(String),
    NotMember,
    /// A closure hit its element cap before the question could be settled.
    Inconclusive { cap: usize },
    NoCompletion,
    NonUniqueCompletion { found: usize },
    UnknownName(String),
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ArityMismatch { expected, found } => {
                write!(f, "arity mismatch: expected {expected}, found {found}")
            }
            Error::OutOfRange { value, domain } => {
                write!(f, "element {value} out of range for domain size {domain}")
            }
            Error::DomainMismatch { expected, found } => {
                write!(f, "domain mismatch: expected {expected}, found {found}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected} values, found {found}")
            }
            Error::NotClosed { op, args } => {
                write!(f, "subset not closed: {op}{args:?} escapes")
            }
            Error::NotACongruence => write!(f, "partition is not a congruence"),
            Error::NotIdempotent { op } => write!(f, "operation {op} is not idempotent"),
            Error::SignatureMismatch => write!(f, "operation signatures differ"),
            Error::DuplicateOperation(name) => write!(f, "duplicate operation name {name}"),
            Error::EmptyAlgebra => write!(f, "domain must be nonempty"),
            Error::InvalidPartition(msg) => write!(f, "invalid partition: {msg}"),
            Error::NotMember => write!(f, "tuple is not a member of the generated set"),
            Error::Inconclusive { cap } => {
                write!(f, "inconclusive: closure exceeded the cap of {cap} elements")
            }
            Error::NoCompletion => write!(f, "no table satisfies the constraints"),
            Error::NonUniqueCompletion { found } => {
                write!(f, "constraints admit {found} tables, expected exactly one")
            }
            Error::UnknownName(name) => write!(f, "unknown name {name}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
