//! Exact computation of twin dragon / rational line intersections.
//!
//! The library builds Büchi automata recognizing the base (−4) digit
//! expansions of points in the Knuth Twin Dragon `K` (and its boundary)
//! that lie on a rational line, and derives exact Hausdorff dimensions
//! from the spectral radii of the strongly connected components of those
//! automata.

pub mod buchi;
pub mod cns;
pub mod dimension;
pub mod geometry;
pub mod line;
pub mod render;
pub mod verify;

/// Errors shared by all modules.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degenerate line: p = q = 0")]
    DegenerateLine,
    #[error("alphabet mismatch between automata")]
    AlphabetMismatch,
    #[error("neither product operand is all-terminal")]
    NotAllTerminal,
    #[error("operation requires a trimmed, all-terminal automaton")]
    NotTrimmed,
    #[error("sequence tail is the excluded alternating word (01)^ω")]
    AlternatingTail,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("empty intersection: no certificate to produce")]
    EmptyReport,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
