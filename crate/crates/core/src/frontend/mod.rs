//! Presentation files, built-in presets, verification suites and reports.

pub mod expr;
pub mod file;
pub mod presets;
pub mod report;
pub mod suites;

use std::fmt;

use thiserror::Error;

pub use file::{parse_element, parse_hom, PresentationFile};
pub use presets::{load_source, Preset, PRESETS};
pub use report::{Report, Summary, SCHEMA};
pub use suites::{run, Command, Options};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, expected: &str) -> Self {
        ParseError { line, col, expected: expected.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected {}", self.line, self.col, self.expected)
    }
}

/// Anything that stops a file from becoming a usable calculus.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("the file has no {0} section")]
    Missing(&'static str),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("cannot read {0}: {1}")]
    Io(String, String),
    #[error(transparent)]
    Alg(#[from] crate::ncalg::AlgError),
    #[error(transparent)]
    LinMap(#[from] crate::linmap::LinMapError),
    #[error(transparent)]
    Der(#[from] crate::multider::DerError),
    #[error(transparent)]
    Dga(#[from] crate::dga::DgaError),
    #[error(transparent)]
    Descent(#[from] crate::descent::DescentError),
}
