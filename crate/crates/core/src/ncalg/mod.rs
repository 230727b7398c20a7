//! Presented noncommutative algebras, normal forms, grading and Hopf maps.

mod confluence;
mod element;
mod hopf;
mod presentation;
pub mod presets;
mod word;

use thiserror::Error;

pub use confluence::{Ambiguity, AmbiguityKind, ConfluenceReport};
pub use element::{render_terms, AlgElement, TensorElement};
pub use hopf::HopfData;
pub use presentation::{Presentation, RawPoly, Rule, ZDegree, DEFAULT_BUDGET};
pub use word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("at most 250 generators are supported")]
    TooManyGenerators,
    #[error("rewrite budget of {0} steps exceeded")]
    ReductionBudgetExceeded(usize),
    #[error("rule {0} does not decrease the word order")]
    RuleNotDecreasing(usize),
    #[error("rule {0} is not homogeneous for the grading")]
    GradingNotHomogeneous(usize),
    #[error("grading must list one degree per generator")]
    GradingLength,
    #[error("no grading declared")]
    GradingAbsent,
    #[error("no Hopf structure declared")]
    HopfAbsent,
    #[error("antipode power {0} is not one of ±1, ±2")]
    UnsupportedPower(i32),
}
