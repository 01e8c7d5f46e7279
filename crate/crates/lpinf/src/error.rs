use std::fmt;

use thiserror::Error;

/// A failed mathematical check together with the first offending term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub witness: String,
}

impl Violation {
    pub fn new(check: impl Into<String>, witness: impl Into<String>) -> Self {
        Violation {
            check: check.into(),
            witness: witness.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {}", self.check, self.witness)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("duplicate basis name {0:?}")]
    DuplicateName(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("map is not surjective in degree {0}")]
    NotSurjective(i64),
    #[error("map is not injective in degree {0}")]
    NotInjective(i64),
    #[error("not a complex: composite nonzero in degree {0}")]
    NotAComplex(i64),
    #[error("morphism is not a fibration")]
    NotFibration,
    #[error("morphism is not a cofibration")]
    NotCofibration,
    #[error("cochain is not closed: {0}")]
    NotClosed(String),
    #[error("module is not strict: component of weight {0} is nonzero")]
    NonStrict(usize),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("not a dg Lie subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("splitting is not a section: {0}")]
    NotSection(String),
    #[error("lifting hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("{0}")]
    Violation(Violation),
}

impl Error {
    /// Mathematical failures exit with 1, input problems with 2.
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::Violation(_)
                | Error::NotSurjective(_)
                | Error::NotInjective(_)
                | Error::NotAComplex(_)
                | Error::NotFibration
                | Error::NotCofibration
                | Error::NotClosed(_)
                | Error::NonStrict(_)
                | Error::NotSubalgebra(_)
                | Error::NotSection(_)
                | Error::HypothesisNotMet(_)
                | Error::NoSolution(_)
        )
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Violation(v)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
