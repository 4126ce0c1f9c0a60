//! Free graded-commutative algebras over the rationals, their differentials,
//! and morphisms between them.

mod free;
mod morphism;
mod poly;
mod presentation;

use thiserror::Error;

pub use free::{format_terms, is_identifier, FreeAlgebra, Generator};
pub use morphism::{ChainViolation, Morphism, MorphismError};
pub use poly::{Monomial, Poly};
pub(crate) use presentation::shift_indices;
pub use presentation::{DSquaredViolation, Presentation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("`{0}` is not a valid generator name")]
    BadName(String),
    #[error("generator `{0}` has degree 0")]
    ZeroDegree(String),
    #[error("generator `{0}` is declared twice")]
    DuplicateName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("differential given for `{0}` twice")]
    DuplicateDifferential(String),
    #[error("d({generator}) must be homogeneous of degree {expected}, got `{value}`")]
    Inhomogeneous {
        generator: String,
        expected: u32,
        value: String,
    },
    #[error("d(d({generator})) = {value}, expected 0")]
    DSquaredNonzero { generator: String, value: String },
    #[error("cannot parse polynomial `{text}`: {message}")]
    Parse { text: String, message: String },
    #[error("polynomial `{text}` is not homogeneous of degree {expected}")]
    WrongDegree { text: String, expected: u32 },
    #[error("truncation degree must be positive")]
    ZeroTruncation,
}
