//! Shared error type.
//!
//! Most failure modes here indicate either misuse of a precondition
//! (weights out of range, non-dominant highest weights) or an internal
//! consistency violation that means the derived class data or the exact
//! arithmetic itself is wrong and must not be trusted.

use crate::rootlattice::Weight;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Weight parameter below the range where the counting method is defined.
    #[error("weight parameter {k} is out of range: {bound}")]
    WeightOutOfRange { k: i64, bound: &'static str },

    /// A highest weight that is not G2-dominant was passed where one is required.
    #[error("weight {0:?} is not G2-dominant")]
    NonDominant(Weight),

    /// A cyclotomic number expected to be rational has nonzero irrational part.
    #[error("cyclotomic number is not rational")]
    NonRational,

    /// A rational expected to be an integer is not.
    #[error("rational value {0} is not an integer")]
    NonIntegral(String),

    /// Mixed moduli in cyclotomic arithmetic without an embedding.
    #[error("cyclotomic modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    /// Jet division where the numerator vanishes to lower order than the denominator.
    #[error("jet ratio underflow: numerator valuation {num} < denominator valuation {den}")]
    OrderMismatch { num: usize, den: usize },

    /// Jet truncation order too small to decide a valuation.
    #[error("jet truncation order {order} too short to resolve the denominator")]
    TruncationTooShort { order: usize },

    /// Every deformation direction left the Weyl denominator zero to truncation order.
    #[error("character denominator degenerate along all deformation directions")]
    DeformationDegenerate,

    /// Representation too large for the weight-multiplicity table.
    #[error("dimension {dim} exceeds the multiplicity-table bound {bound}")]
    BoundExceeded { dim: u64, bound: u64 },

    /// Unit enumeration of the octonion order found the wrong count.
    #[error("octonion order data is bad: found {found} units, expected 240")]
    BadOrderData { found: usize },

    /// Automorphism-group enumeration found the wrong group order.
    #[error("automorphism group has unexpected size {found}, expected 12096")]
    GroupSizeUnexpected { found: usize },

    /// No torus parameter reproduces a conjugacy class's eigenvalues.
    #[error("no torus parameter matches the eigenvalues of a class of order {order}")]
    TorusRecoveryFailed { order: u64 },

    /// Class datafile failed validation.
    #[error("class datafile invalid: {0}")]
    ClassDataInvalid(String),

    /// Fixture file not found.
    #[error("fixture file missing: {0}")]
    FixtureMissing(String),

    /// Fixture file unreadable or semantically empty.
    #[error("fixture malformed: {0}")]
    FixtureMalformed(String),

    /// I/O failure, stringified to keep the error type comparable.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
