//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("element outside ambient group")]
    OutsideAmbient,
    #[error("non-symmetric pairing")]
    NonSymmetricPairing,
    #[error("degenerate pairing on {0}")]
    DegeneratePairing(String),
    #[error("invalid module action: {0}")]
    InvalidAction(String),
    #[error("mismatched parents")]
    MismatchedParents,
    #[error("infinite index in {0}")]
    InfiniteIndex(String),
    #[error("index has nontrivial part away from the localized prime: {0}")]
    NonLocalIndex(String),
    #[error("infinite Tate group")]
    InfiniteTate,
    #[error("cochain complex too large ({0} generators)")]
    OracleTooLarge(usize),
    #[error("unsatisfiable generator constraints: {0}")]
    Unsatisfiable(String),
    #[error("not a rational representation of D")]
    NotRational,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("increase precision")]
    PrecisionExhausted,
    #[error("place above p belongs to S'")]
    PlaceAboveP,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("missing invariant: {0}")]
    MissingInvariant(String),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid prime {0}: expected an odd prime >= 3")]
    InvalidPrime(u64),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
