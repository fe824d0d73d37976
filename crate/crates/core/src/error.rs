use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A precondition of the disjointness-transfer check or of the
/// non-representability criterion that failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    NotPositive,
    NotIdempotent,
    /// `E·T ≠ T`
    LeftAbsorption,
    /// `T·E ≠ T`
    RightAbsorption,
    /// `E ∧ T ≠ 0`
    Meet,
    /// `e² ≠ e` or `p² ≠ p`
    Idempotents,
    /// `e·p ≠ p` or `p·e ≠ p`
    Absorption,
    /// the band component of `p` along `e` is not a multiple of `e`
    ScalarMultiple,
    /// `x ∧ e ≠ 0` for the residual `x`
    Disjointness,
    /// `e` or `p` is zero
    Nonzero,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::NotPositive => "not positive",
            Hypothesis::NotIdempotent => "not idempotent",
            Hypothesis::LeftAbsorption => "ET != T",
            Hypothesis::RightAbsorption => "TE != T",
            Hypothesis::Meet => "E meet T != 0",
            Hypothesis::Idempotents => "e and p are not both idempotent",
            Hypothesis::Absorption => "ep = pe = p fails",
            Hypothesis::ScalarMultiple => "band component of p is not a multiple of e",
            Hypothesis::Disjointness => "x meet e != 0",
            Hypothesis::Nonzero => "e or p is zero",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("basis is singular")]
    SingularBasis,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator or vector is not positive")]
    NotPositive,
    #[error("operators act on different spaces")]
    SpaceMismatch,
    #[error("p-norms are only defined on the standard cone")]
    UnsupportedCone,
    #[error("exponent must satisfy p >= 1")]
    BadExponent,
    #[error("malformed linear program: {0}")]
    MalformedProgram(String),
    #[error("vector is not in the range of the projection")]
    NotInRange,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(Hypothesis),
    #[error("projection is zero")]
    ZeroProjection,
    #[error("operator is not idempotent")]
    NotIdempotent,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("not a permutation of 1..={0}")]
    NotAPermutation(usize),
    #[error("generated group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("operator is not contractive for this exponent")]
    NotContractive,
    #[error("diagonal is not constant")]
    DiagonalNotConstant,
    #[error("constant diagonal is zero")]
    ZeroDiagonal,
    #[error("THEOREM VIOLATION: {0}")]
    TheoremViolation(String),
    #[error("bad instance family: {0}")]
    BadFamily(String),
    #[error("dimension {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("need at least two blocks of equal size")]
    NeedTwoBlocks,
    #[error("alpha must satisfy 0 < alpha < 1")]
    BadAlpha,
    #[error("beta must satisfy -1 <= beta <= 0")]
    BetaOutOfRange,
    #[error("algebra structure invalid: {0}")]
    BadAlgebra(String),
    #[error("parse error: {0}")]
    Parse(String),
}
