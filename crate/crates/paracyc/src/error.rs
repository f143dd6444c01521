//! Error type shared across the engine.

use thiserror::Error;

/// Errors produced by validation and construction routines.
///
/// Infeasibility of a linear-solver witness is *not* an error (it is a
/// meaningful answer) and is reported as `Option::None` by the solvers.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    /// A multiplication table fails associativity.
    #[error("multiplication table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    /// A multiplication table has no two-sided identity element.
    #[error("multiplication table has no identity element")]
    NoIdentity,
    /// Some element of a multiplication table has no inverse.
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    /// Matrix shapes are incompatible for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A claimed two-periodic complex does not square to zero.
    #[error("not a complex: boundary does not square to zero")]
    NotAComplex,
    /// Two objects over different groups were combined.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    /// A degree-raising operator was requested beyond the truncation level.
    #[error("degree overflow: operator needs degree {needed} but the space is truncated at {max}")]
    DegreeOverflow { needed: usize, max: usize },
    /// A Hodge-tower level beyond the computable range was requested.
    #[error("level {level} too high for truncation {max}")]
    LevelTooHigh { level: usize, max: usize },
    /// An operation requiring a unital algebra received a non-unital one.
    #[error("algebra is not unital")]
    NotUnital,
    /// A balanced tensor product was requested without module structure.
    #[error("not balanced: {0}")]
    NotBalanced(String),
    /// A retraction input violates its own contract.
    #[error("retraction contract violated: {0}")]
    ContractViolation(String),
    /// A perturbation series failed to terminate within the dimension bound.
    #[error("operator is not nilpotent within the expected bound")]
    NotNilpotent,
    /// A required witness operator does not exist.
    #[error("no witness: {0}")]
    NoWitness(String),
    /// An exact operator identity failed; carries a human-readable witness.
    #[error("identity violation: {0}")]
    IdentityViolation(String),
    /// Composition of homology classes with mismatched endpoints.
    #[error("composition mismatch: {0}")]
    Mismatch(String),
}
