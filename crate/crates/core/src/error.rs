//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `d` was not a squarefree integer greater than 1.
    #[error("invalid field: d = {0} must be a squarefree integer > 1")]
    InvalidField(i64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix is not positive definite (pivot {pivot_index} not positive)")]
    NotPositiveDefinite { pivot_index: usize },

    /// A Gram entry violated the classic (integral) or non-classic
    /// (half-integral off-diagonal, integral diagonal) constraint.
    #[error("classicality violation at Gram entry ({row}, {col})")]
    ClassicalityViolation { row: usize, col: usize },

    /// A matrix entry was expected to lie in the ring of integers.
    #[error("entry ({row}, {col}) is not an algebraic integer of the field")]
    NonIntegralEntry { row: usize, col: usize },

    #[error("target is not totally positive")]
    TargetNotTotallyPositive,

    /// A vector was required to have a rational integer norm.
    #[error("vector {index} has non-integer norm")]
    NonIntegerNorm { index: usize },

    /// A criterion norm is not represented by the lattice.
    #[error("norm {0} is not represented")]
    MissingNorm(u32),

    /// A pair of small-norm vectors had non-integral inner product where
    /// integrality was required.
    #[error("inner product of vectors {i} and {j} is not a rational integer")]
    IntegralityFailure { i: usize, j: usize },

    /// No four of the fifteen escalation vectors are linearly independent.
    #[error("no linearly independent quadruple among the escalation vectors")]
    NoIndependentQuadruple,

    /// No 4×4 minor of the decomposition's integer part has positive
    /// determinant.
    #[error("no principal 4x4 minor with positive determinant")]
    NoQualifyingQuadruple,

    #[error("matrix entry ({row}, {col}) exceeds the bound N")]
    EntryExceedsBound { row: usize, col: usize },

    #[error("invalid parameter: {0}")]
    BadParameter(String),

    /// A structural hypothesis of the certificate pipeline failed; the
    /// message identifies the datum.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
}
