//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building matrices, decomposing them,
/// or certifying a subspace.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix entry was NaN or infinite.
    #[error("non-finite entry at ({row}, {col}) in {context}")]
    NonFinite {
        context: String,
        row: usize,
        col: usize,
    },

    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch in {context}: {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: String,
        found: String,
    },

    /// A single matrix has a shape the operation cannot accept.
    #[error("bad shape in {context}: {detail}")]
    ShapeError { context: String, detail: String },

    /// Hermitian input required; `defect` is the relative asymmetry norm.
    #[error("matrix is not Hermitian: ||H - H^*||_F = {defect:.3e} exceeds {tol:.3e} * ||H||_F")]
    NotHermitian { defect: f64, tol: f64 },

    /// Frame columns are not orthonormal to tolerance.
    #[error("frame is not orthonormal: ||P^H P - I||_F = {defect:.3e} exceeds {tol:.3e}")]
    NotOrthonormal { defect: f64, tol: f64 },

    /// The spectral gap at the split index is too small to certify.
    #[error("spectral gap {gap:.3e} at split index {split} is below the certifiable threshold {threshold:.3e}")]
    ZeroGap {
        gap: f64,
        split: usize,
        threshold: f64,
    },

    /// The trace objective exceeded its proven maximum by far more than rounding.
    #[error("trace objective exceeds its maximum by {excess:.3e}; inputs violate the certified hypothesis")]
    FanViolation { excess: f64 },

    /// The provided reference frame does not span an invariant subspace.
    #[error("reference frame is not invariant: residual {residual:.3e} exceeds {threshold:.3e}")]
    NotInvariant { residual: f64, threshold: f64 },

    /// An operation required full column rank.
    #[error("matrix is rank deficient in {context}: sigma_min = {sigma_min:.3e} vs sigma_max = {sigma_max:.3e}")]
    RankDeficient {
        context: String,
        sigma_min: f64,
        sigma_max: f64,
    },

    /// More nonzero rotation angles were requested than the complement can hold.
    #[error("angle budget exceeded: {requested} nonzero angles requested but only {available} complement directions exist")]
    AngleBudget { requested: usize, available: usize },

    /// Invalid harness or CLI configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed matrix text file.
    #[error("matrix format error: {0}")]
    Format(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}
