//! Trace-gap certificates for dense complex subspace problems.
//!
//! Given a Hermitian matrix and an approximate dominant eigenspace, or a
//! tall matrix and an approximate orthonormal polar factor, this crate
//! computes two cheap trace quantities and turns them into rigorous
//! two-sided bounds on the canonical-angle distance to the exact object.
//! Certificates are the primary product: every bound is evaluated on the
//! instance at hand together with its measured slack, so a consumer can
//! check the inequalities rather than trust the solver.
//!
//! The crate is organized bottom-up:
//!
//! * [`matrix`]: dense complex matrices, norms, and a text file format,
//! * [`decomp`]: validated frames, Hermitian eigendecomposition, thin SVD,
//!   polar decomposition, orthonormal complements,
//! * [`angles`]: canonical angles between equal-dimension subspaces and the
//!   distances derived from them,
//! * [`eig`]: certificates for approximate dominant (and general invariant)
//!   eigenspaces of Hermitian matrices,
//! * [`polar`]: certificates for approximate orthonormal polar factors,
//!   the trace-maximization lemma, and the alignment corollary,
//! * [`harness`]: seeded generators and a fuzz campaign that replays every
//!   certified inequality over random instances,
//! * [`cli`]: the command-line front end with its JSON report envelope.
//!
//! The runnable `examples/` directory demonstrates each capability.

pub mod error;
pub mod matrix;
pub mod tol;

pub mod angles;
pub mod cli;
pub mod decomp;
pub mod eig;
pub mod harness;
pub mod polar;

#[cfg(test)]
pub(crate) mod testfix;

pub use error::{Error, Result};
pub use matrix::{C64, DenseMatrix};
pub use tol::Tolerances;
