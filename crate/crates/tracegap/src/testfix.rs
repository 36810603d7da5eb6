//! Deterministic fixtures for unit tests. A small LCG is enough here and
//! keeps low-level tests independent of the seeded harness generators.

use crate::decomp::{thin_svd, StiefelFrame};
use crate::matrix::{C64, DenseMatrix};
use crate::tol::Tolerances;

/// Stream of pseudo-random values in [-0.5, 0.5).
pub(crate) fn lcg_stream(seed: u64) -> impl FnMut() -> f64 {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    }
}

/// Dense complex matrix with pseudo-random entries.
pub(crate) fn fixture_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut next = lcg_stream(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| C64::new(next(), next())).unwrap()
}

/// Orthonormal frame: the left singular frame of a pseudo-random matrix.
pub(crate) fn fixture_frame(rows: usize, cols: usize, seed: u64) -> StiefelFrame {
    let g = fixture_matrix(rows, cols, seed);
    thin_svd(&g, &Tolerances::default()).unwrap().u().clone()
}
