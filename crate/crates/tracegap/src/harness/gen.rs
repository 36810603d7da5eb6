//! Seeded instance generators.
//!
//! Every generator is a pure function of its arguments: the same seed gives
//! bitwise-identical output on the same platform, which is what makes fuzz
//! violations replayable from their recorded coordinates. Randomness comes
//! from ChaCha8 streams keyed by the caller's seed; Haar-distributed
//! unitaries use the QR-of-Gaussian construction with the phase fix that
//! makes the R diagonal positive.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::{thin_svd, StiefelFrame};
use crate::error::{Error, Result};
use crate::matrix::{C64, DenseMatrix};
use crate::tol::Tolerances;

/// SplitMix64 mixing step; used to derive independent sub-seeds.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian (independent N(0,1) real and imaginary parts)
/// via Box-Muller.
fn standard_complex<R: Rng>(rng: &mut R) -> C64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
    C64::new(r * c, r * s)
}

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    // Row-major fill order so the stream consumption is layout-independent.
    let mut m = DMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = standard_complex(rng);
        }
    }
    m
}

/// Thin QR with the diagonal phase fix; columns of Q are Haar-distributed
/// for Gaussian input.
fn qr_orthonormalize(g: DMatrix<C64>, tol: &Tolerances, context: &str) -> Result<StiefelFrame> {
    let cols = g.ncols();
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let a = d.norm();
        if a > 0.0 {
            let phase = d / a;
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
    }
    StiefelFrame::new(DenseMatrix::from_na(q, context)?, tol)
}

/// Haar-distributed n x n unitary.
pub fn haar_unitary(n: usize, seed: u64, tol: &Tolerances) -> Result<StiefelFrame> {
    gen_stiefel(n, n, seed, tol)
}

/// Matrix of independent standard complex Gaussians.
pub fn gen_gaussian(rows: usize, cols: usize, seed: u64) -> Result<DenseMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::Config(format!(
            "Gaussian matrix dimensions must be positive, got {rows} x {cols}"
        )));
    }
    let mut rng = rng_from(seed);
    DenseMatrix::from_na(gaussian_matrix(rows, cols, &mut rng), "gen_gaussian")
}

/// Haar-distributed n x k orthonormal frame.
pub fn gen_stiefel(n: usize, k: usize, seed: u64, tol: &Tolerances) -> Result<StiefelFrame> {
    if k == 0 || k > n {
        return Err(Error::Config(format!(
            "frame dimensions must satisfy 1 <= k <= n, got n={n} k={k}"
        )));
    }
    let mut rng = rng_from(seed);
    let g = gaussian_matrix(n, k, &mut rng);
    qr_orthonormalize(g, tol, "gen_stiefel")
}

/// Hermitian matrix with the prescribed eigenvalues attached to the columns
/// of the given unitary: `H = U diag(spectrum) U^H`, exactly Hermitian.
pub fn hermitian_from_unitary(u: &StiefelFrame, spectrum: &[f64]) -> Result<DenseMatrix> {
    let n = u.n();
    if u.k() != n {
        return Err(Error::ShapeError {
            context: "hermitian_from_unitary".into(),
            detail: format!("expected a square unitary, got {} x {}", u.n(), u.k()),
        });
    }
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch {
            context: "hermitian_from_unitary".into(),
            expected: format!("{n} eigenvalues"),
            found: format!("{}", spectrum.len()),
        });
    }
    if spectrum.iter().any(|l| !l.is_finite()) {
        return Err(Error::Config("eigenvalues must be finite".into()));
    }
    let scaled = u.matrix().scale_columns(spectrum)?;
    Ok((&scaled * &u.matrix().adjoint()).hermitian_part())
}

/// Random Hermitian matrix with exactly the given spectrum (eigenvalue i
/// belongs to a Haar-random eigenvector).
pub fn gen_hermitian(n: usize, spectrum: &[f64], seed: u64, tol: &Tolerances) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::Config("matrix order must be positive".into()));
    }
    let u = haar_unitary(n, seed, tol)?;
    hermitian_from_unitary(&u, spectrum)
}

/// `U diag(sigma) V^H` for given frames and singular values.
pub fn compose_svd(u: &StiefelFrame, sigma: &[f64], v: &StiefelFrame) -> Result<DenseMatrix> {
    if sigma.len() != u.k() || v.n() != v.k() || v.k() != u.k() {
        return Err(Error::DimensionMismatch {
            context: "compose_svd".into(),
            expected: format!("{0} singular values and a {0} x {0} unitary", u.k()),
            found: format!("{} values, {} x {}", sigma.len(), v.n(), v.k()),
        });
    }
    if sigma.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(Error::Config(
            "singular values must be finite and nonnegative".into(),
        ));
    }
    Ok(&u.matrix().scale_columns(sigma)? * &v.matrix().adjoint())
}

/// Random tall matrix with exactly the given singular values.
pub fn gen_with_singular_values(
    n: usize,
    k: usize,
    sigma: &[f64],
    seed: u64,
    tol: &Tolerances,
) -> Result<DenseMatrix> {
    if k == 0 || k > n {
        return Err(Error::Config(format!(
            "dimensions must satisfy 1 <= k <= n, got n={n} k={k}"
        )));
    }
    if sigma.len() != k {
        return Err(Error::DimensionMismatch {
            context: "gen_with_singular_values".into(),
            expected: format!("{k} singular values"),
            found: format!("{}", sigma.len()),
        });
    }
    let u = gen_stiefel(n, k, seed, tol)?;
    let v = haar_unitary(k, splitmix64(seed ^ 0x53F1_0A2B_991D_77C3), tol)?;
    compose_svd(&u, sigma, &v)
}

/// Orthonormal directions inside the orthogonal complement of a frame:
/// QR-orthonormalized projections of Gaussian columns.
pub fn complement_directions(
    p: &StiefelFrame,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<StiefelFrame> {
    let n = p.n();
    if count + p.k() > n {
        return Err(Error::AngleBudget {
            requested: count,
            available: n - p.k(),
        });
    }
    if count == 0 {
        return StiefelFrame::new(DenseMatrix::zeros(n, 0), tol);
    }
    let mut rng = rng_from(seed);
    let g = DenseMatrix::from_na(gaussian_matrix(n, count, &mut rng), "complement_directions")?;
    let projected = if p.k() == 0 {
        g
    } else {
        let coeff = &p.matrix().adjoint() * &g;
        &g - &(p.matrix() * &coeff)
    };
    qr_orthonormalize(projected.as_na().clone(), tol, "complement_directions")
}

/// Rotates a frame by prescribed canonical angles: column j of the result
/// is `cos(theta_j) p_j + sin(theta_j) c_j` with the `c_j` random
/// orthonormal directions in the complement of `R(P)`.
///
/// The canonical angles between the input and the output are exactly the
/// given thetas. Each angle must lie in [0, pi/2], and the number of
/// nonzero angles cannot exceed `n - k`.
pub fn rotate_frame(
    p: &StiefelFrame,
    thetas: &[f64],
    seed: u64,
    tol: &Tolerances,
) -> Result<StiefelFrame> {
    let k = p.k();
    let n = p.n();
    if thetas.len() != k {
        return Err(Error::DimensionMismatch {
            context: "rotate_frame".into(),
            expected: format!("{k} angles"),
            found: format!("{}", thetas.len()),
        });
    }
    if thetas
        .iter()
        .any(|t| !t.is_finite() || *t < 0.0 || *t > std::f64::consts::FRAC_PI_2)
    {
        return Err(Error::Config(
            "rotation angles must lie in [0, pi/2]".into(),
        ));
    }
    let active: Vec<usize> = (0..k).filter(|&j| thetas[j] > 0.0).collect();
    if active.len() > n - k {
        return Err(Error::AngleBudget {
            requested: active.len(),
            available: n - k,
        });
    }
    if active.is_empty() {
        return Ok(p.clone());
    }

    let c = complement_directions(p, active.len(), seed, tol)?;
    let mut out = p.matrix().as_na().clone();
    for (slot, &j) in active.iter().enumerate() {
        let (s, cos) = thetas[j].sin_cos();
        for i in 0..n {
            out[(i, j)] = out[(i, j)] * cos + c.matrix().as_na()[(i, slot)] * s;
        }
    }
    StiefelFrame::new(DenseMatrix::from_na(out, "rotate_frame")?, tol)
}

/// A trace-objective maximizer for an arbitrary tall matrix, including
/// rank-deficient ones: with `B = U1 Sigma1 V1^H` restricted to positive
/// singular values, any completion `[U1 | W] V^H` with `W` orthonormal in
/// the complement of `R(U1)` maximizes `Re tr(P^H B)`.
pub fn polar_maximizer_completion(
    b: &DenseMatrix,
    seed: u64,
    tol: &Tolerances,
) -> Result<StiefelFrame> {
    let svd = thin_svd(b, tol)?;
    let sv = svd.singular_values();
    let k = sv.len();
    let rank = sv
        .iter()
        .filter(|&&s| sv[0] > 0.0 && s > tol.rank_tol * sv[0])
        .count();
    if rank == k {
        return StiefelFrame::new(svd.u().matrix() * &svd.v().matrix().adjoint(), tol);
    }
    let u1 = if rank == 0 {
        StiefelFrame::new(DenseMatrix::zeros(b.rows(), 0), tol)?
    } else {
        svd.u().columns(0, rank, tol)?
    };
    let w = complement_directions(&u1, k - rank, seed, tol)?;
    let u_hat = if rank == 0 {
        w
    } else {
        StiefelFrame::new(u1.matrix().hcat(w.matrix())?, tol)?
    };
    StiefelFrame::new(u_hat.matrix() * &svd.v().matrix().adjoint(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angles::canonical_angles;
    use crate::decomp::{hermitian_eig, singular_values};
    use crate::polar::{is_polar_maximizer, trace_objective};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn splitmix_reference_vector() {
        // Known first output of the SplitMix64 reference for state 0.
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_ne!(splitmix64(1), splitmix64(2));
    }

    #[test]
    fn stiefel_frames_are_deterministic_and_orthonormal() {
        let a = gen_stiefel(12, 4, 7, &tol()).unwrap();
        let b = gen_stiefel(12, 4, 7, &tol()).unwrap();
        assert_eq!(a.matrix(), b.matrix(), "same seed, same frame");
        assert!(a.defect() < 1e-13);

        let c = gen_stiefel(12, 4, 8, &tol()).unwrap();
        assert!((a.matrix() - c.matrix()).norm_fro() > 1e-3, "seeds decorrelate");
        assert!(gen_stiefel(3, 4, 0, &tol()).is_err());
        assert!(gen_stiefel(3, 0, 0, &tol()).is_err());
    }

    #[test]
    fn haar_unitary_is_square_and_unitary() {
        let u = haar_unitary(6, 3, &tol()).unwrap();
        assert_eq!(u.n(), 6);
        assert_eq!(u.k(), 6);
        assert!(u.defect() < 1e-13);
    }

    #[test]
    fn hermitian_generator_recovers_its_spectrum() {
        let spectrum = [3.0, 1.5, 1.5, -0.25, -4.0];
        let h = gen_hermitian(5, &spectrum, 11, &tol()).unwrap();
        assert_eq!(h.hermitian_defect(), 0.0);
        let eig = hermitian_eig(&h, &tol()).unwrap();
        for (got, want) in eig.eigenvalues().iter().zip(&spectrum) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn hermitian_generator_pairs_eigenvalues_with_unitary_columns() {
        let spectrum = [2.0, -1.0, 0.5];
        let u = haar_unitary(3, 5, &tol()).unwrap();
        let h = hermitian_from_unitary(&u, &spectrum).unwrap();
        // H u_j = spectrum[j] u_j.
        let hu = &h * u.matrix();
        for (j, lambda) in spectrum.iter().enumerate() {
            for i in 0..3 {
                let diff = hu.get(i, j) - u.matrix().get(i, j) * lambda;
                assert!(diff.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_value_generator_recovers_its_values() {
        let sigma = [2.5, 1.0, 1e-3];
        let b = gen_with_singular_values(9, 3, &sigma, 13, &tol()).unwrap();
        let sv = singular_values(&b);
        for (got, want) in sv.iter().zip(&sigma) {
            assert!((got - want).abs() < 1e-12 * want.max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn rotation_realizes_prescribed_angles_exactly() {
        let p = gen_stiefel(10, 3, 21, &tol()).unwrap();
        let mut thetas = vec![0.9, 0.4, 0.05];
        let rotated = rotate_frame(&p, &thetas, 22, &tol()).unwrap();
        let ang = canonical_angles(&p, &rotated).unwrap();
        thetas.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (got, want) in ang.thetas.iter().zip(&thetas) {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn rotation_handles_zero_angles_and_budget_limits() {
        let p = gen_stiefel(5, 2, 31, &tol()).unwrap();
        let same = rotate_frame(&p, &[0.0, 0.0], 1, &tol()).unwrap();
        assert_eq!(same.matrix(), p.matrix());

        // Only one complement direction exists for k = 2 in n = 3.
        let tight = gen_stiefel(3, 2, 32, &tol()).unwrap();
        assert!(rotate_frame(&tight, &[0.1, 0.0], 1, &tol()).is_ok());
        assert!(matches!(
            rotate_frame(&tight, &[0.1, 0.2], 1, &tol()),
            Err(Error::AngleBudget { .. })
        ));
        assert!(rotate_frame(&tight, &[0.1], 1, &tol()).is_err());
        assert!(rotate_frame(&tight, &[0.1, 2.0], 1, &tol()).is_err());
    }

    #[test]
    fn rotated_tiny_angles_survive() {
        let p = gen_stiefel(8, 2, 41, &tol()).unwrap();
        let thetas = [1e-6, 9.5e-7];
        let rotated = rotate_frame(&p, &thetas, 42, &tol()).unwrap();
        let ang = canonical_angles(&p, &rotated).unwrap();
        assert!((ang.thetas[0] - 1e-6).abs() < 1e-12);
        assert!((ang.thetas[1] - 9.5e-7).abs() < 1e-12);
    }

    #[test]
    fn complement_directions_are_orthogonal_to_the_frame() {
        let p = gen_stiefel(9, 4, 51, &tol()).unwrap();
        let c = complement_directions(&p, 3, 52, &tol()).unwrap();
        assert_eq!(c.k(), 3);
        assert!(c.defect() < 1e-13);
        assert!((&p.matrix().adjoint() * c.matrix()).norm_fro() < 1e-13);
        assert!(matches!(
            complement_directions(&p, 6, 53, &tol()),
            Err(Error::AngleBudget { .. })
        ));
    }

    #[test]
    fn completion_maximizes_for_rank_deficient_matrices() {
        let sigma = [2.0, 1.0, 0.0, 0.0];
        let b = gen_with_singular_values(8, 4, &sigma, 61, &tol()).unwrap();
        let p = polar_maximizer_completion(&b, 62, &tol()).unwrap();
        assert!(is_polar_maximizer(&b, &p, &tol()).unwrap());
        let objective = trace_objective(&b, &p).unwrap();
        assert!((objective - 3.0).abs() < 1e-11);

        // Different completion seeds give different maximizers of the same
        // objective: the maximizer is genuinely non-unique.
        let p2 = polar_maximizer_completion(&b, 63, &tol()).unwrap();
        assert!((p.matrix() - p2.matrix()).norm_fro() > 1e-3);
        assert!(is_polar_maximizer(&b, &p2, &tol()).unwrap());
    }

    #[test]
    fn completion_handles_full_rank_and_zero_matrices() {
        let sigma = [2.0, 0.5];
        let b = gen_with_singular_values(5, 2, &sigma, 71, &tol()).unwrap();
        let p = polar_maximizer_completion(&b, 72, &tol()).unwrap();
        assert!(is_polar_maximizer(&b, &p, &tol()).unwrap());

        let z = DenseMatrix::zeros(4, 2);
        let pz = polar_maximizer_completion(&z, 73, &tol()).unwrap();
        assert_eq!(pz.k(), 2);
        assert!(is_polar_maximizer(&z, &pz, &tol()).unwrap());
    }
}
