//! Certificates for approximate orthonormal polar factors.
//!
//! For a tall full-column-rank `B` with polar decomposition `B = P* Lambda`
//! and a candidate frame `P`, the trace excess
//!
//! ```text
//! eta = ||B||_tr - Re tr(P^H B)
//! ```
//!
//! is nonnegative because `P*` maximizes the trace objective over all
//! frames, with maximum `||B||_tr` (the trace-maximization lemma, a
//! consequence of von Neumann's trace inequality). The certified chain is
//!
//! ```text
//! residual_F / ||B||_2  <=  ||sin Theta||_F  <=  sqrt(2 eta / sigma_min(B))
//! ```
//!
//! with `residual_F = ||B - P (P^H B)||_F` and `Theta` the canonical angles
//! between `R(P)` and `R(P*)`; the same excess controls the half-angle
//! aggregate, `2 ||sin(Theta/2)||_F <= epsilon`. Beyond subspace distance,
//! the certificate bounds the frame distance `||P - P*||_F` itself when
//! `P^H B` is positive definite (case b) or when the ranges coincide
//! (case c), and after optimal unitary alignment `Q` of `P` the sharper
//! excess `eta' = ||B||_tr - ||P^H B||_tr` bounds `||P Q - P*||_F`.

use serde::Serialize;

use crate::angles::canonical_angles;
use crate::decomp::{hermitian_eig, singular_values, thin_svd, StiefelFrame};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::tol::Tolerances;

/// Evaluated polar certificate: bound ingredients, every claimed bound, and
/// the measured slack of each inequality.
#[derive(Debug, Clone, Serialize)]
pub struct PolarCertificate {
    /// Number of columns of `B` and `P`.
    pub k: usize,
    /// Trace norm `||B||_tr`, the maximum of the trace objective.
    pub trace_norm: f64,
    /// Spectral norm `||B||_2`.
    pub norm_2: f64,
    /// Smallest singular value of `B`; positive, or the certificate refuses.
    pub sigma_min: f64,
    /// Smallest singular value of `M = P^H B`.
    pub sigma_min_m: f64,
    /// Trace excess `||B||_tr - Re tr(P^H B)`; >= 0.
    pub eta: f64,
    /// Alignment-free excess `||B||_tr - ||P^H B||_tr`, clamped to [0, eta]
    /// (the unclamped value equals eta minus the exactly-nonnegative
    /// von Neumann defect of M, so the clamp only removes rounding noise).
    pub eta_variant: f64,
    /// Upper bound `sqrt(2 eta / sigma_min)` on `||sin Theta||_F`.
    pub epsilon: f64,
    /// Sharper aligned bound `sqrt(2 eta_variant / sigma_min)`.
    pub epsilon_variant: f64,
    /// Residual `||B - P (P^H B)||_F = ||P_perp^H B||_F`.
    pub residual_f: f64,
    /// Lower bound `residual_f / ||B||_2` on `||sin Theta||_F`.
    pub lower_bound: f64,
    /// Measured `||sin Theta||_F` between `R(P)` and `R(P*)`.
    pub sin_theta_f: f64,
    /// Measured `||sin(Theta/2)||_F`; the chain claims `2 * this <= epsilon`.
    pub half_angle_f: f64,
    /// Frame distance `||P - P*||_F`.
    pub frob_dist: f64,
    /// Frame distance after optimal alignment, `||P Q - P*||_F`; absent when
    /// `P^H B` is singular and no alignment factor exists.
    pub aligned_frob_dist: Option<f64>,
    /// True when `M = P^H B` is Hermitian positive definite to tolerance.
    pub case_b_applicable: bool,
    /// Case (b) bound `(1 + 2 ||B||_2 / (sigma_min + sigma_min_m)) * epsilon`
    /// on `frob_dist`; present exactly when case (b) applies.
    pub case_b_bound: Option<f64>,
    /// True when `R(P) = R(P*)` to tolerance; then `frob_dist <= epsilon`.
    pub case_c_applicable: bool,
    /// Corollary bound `(1 + 2 ||B||_2 / (sigma_min + sigma_min_m)) *
    /// epsilon_variant` on `aligned_frob_dist`; present when Q exists.
    pub corollary_bound: Option<f64>,
    /// `sin_theta_f - lower_bound`.
    pub slack_lower: f64,
    /// `epsilon - sin_theta_f`.
    pub slack_upper: f64,
    /// `epsilon - 2 * half_angle_f`.
    pub slack_half: f64,
    /// True when every applicable inequality held to the slack tolerance.
    pub chain_verified: bool,
}

fn check_tall(b: &DenseMatrix, context: &str) -> Result<()> {
    if b.cols() == 0 || b.rows() < b.cols() {
        return Err(Error::ShapeError {
            context: context.into(),
            detail: format!(
                "expected a tall matrix with at least one column, got {} x {}",
                b.rows(),
                b.cols()
            ),
        });
    }
    Ok(())
}

fn check_same_shape(b: &DenseMatrix, p: &StiefelFrame, context: &str) -> Result<()> {
    if p.n() != b.rows() || p.k() != b.cols() {
        return Err(Error::DimensionMismatch {
            context: context.into(),
            expected: format!("frame of shape {} x {}", b.rows(), b.cols()),
            found: format!("{} x {}", p.n(), p.k()),
        });
    }
    Ok(())
}

/// Trace objective `Re tr(P^H B)` of a frame against a tall matrix.
pub fn trace_objective(b: &DenseMatrix, p: &StiefelFrame) -> Result<f64> {
    check_tall(b, "trace_objective")?;
    check_same_shape(b, p, "trace_objective")?;
    Ok((&p.matrix().adjoint() * b).trace().re)
}

/// Residual `||B - P (P^H B)||_F`, the projection of `B` onto the
/// complement of `R(P)`; equals `||P_perp^H B||_F`.
pub fn residual_polar(b: &DenseMatrix, p: &StiefelFrame) -> Result<f64> {
    check_tall(b, "residual_polar")?;
    check_same_shape(b, p, "residual_polar")?;
    let m = &p.matrix().adjoint() * b;
    Ok((b - &(p.matrix() * &m)).norm_fro())
}

/// Von Neumann trace pairing: returns `(|tr(B^H C)|, sum_i sigma_i(B)
/// sigma_i(C))`; the first never exceeds the second.
pub fn von_neumann_check(b: &DenseMatrix, c: &DenseMatrix) -> Result<(f64, f64)> {
    if b.rows() != c.rows() || b.cols() != c.cols() {
        return Err(Error::DimensionMismatch {
            context: "von_neumann_check".into(),
            expected: format!("{} x {}", b.rows(), b.cols()),
            found: format!("{} x {}", c.rows(), c.cols()),
        });
    }
    let lhs = (&b.adjoint() * c).trace().norm();
    let sb = singular_values(b);
    let sc = singular_values(c);
    let rhs = sb.iter().zip(&sc).map(|(x, y)| x * y).sum();
    Ok((lhs, rhs))
}

/// Tests whether a frame maximizes the trace objective against `B`, and
/// therefore is an orthonormal polar factor of `B`.
///
/// A frame passes when its objective reaches `||B||_tr` to `eq_tol`; the
/// lemma then guarantees `M = P^H B` is Hermitian positive semidefinite
/// with `B = P M`, which is re-checked and reported as an internal error if
/// violated (it cannot fail for honest inputs).
pub fn is_polar_maximizer(b: &DenseMatrix, p: &StiefelFrame, tol: &Tolerances) -> Result<bool> {
    check_tall(b, "is_polar_maximizer")?;
    check_same_shape(b, p, "is_polar_maximizer")?;
    let trace_norm = b.trace_norm();
    let objective = (&p.matrix().adjoint() * b).trace().re;
    if trace_norm - objective > tol.eq_tol * trace_norm.max(1.0) {
        return Ok(false);
    }

    let m = &p.matrix().adjoint() * b;
    let sigma_1 = m.norm_2();
    let scale = sigma_1.max(1.0);
    let defect = m.hermitian_defect();
    if defect > tol.char_tol * scale {
        return Err(Error::Internal(format!(
            "objective is maximal but M has Hermitian defect {defect:.3e}"
        )));
    }
    let lambda_min = hermitian_eig(&m.hermitian_part(), tol)?
        .eigenvalues()
        .last()
        .copied()
        .expect("k >= 1");
    if lambda_min < -tol.char_tol * scale {
        return Err(Error::Internal(format!(
            "objective is maximal but M has eigenvalue {lambda_min:.3e}"
        )));
    }
    let recon = (b - &(p.matrix() * &m)).norm_fro();
    if recon > tol.char_tol * b.norm_fro().max(1.0) {
        return Err(Error::Internal(format!(
            "objective is maximal but ||B - P M||_F = {recon:.3e}"
        )));
    }
    Ok(true)
}

/// Optimal unitary alignment of `P` toward the polar factor of `B`: the
/// orthonormal polar factor `Q` of `M = P^H B`, a k x k unitary.
///
/// Errors with [`Error::RankDeficient`] when `M` is singular, in which case
/// no canonical alignment exists.
pub fn align_factor(b: &DenseMatrix, p: &StiefelFrame, tol: &Tolerances) -> Result<StiefelFrame> {
    check_tall(b, "align_factor")?;
    check_same_shape(b, p, "align_factor")?;
    let m = &p.matrix().adjoint() * b;
    let svd = thin_svd(&m, tol)?;
    let sv = svd.singular_values();
    let k = sv.len();
    if sv[0] <= 0.0 || sv[k - 1] <= tol.rank_tol * sv[0] {
        return Err(Error::RankDeficient {
            context: "align_factor".into(),
            sigma_min: sv[k - 1],
            sigma_max: sv[0],
        });
    }
    StiefelFrame::new(svd.u().matrix() * &svd.v().matrix().adjoint(), tol)
}

fn holds(lhs: f64, rhs: f64, slack_tol: f64) -> bool {
    lhs <= rhs + slack_tol * rhs.abs().max(1.0)
}

/// Certifies a frame against the orthonormal polar factor of a tall
/// full-column-rank matrix, evaluating the full chain of bounds.
pub fn certify_polar(
    b: &DenseMatrix,
    p: &StiefelFrame,
    tol: &Tolerances,
) -> Result<PolarCertificate> {
    check_tall(b, "certify_polar")?;
    check_same_shape(b, p, "certify_polar")?;
    let k = b.cols();

    let svd_b = thin_svd(b, tol)?;
    let sigma = svd_b.singular_values();
    let norm_2 = sigma[0];
    let sigma_min = sigma[k - 1];
    if norm_2 <= 0.0 || sigma_min <= tol.rank_tol * norm_2 {
        return Err(Error::RankDeficient {
            context: "certify_polar".into(),
            sigma_min,
            sigma_max: norm_2,
        });
    }
    let trace_norm: f64 = sigma.iter().sum();
    let p_star = StiefelFrame::new(svd_b.u().matrix() * &svd_b.v().matrix().adjoint(), tol)?;

    let m = &p.matrix().adjoint() * b;
    let objective = m.trace().re;
    let eta_raw = trace_norm - objective;
    if eta_raw < -1e-8 * trace_norm.max(1.0) {
        return Err(Error::FanViolation { excess: -eta_raw });
    }
    let eta = eta_raw.max(0.0);
    let epsilon = (2.0 * eta / sigma_min).sqrt();

    let svd_m = thin_svd(&m, tol)?;
    let sv_m = svd_m.singular_values();
    let sigma_min_m = sv_m[k - 1];
    let trace_norm_m: f64 = sv_m.iter().sum();
    let eta_variant_raw = trace_norm - trace_norm_m;
    if eta_variant_raw > eta + 1e-8 * eta.max(1.0) {
        return Err(Error::Internal(format!(
            "aligned excess {eta_variant_raw:.6e} exceeds the plain excess {eta:.6e}"
        )));
    }
    let eta_variant = eta_variant_raw.clamp(0.0, eta);
    let epsilon_variant = (2.0 * eta_variant / sigma_min).sqrt();

    let ang = canonical_angles(p, &p_star)?;
    let sin_theta_f = ang.dist_f;
    let half_angle_f = ang.half_angle_dist_f;
    let residual_f = (b - &(p.matrix() * &m)).norm_fro();
    let lower_bound = residual_f / norm_2;
    let frob_dist = (p.matrix() - p_star.matrix()).norm_fro();

    let bound_factor = 1.0 + 2.0 * norm_2 / (sigma_min + sigma_min_m);

    // Case (b): M Hermitian positive definite to tolerance.
    let m_scale = sv_m[0].max(1.0);
    let case_b_applicable = m.hermitian_defect() <= tol.char_tol * m_scale && {
        let lambda_min = hermitian_eig(&m.hermitian_part(), tol)?
            .eigenvalues()
            .last()
            .copied()
            .expect("k >= 1");
        lambda_min > tol.char_tol * sv_m[0]
    };
    let case_b_bound = case_b_applicable.then_some(bound_factor * epsilon);

    // Case (c): the subspaces coincide, only the basis differs.
    let case_c_applicable = sin_theta_f <= tol.range_tol;

    // Corollary: align P by the polar factor Q of M when M is invertible.
    let m_full_rank = sv_m[0] > 0.0 && sigma_min_m > tol.rank_tol * sv_m[0];
    let (aligned_frob_dist, corollary_bound) = if m_full_rank {
        let q = StiefelFrame::new(svd_m.u().matrix() * &svd_m.v().matrix().adjoint(), tol)?;
        let aligned = p.matrix() * q.matrix();
        (
            Some((&aligned - p_star.matrix()).norm_fro()),
            Some(bound_factor * epsilon_variant),
        )
    } else {
        (None, None)
    };

    let slack_lower = sin_theta_f - lower_bound;
    let slack_upper = epsilon - sin_theta_f;
    let slack_half = epsilon - 2.0 * half_angle_f;

    let st = tol.slack_tol;
    let mut chain_verified = holds(lower_bound, sin_theta_f, st)
        && holds(sin_theta_f, epsilon, st)
        && holds(2.0 * half_angle_f, epsilon, st)
        && holds(eta_variant, eta, st)
        && holds(epsilon_variant, epsilon, st);
    if let Some(bound) = case_b_bound {
        chain_verified = chain_verified && holds(frob_dist, bound, st);
    }
    if case_c_applicable {
        chain_verified = chain_verified && holds(frob_dist, epsilon, st);
    }
    if let (Some(dist), Some(bound)) = (aligned_frob_dist, corollary_bound) {
        chain_verified = chain_verified && holds(dist, bound, st);
    }

    Ok(PolarCertificate {
        k,
        trace_norm,
        norm_2,
        sigma_min,
        sigma_min_m,
        eta,
        eta_variant,
        epsilon,
        epsilon_variant,
        residual_f,
        lower_bound,
        sin_theta_f,
        half_angle_f,
        frob_dist,
        aligned_frob_dist,
        case_b_applicable,
        case_b_bound,
        case_c_applicable,
        corollary_bound,
        slack_lower,
        slack_upper,
        slack_half,
        chain_verified,
    })
}
