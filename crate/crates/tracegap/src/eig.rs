//! Certificates for approximate invariant subspaces of Hermitian matrices.
//!
//! For a Hermitian `H` with eigenvalues sorted descending and a frame `P`
//! spanning an approximate dominant k-dimensional eigenspace, the excess
//!
//! ```text
//! eta = (lambda_1 + ... + lambda_k) - Re tr(P^H H P)
//! ```
//!
//! is nonnegative, and with the spectral gap `gap = lambda_k - lambda_{k+1}`
//! the certified two-sided chain is
//!
//! ```text
//! residual_F / (lambda_1 - lambda_n)  <=  ||sin Theta||_F  <=  sqrt(eta / gap)
//! ```
//!
//! where `residual_F = ||H P - P (P^H H P)||_F` and `Theta` collects the
//! canonical angles between `R(P)` and the exact dominant eigenspace. The
//! lower inequality needs no gap and holds against any exactly invariant
//! reference subspace, which is what [`certify_eigenspace_against`] exposes.

use serde::Serialize;

use crate::angles::canonical_angles;
use crate::decomp::{hermitian_eig, validate_hermitian, HermitianEig, StiefelFrame};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::tol::Tolerances;

/// Evaluated eigenspace certificate: the bound ingredients, both distance
/// bounds, and the measured slack of every claimed inequality.
#[derive(Debug, Clone, Serialize)]
pub struct EigCertificate {
    /// Subspace dimension.
    pub k: usize,
    /// Trace excess of the reference frame over the tested frame; >= 0.
    pub eta: f64,
    /// Spectral gap `lambda_k - lambda_{k+1}` (0 in the trivial k = n case).
    pub gap: f64,
    /// Spectral spread `lambda_1 - lambda_n`.
    pub spread: f64,
    /// Upper bound `sqrt(eta / gap)` on `||sin Theta||_F`.
    pub epsilon: f64,
    /// Block residual `||H P - P (P^H H P)||_F`.
    pub residual_f: f64,
    /// Lower bound `residual_f / spread` on `||sin Theta||_F`.
    pub lower_bound: f64,
    /// Measured `||sin Theta||_F` against the reference eigenframe.
    pub sin_theta_f: f64,
    /// `sin_theta_f - lower_bound`; nonnegative when the lower bound holds.
    pub slack_lower: f64,
    /// `epsilon - sin_theta_f`; nonnegative when the upper bound holds.
    pub slack_upper: f64,
    /// True when `epsilon^2 > k`, i.e. the upper bound says nothing a
    /// k-dimensional pair could not already tell you.
    pub vacuous: bool,
    /// True when the upper bound applies: the reference frame is the
    /// dominant eigenspace and the gap is certifiably positive.
    pub upper_applicable: bool,
    /// True when every applicable inequality held to the slack tolerance.
    pub chain_verified: bool,
}

fn check_pair_dims(h: &DenseMatrix, p: &StiefelFrame, context: &str) -> Result<()> {
    if !h.is_square() {
        return Err(Error::ShapeError {
            context: context.into(),
            detail: format!("expected a square matrix, got {} x {}", h.rows(), h.cols()),
        });
    }
    if p.n() != h.rows() {
        return Err(Error::DimensionMismatch {
            context: context.into(),
            expected: format!("frame with {} rows", h.rows()),
            found: format!("{} rows", p.n()),
        });
    }
    if p.k() == 0 {
        return Err(Error::ShapeError {
            context: context.into(),
            detail: "certificates need at least one column".into(),
        });
    }
    Ok(())
}

/// Rayleigh trace objective `Re tr(P^H H P)` of a frame against a
/// Hermitian matrix.
pub fn trace_objective_eig(h: &DenseMatrix, p: &StiefelFrame, tol: &Tolerances) -> Result<f64> {
    check_pair_dims(h, p, "trace_objective_eig")?;
    let hs = validate_hermitian(h, tol)?;
    let hp = &hs * p.matrix();
    Ok((&p.matrix().adjoint() * &hp).trace().re)
}

/// Block residual `||H P - P (P^H H P)||_F`, the gap-free certificate half.
pub fn residual_eig(h: &DenseMatrix, p: &StiefelFrame, tol: &Tolerances) -> Result<f64> {
    check_pair_dims(h, p, "residual_eig")?;
    let hs = validate_hermitian(h, tol)?;
    Ok(residual_from_parts(&hs, p))
}

fn residual_from_parts(hs: &DenseMatrix, p: &StiefelFrame) -> f64 {
    let hp = hs * p.matrix();
    let small = &p.matrix().adjoint() * &hp;
    (&hp - &(p.matrix() * &small)).norm_fro()
}

/// Trace excess `eta = sum of top-k eigenvalues - Re tr(P^H H P)`.
///
/// The excess is nonnegative for every frame (the dominant eigenframe
/// maximizes the trace objective); rounding-scale negatives are clamped to
/// zero and larger violations rejected as evidence of corrupt input.
pub fn eta_eig(h: &DenseMatrix, p: &StiefelFrame, tol: &Tolerances) -> Result<f64> {
    check_pair_dims(h, p, "eta_eig")?;
    let eig = hermitian_eig(h, tol)?;
    let hs = h.hermitian_part();
    eta_from_parts(&hs, &eig, p)
}

fn eta_from_parts(hs: &DenseMatrix, eig: &HermitianEig, p: &StiefelFrame) -> Result<f64> {
    let k = p.k();
    let top_sum: f64 = eig.eigenvalues()[..k].iter().sum();
    let hp = hs * p.matrix();
    let objective = (&p.matrix().adjoint() * &hp).trace().re;
    let raw = top_sum - objective;
    let scale = (k as f64 * eig.norm_2()).max(1.0);
    if raw < -1e-8 * scale {
        return Err(Error::FanViolation { excess: -raw });
    }
    Ok(raw.max(0.0))
}

struct ChainInputs {
    k: usize,
    eta: f64,
    gap: f64,
    spread: f64,
    epsilon: f64,
    residual_f: f64,
    sin_theta_f: f64,
    upper_applicable: bool,
}

fn assemble(ci: ChainInputs, tol: &Tolerances) -> EigCertificate {
    let lower_bound = if ci.spread > 0.0 {
        ci.residual_f / ci.spread
    } else {
        0.0
    };
    let slack_lower = ci.sin_theta_f - lower_bound;
    let slack_upper = if ci.upper_applicable {
        ci.epsilon - ci.sin_theta_f
    } else {
        0.0
    };
    let lower_ok = slack_lower >= -tol.slack_tol * ci.sin_theta_f.max(1.0);
    let upper_ok = !ci.upper_applicable || slack_upper >= -tol.slack_tol * ci.epsilon.max(1.0);
    EigCertificate {
        k: ci.k,
        eta: ci.eta,
        gap: ci.gap,
        spread: ci.spread,
        epsilon: ci.epsilon,
        residual_f: ci.residual_f,
        lower_bound,
        sin_theta_f: ci.sin_theta_f,
        slack_lower,
        slack_upper,
        vacuous: ci.upper_applicable && ci.epsilon * ci.epsilon > ci.k as f64,
        upper_applicable: ci.upper_applicable,
        chain_verified: lower_ok && upper_ok,
    }
}

/// Certifies a frame against the dominant k-dimensional eigenspace of a
/// Hermitian matrix, evaluating the full two-sided chain.
///
/// Requires a certifiably positive gap `lambda_k - lambda_{k+1}`; refusing
/// to certify across a vanishing gap is the honest answer because the
/// dominant eigenspace is not even well defined there. The k = n case is
/// trivially certified (the subspace is the whole space).
pub fn certify_eigenspace(
    h: &DenseMatrix,
    p: &StiefelFrame,
    tol: &Tolerances,
) -> Result<EigCertificate> {
    check_pair_dims(h, p, "certify_eigenspace")?;
    let eig = hermitian_eig(h, tol)?;
    let hs = h.hermitian_part();
    let k = p.k();
    let n = p.n();
    let residual_f = residual_from_parts(&hs, p);

    if k == n {
        return Ok(assemble(
            ChainInputs {
                k,
                eta: 0.0,
                gap: 0.0,
                spread: eig.spread(),
                epsilon: 0.0,
                residual_f,
                sin_theta_f: 0.0,
                upper_applicable: true,
            },
            tol,
        ));
    }

    let gap = eig.gap(k).expect("0 < k < n has a gap index");
    let threshold = tol.gap_tol * eig.norm_2().max(1.0);
    if gap <= threshold {
        return Err(Error::ZeroGap {
            gap,
            split: k,
            threshold,
        });
    }

    let eta = eta_from_parts(&hs, &eig, p)?;
    let epsilon = (eta / gap).sqrt();
    let p_star = eig.top_frame(k, tol)?;
    let sin_theta_f = canonical_angles(p, &p_star)?.dist_f;

    Ok(assemble(
        ChainInputs {
            k,
            eta,
            gap,
            spread: eig.spread(),
            epsilon,
            residual_f,
            sin_theta_f,
            upper_applicable: true,
        },
        tol,
    ))
}

/// Certifies a frame against a caller-supplied invariant subspace.
///
/// The reference frame must be exactly invariant (`||H P* - P* (P*^H H P*)||_F
/// <= inv_tol * ||H||_F`); the residual lower bound is evaluated against it
/// unconditionally. The gap upper bound is only claimed (`upper_applicable`)
/// when the reference coincides with the dominant eigenspace and the gap is
/// certifiably positive; unlike [`certify_eigenspace`] a vanishing gap is
/// not an error here, it just withholds the upper bound.
pub fn certify_eigenspace_against(
    h: &DenseMatrix,
    p: &StiefelFrame,
    p_star: &StiefelFrame,
    tol: &Tolerances,
) -> Result<EigCertificate> {
    check_pair_dims(h, p, "certify_eigenspace_against")?;
    check_pair_dims(h, p_star, "certify_eigenspace_against")?;
    if p.k() != p_star.k() {
        return Err(Error::DimensionMismatch {
            context: "certify_eigenspace_against".into(),
            expected: format!("reference frame with {} columns", p.k()),
            found: format!("{} columns", p_star.k()),
        });
    }
    let eig = hermitian_eig(h, tol)?;
    let hs = h.hermitian_part();
    let k = p.k();
    let n = p.n();

    let inv_residual = residual_from_parts(&hs, p_star);
    let inv_threshold = tol.inv_tol * hs.norm_fro();
    if inv_residual > inv_threshold {
        return Err(Error::NotInvariant {
            residual: inv_residual,
            threshold: inv_threshold,
        });
    }

    let residual_f = residual_from_parts(&hs, p);
    let sin_theta_f = canonical_angles(p, p_star)?.dist_f;
    let eta = eta_from_parts(&hs, &eig, p)?;

    let mut gap = 0.0;
    let mut epsilon = 0.0;
    let mut upper_applicable = k == n;
    if k < n {
        gap = eig.gap(k).expect("0 < k < n has a gap index");
        let threshold = tol.gap_tol * eig.norm_2().max(1.0);
        if gap > threshold {
            let top = eig.top_frame(k, tol)?;
            let coincides = canonical_angles(p_star, &top)?.dist_f <= tol.range_tol;
            if coincides {
                epsilon = (eta / gap).sqrt();
                upper_applicable = true;
            }
        }
    }

    Ok(assemble(
        ChainInputs {
            k,
            eta,
            gap,
            spread: eig.spread(),
            epsilon,
            residual_f,
            sin_theta_f,
            upper_applicable,
        },
        tol,
    ))
}
