//! Orthonormal frames and the dense decompositions built on them.
//!
//! Everything here is a validated wrapper over a mature dense solver. The
//! contracts the rest of the crate relies on:
//!
//! * frames certify `||P^H P - I||_F` at construction time,
//! * eigenvalues and singular values come back sorted descending,
//! * decompositions reconstruct their input to `decomp_tol` relative error.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{C64, DenseMatrix};
use crate::tol::Tolerances;

// Eigen and singular value decompositions run on the faer backend; the
// nalgebra one reconstructs complex SVDs only to ~1e-8 and its Hermitian
// solver can fail to converge quietly, both far outside the tolerances the
// certificates are audited at. Householder QR (used for complements) has no
// such defect and stays on nalgebra.

fn to_faer(m: &DenseMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

/// Matrix with orthonormal columns, validated at construction.
///
/// `k = 0` frames are legal; they arise as complements of full frames.
#[derive(Debug, Clone)]
pub struct StiefelFrame {
    matrix: DenseMatrix,
    defect: f64,
}

impl StiefelFrame {
    /// Validates `||P^H P - I||_F <= frame_tol` and wraps the matrix.
    pub fn new(matrix: DenseMatrix, tol: &Tolerances) -> Result<Self> {
        if matrix.cols() > matrix.rows() {
            return Err(Error::ShapeError {
                context: "StiefelFrame::new".into(),
                detail: format!(
                    "a frame needs at least as many rows as columns, got {} x {}",
                    matrix.rows(),
                    matrix.cols()
                ),
            });
        }
        let k = matrix.cols();
        let gram = &matrix.adjoint() * &matrix;
        let mut defect_sq = 0.0;
        for i in 0..k {
            for j in 0..k {
                let expected = if i == j { 1.0 } else { 0.0 };
                let d = gram.get(i, j) - C64::new(expected, 0.0);
                defect_sq += d.norm_sqr();
            }
        }
        let defect = defect_sq.sqrt();
        if defect > tol.frame_tol {
            return Err(Error::NotOrthonormal {
                defect,
                tol: tol.frame_tol,
            });
        }
        Ok(Self { matrix, defect })
    }

    /// Ambient dimension (rows).
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of columns (subspace dimension).
    pub fn k(&self) -> usize {
        self.matrix.cols()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// Consumes the frame, returning the underlying matrix.
    pub fn into_matrix(self) -> DenseMatrix {
        self.matrix
    }

    /// Measured orthonormality defect `||P^H P - I||_F`.
    pub fn defect(&self) -> f64 {
        self.defect
    }

    /// Sub-frame of columns [start, start + count); columns of an
    /// orthonormal set are orthonormal, but the defect is re-measured.
    pub fn columns(&self, start: usize, count: usize, tol: &Tolerances) -> Result<Self> {
        Self::new(self.matrix.column_block(start, count)?, tol)
    }
}

fn na_to_frame(m: DMatrix<C64>, tol: &Tolerances, context: &str) -> Result<StiefelFrame> {
    StiefelFrame::new(DenseMatrix::from_na(m, context)?, tol)
}

/// Full Hermitian eigendecomposition with eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    eigenvalues: Vec<f64>,
    vectors: StiefelFrame,
}

impl HermitianEig {
    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary frame of eigenvectors, column i pairing with eigenvalue i.
    pub fn vectors(&self) -> &StiefelFrame {
        &self.vectors
    }

    /// Spectral norm `max(|lambda_1|, |lambda_n|)`.
    pub fn norm_2(&self) -> f64 {
        let n = self.eigenvalues.len();
        self.eigenvalues[0].abs().max(self.eigenvalues[n - 1].abs())
    }

    /// Spectral spread `lambda_1 - lambda_n` (zero for scalar multiples of I).
    pub fn spread(&self) -> f64 {
        let n = self.eigenvalues.len();
        self.eigenvalues[0] - self.eigenvalues[n - 1]
    }

    /// Gap `lambda_k - lambda_{k+1}` below the leading block of size k.
    pub fn gap(&self, k: usize) -> Option<f64> {
        if k == 0 || k >= self.eigenvalues.len() {
            return None;
        }
        Some(self.eigenvalues[k - 1] - self.eigenvalues[k])
    }

    /// Frame of the k leading eigenvectors.
    pub fn top_frame(&self, k: usize, tol: &Tolerances) -> Result<StiefelFrame> {
        self.vectors.columns(0, k, tol)
    }
}

/// Validates that `h` is square and Hermitian to `hermitian_tol`, returning
/// its exactly-Hermitian part.
pub fn validate_hermitian(h: &DenseMatrix, tol: &Tolerances) -> Result<DenseMatrix> {
    if !h.is_square() {
        return Err(Error::ShapeError {
            context: "validate_hermitian".into(),
            detail: format!("expected a square matrix, got {} x {}", h.rows(), h.cols()),
        });
    }
    let defect = h.hermitian_defect();
    let scale = h.norm_fro();
    if defect > tol.hermitian_tol * scale {
        return Err(Error::NotHermitian {
            defect,
            tol: tol.hermitian_tol,
        });
    }
    Ok(h.hermitian_part())
}

/// Full eigendecomposition of a Hermitian matrix, eigenvalues descending.
pub fn hermitian_eig(h: &DenseMatrix, tol: &Tolerances) -> Result<HermitianEig> {
    let hs = validate_hermitian(h, tol)?;
    let n = hs.rows();
    let eig = to_faer(&hs)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Internal(format!("eigendecomposition did not converge: {e:?}")))?;

    // The backend returns eigenpairs ascending; sort descending and permute
    // the eigenvector columns to match.
    let raw: Vec<f64> = (0..n).map(|i| eig.S().column_vector()[i].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| raw[b].partial_cmp(&raw[a]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, dst)] = eig.U()[(i, src)];
        }
    }

    let vectors = na_to_frame(vectors, tol, "hermitian_eig vectors")?;
    Ok(HermitianEig {
        eigenvalues,
        vectors,
    })
}

/// Thin singular value decomposition `B = U diag(sigma) V^H` of a tall
/// matrix, singular values descending.
#[derive(Debug, Clone)]
pub struct ThinSVD {
    u: StiefelFrame,
    singular_values: Vec<f64>,
    v: StiefelFrame,
}

impl ThinSVD {
    /// Left singular frame, n x k.
    pub fn u(&self) -> &StiefelFrame {
        &self.u
    }

    /// Singular values, descending, length k.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Right singular frame V (not V^H), k x k unitary.
    pub fn v(&self) -> &StiefelFrame {
        &self.v
    }

    /// Rebuilds `U diag(sigma) V^H`.
    pub fn reconstruct(&self) -> Result<DenseMatrix> {
        let scaled = self.u.matrix().scale_columns(&self.singular_values)?;
        Ok(&scaled * &self.v.matrix().adjoint())
    }
}

/// Thin SVD of a tall (rows >= cols >= 1) matrix.
pub fn thin_svd(b: &DenseMatrix, tol: &Tolerances) -> Result<ThinSVD> {
    if b.cols() == 0 || b.rows() < b.cols() {
        return Err(Error::ShapeError {
            context: "thin_svd".into(),
            detail: format!(
                "expected a tall matrix with at least one column, got {} x {}",
                b.rows(),
                b.cols()
            ),
        });
    }
    let svd = to_faer(b)
        .thin_svd()
        .map_err(|e| Error::Internal(format!("svd did not converge: {e:?}")))?;

    // Descending is the backend's order already; sort defensively anyway.
    let k = b.cols();
    let raw: Vec<f64> = (0..k).map(|i| svd.S().column_vector()[i].re).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| raw[b].partial_cmp(&raw[a]).unwrap());
    let singular_values: Vec<f64> = order.iter().map(|&i| raw[i].max(0.0)).collect();
    let mut u_sorted = DMatrix::<C64>::zeros(b.rows(), k);
    let mut v_sorted = DMatrix::<C64>::zeros(k, k);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..b.rows() {
            u_sorted[(i, dst)] = svd.U()[(i, src)];
        }
        for i in 0..k {
            v_sorted[(i, dst)] = svd.V()[(i, src)];
        }
    }

    let out = ThinSVD {
        u: na_to_frame(u_sorted, tol, "thin_svd u")?,
        singular_values,
        v: na_to_frame(v_sorted, tol, "thin_svd v")?,
    };

    // Reconstruction gate, scaled by the matrix size: the backend's error
    // on degenerate spectra grows with the dimensions, and a genuine
    // decomposition failure overshoots any such threshold by orders of
    // magnitude.
    let recon_err = (&out.reconstruct()? - b).norm_fro();
    let scale = b.norm_fro().max(1.0) * ((b.rows() * b.cols()) as f64).sqrt();
    if recon_err > tol.decomp_tol * scale {
        return Err(Error::Internal(format!(
            "svd reconstruction error {recon_err:.3e} exceeds {:.3e}",
            tol.decomp_tol * scale
        )));
    }
    Ok(out)
}

/// Polar decomposition `B = P Lambda` with `P` orthonormal (n x k) and
/// `Lambda` Hermitian positive semidefinite (k x k).
#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    orthonormal: StiefelFrame,
    hermitian: DenseMatrix,
    unique: bool,
}

impl PolarDecomposition {
    /// The orthonormal polar factor `P = U V^H`.
    pub fn orthonormal(&self) -> &StiefelFrame {
        &self.orthonormal
    }

    /// The Hermitian PSD factor `Lambda = V diag(sigma) V^H`.
    pub fn hermitian(&self) -> &DenseMatrix {
        &self.hermitian
    }

    /// True when B had full column rank, which makes P unique.
    pub fn unique(&self) -> bool {
        self.unique
    }
}

/// Polar decomposition through the thin SVD. Succeeds for any tall input;
/// rank deficiency only clears the uniqueness flag.
pub fn polar_decompose(b: &DenseMatrix, tol: &Tolerances) -> Result<PolarDecomposition> {
    let svd = thin_svd(b, tol)?;
    let p = svd.u().matrix() * &svd.v().matrix().adjoint();
    let scaled = svd.v().matrix().scale_columns(svd.singular_values())?;
    let lambda_raw = &scaled * &svd.v().matrix().adjoint();
    // Pin Lambda to exact Hermitian symmetry; rounding is the only deviation.
    let hermitian = lambda_raw.hermitian_part();
    let sigma = svd.singular_values();
    let unique = sigma[sigma.len() - 1] > tol.rank_tol * sigma[0];
    Ok(PolarDecomposition {
        orthonormal: StiefelFrame::new(p, tol)?,
        hermitian,
        unique,
    })
}

/// Orthonormal basis of the orthogonal complement of `R(P)`, as the trailing
/// `n - k` columns of the unitary factor of a QR of `[P | I]`.
pub fn orthonormal_complement(p: &StiefelFrame, tol: &Tolerances) -> StiefelFrame {
    let n = p.n();
    let k = p.k();
    if k == 0 {
        return StiefelFrame::new(DenseMatrix::identity(n), tol)
            .expect("identity frame is orthonormal");
    }
    let wide = p
        .matrix()
        .hcat(&DenseMatrix::identity(n))
        .expect("hcat of equal-row matrices");
    let q = wide.as_na().clone().qr().q();
    // Q is n x n; its leading k columns span R(P) because P has full column
    // rank, so the trailing n - k columns span the complement.
    let tail = q.columns(k, n - k).into_owned();
    na_to_frame(tail, tol, "orthonormal_complement").expect("householder columns are orthonormal")
}

/// Singular values of a matrix of any shape, sorted descending.
pub fn singular_values(a: &DenseMatrix) -> Vec<f64> {
    if a.cols() == 0 {
        return Vec::new();
    }
    let mut sv = to_faer(a)
        .singular_values()
        .expect("singular values of a finite matrix converge");
    for s in sv.iter_mut() {
        *s = s.max(0.0);
    }
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

impl DenseMatrix {
    /// Spectral norm: the largest singular value.
    pub fn norm_2(&self) -> f64 {
        singular_values(self).first().copied().unwrap_or(0.0)
    }

    /// Trace (nuclear) norm: the sum of singular values.
    pub fn trace_norm(&self) -> f64 {
        singular_values(self).iter().sum()
    }
}
