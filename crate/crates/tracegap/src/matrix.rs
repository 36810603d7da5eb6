//! Dense complex matrices, elementwise norms, and the text file format.
//!
//! The matrix type is a thin validated wrapper over a column-major dense
//! store. Entries are always finite; constructors reject NaN and infinity
//! so downstream decompositions never have to re-check.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};

/// Complex double-precision scalar used throughout the crate.
pub type C64 = Complex<f64>;

/// Dense matrix over [`C64`] with at least one row.
///
/// Zero-column matrices are legal (the orthonormal complement of a full
/// frame is n x 0); zero-row matrices are not.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    inner: DMatrix<C64>,
}

fn check_finite(m: &DMatrix<C64>, context: &str) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    context: context.to_owned(),
                    row: i,
                    col: j,
                });
            }
        }
    }
    Ok(())
}

impl DenseMatrix {
    /// Builds a matrix from row-major complex entries.
    pub fn from_complex_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 {
            return Err(Error::ShapeError {
                context: "from_complex_row_major".into(),
                detail: "matrix must have at least one row".into(),
            });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "from_complex_row_major".into(),
                expected: format!("{} entries for {rows} x {cols}", rows * cols),
                found: format!("{}", entries.len()),
            });
        }
        let inner = DMatrix::from_row_slice(rows, cols, entries);
        check_finite(&inner, "from_complex_row_major")?;
        Ok(Self { inner })
    }

    /// Builds a matrix from row-major real entries (imaginary parts zero).
    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_complex_row_major(rows, cols, &complex)
    }

    /// Builds a matrix entry by entry from a closure over (row, col).
    pub fn from_fn<F: FnMut(usize, usize) -> C64>(rows: usize, cols: usize, mut f: F) -> Result<Self> {
        if rows == 0 {
            return Err(Error::ShapeError {
                context: "from_fn".into(),
                detail: "matrix must have at least one row".into(),
            });
        }
        let inner = DMatrix::from_fn(rows, cols, &mut f);
        check_finite(&inner, "from_fn")?;
        Ok(Self { inner })
    }

    /// The rows x cols zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0, "matrix must have at least one row");
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    /// The n x n identity.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "identity order must be positive");
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Square diagonal matrix from real diagonal entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub(crate) fn from_na(inner: DMatrix<C64>, context: &str) -> Result<Self> {
        if inner.nrows() == 0 {
            return Err(Error::ShapeError {
                context: context.to_owned(),
                detail: "matrix must have at least one row".into(),
            });
        }
        check_finite(&inner, context)?;
        Ok(Self { inner })
    }

    pub(crate) fn as_na(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Entry at (row, col); panics out of range.
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.inner[(row, col)]
    }

    /// All entries in row-major order.
    pub fn entries_row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            inner: self.inner.adjoint(),
        }
    }

    /// Sum of diagonal entries; requires a square matrix.
    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        let mut t = C64::new(0.0, 0.0);
        for i in 0..self.rows() {
            t += self.inner[(i, i)];
        }
        t
    }

    /// Frobenius norm: square root of the sum of squared entry moduli.
    pub fn norm_fro(&self) -> f64 {
        self.inner.norm()
    }

    /// Multiplies every entry by a real scalar.
    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(C64::new(factor, 0.0))
    }

    /// Multiplies every entry by a complex scalar.
    pub fn scale_complex(&self, factor: C64) -> Self {
        Self {
            inner: self.inner.map(|z| z * factor),
        }
    }

    /// Scales column j by factors[j]; equivalent to right-multiplying by a
    /// real diagonal matrix.
    pub fn scale_columns(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.cols() {
            return Err(Error::DimensionMismatch {
                context: "scale_columns".into(),
                expected: format!("{} factors", self.cols()),
                found: format!("{}", factors.len()),
            });
        }
        let mut inner = self.inner.clone();
        for (j, &f) in factors.iter().enumerate() {
            for i in 0..inner.nrows() {
                inner[(i, j)] *= f;
            }
        }
        Self::from_na(inner, "scale_columns")
    }

    /// Contiguous column block [start, start + count).
    pub fn column_block(&self, start: usize, count: usize) -> Result<Self> {
        if start + count > self.cols() {
            return Err(Error::ShapeError {
                context: "column_block".into(),
                detail: format!(
                    "columns [{start}, {}) out of range for {} columns",
                    start + count,
                    self.cols()
                ),
            });
        }
        Ok(Self {
            inner: self.inner.columns(start, count).into_owned(),
        })
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows() != other.rows() {
            return Err(Error::DimensionMismatch {
                context: "hcat".into(),
                expected: format!("{} rows", self.rows()),
                found: format!("{} rows", other.rows()),
            });
        }
        let mut inner = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        inner.columns_mut(0, self.cols()).copy_from(&self.inner);
        inner
            .columns_mut(self.cols(), other.cols())
            .copy_from(&other.inner);
        Ok(Self { inner })
    }

    /// Hermitian part (A + A^H) / 2; requires a square matrix.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square(), "hermitian_part requires a square matrix");
        Self {
            inner: (&self.inner + self.inner.adjoint()).map(|z| z * 0.5),
        }
    }

    /// Frobenius norm of A - A^H, the absolute Hermitian defect.
    pub fn hermitian_defect(&self) -> f64 {
        assert!(self.is_square(), "hermitian_defect requires a square matrix");
        (&self.inner - self.inner.adjoint()).norm()
    }
}

impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    /// Matrix product; panics on inner-dimension mismatch.
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matrix product dimension mismatch: {}x{} * {}x{}",
            self.rows(),
            self.cols(),
            rhs.rows(),
            rhs.cols()
        );
        DenseMatrix {
            inner: &self.inner * &rhs.inner,
        }
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            (self.rows(), self.cols()),
            (rhs.rows(), rhs.cols()),
            "matrix sum shape mismatch"
        );
        DenseMatrix {
            inner: &self.inner + &rhs.inner,
        }
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            (self.rows(), self.cols()),
            (rhs.rows(), rhs.cols()),
            "matrix difference shape mismatch"
        );
        DenseMatrix {
            inner: &self.inner - &rhs.inner,
        }
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;

    fn neg(self) -> DenseMatrix {
        DenseMatrix {
            inner: -&self.inner,
        }
    }
}

// ---------------------------------------------------------------------------
// Text file format
// ---------------------------------------------------------------------------
//
// Line-oriented UTF-8. Lines whose first non-blank character is '#' are
// comments. The first data line is the header `<rows> <cols> <field>` with
// field `real` or `complex`. The remaining tokens are the entries in
// row-major order: one float per entry for `real`, interleaved
// `re im re im ...` pairs for `complex`. Token placement across lines is
// free; the writer emits one row per line with 17 significant digits, which
// round-trips f64 exactly.

/// Parses a matrix from text in the crate's file format.
pub fn read_matrix_text(text: &str) -> Result<DenseMatrix> {
    let mut tokens = text
        .lines()
        .map(|line| match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        })
        .flat_map(|line| line.split_whitespace());

    let rows: usize = tokens
        .next()
        .ok_or_else(|| Error::Format("missing header".into()))?
        .parse()
        .map_err(|_| Error::Format("header row count is not an integer".into()))?;
    let cols: usize = tokens
        .next()
        .ok_or_else(|| Error::Format("header is missing the column count".into()))?
        .parse()
        .map_err(|_| Error::Format("header column count is not an integer".into()))?;
    let field = tokens
        .next()
        .ok_or_else(|| Error::Format("header is missing the field tag".into()))?;
    if rows == 0 || cols == 0 {
        return Err(Error::Format(format!(
            "matrix dimensions must be positive, got {rows} x {cols}"
        )));
    }

    let per_entry = match field {
        "real" => 1,
        "complex" => 2,
        other => {
            return Err(Error::Format(format!(
                "field must be `real` or `complex`, got {other:?}"
            )))
        }
    };

    let expected = rows * cols * per_entry;
    let mut values = Vec::with_capacity(expected);
    for tok in tokens.by_ref() {
        if values.len() == expected {
            return Err(Error::Format(format!(
                "trailing token {tok:?} after {expected} entries"
            )));
        }
        let v: f64 = tok
            .parse()
            .map_err(|_| Error::Format(format!("entry {tok:?} is not a number")))?;
        values.push(v);
    }
    if values.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} numeric entries, found {}",
            values.len()
        )));
    }

    let entries: Vec<C64> = if per_entry == 1 {
        values.iter().map(|&x| C64::new(x, 0.0)).collect()
    } else {
        values.chunks_exact(2).map(|p| C64::new(p[0], p[1])).collect()
    };
    DenseMatrix::from_complex_row_major(rows, cols, &entries)
}

/// Reads a matrix file from disk.
pub fn read_matrix_file<P: AsRef<Path>>(path: P) -> Result<DenseMatrix> {
    let text = std::fs::read_to_string(path)?;
    read_matrix_text(&text)
}

/// Renders a matrix in the crate's file format. Matrices whose imaginary
/// parts are all exactly zero are tagged `real`, everything else `complex`.
pub fn write_matrix_text(m: &DenseMatrix) -> String {
    let all_real = (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).im == 0.0));
    let field = if all_real { "real" } else { "complex" };
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), field);
    for i in 0..m.rows() {
        let mut first = true;
        for j in 0..m.cols() {
            let z = m.get(i, j);
            if !first {
                out.push(' ');
            }
            first = false;
            if all_real {
                let _ = write!(out, "{:.16e}", z.re);
            } else {
                let _ = write!(out, "{:.16e} {:.16e}", z.re, z.im);
            }
        }
        out.push('\n');
    }
    out
}

/// Writes a matrix file to disk.
pub fn write_matrix_file<P: AsRef<Path>>(path: P, m: &DenseMatrix) -> Result<()> {
    std::fs::write(path, write_matrix_text(m))?;
    Ok(())
}
