//! Dense complex-matrix numerics: Hermitian spectral decomposition,
//! Loewner order, spectral norm, column-space projectors, and two
//! independent routines for operator square roots.
//!
//! Everything downstream (spaces, classifiers, the projection-pair
//! construction) reduces to these kernels, so all equality checks here
//! are *relative spectral-norm residuals*: `||X - Y|| <= eq_rel * (1 + max(||X||, ||Y||))`.

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{GramianError, Result};

pub type C64 = Complex<f64>;

/// Singular values below `RANK_CUTOFF * sigma_max` are treated as zero
/// when deciding numerical rank (column-space projectors, kernels).
pub const RANK_CUTOFF: f64 = 1e-10;

/// The binomial series for `A^{-1/2}` is rejected when
/// `||A - I|| >= 1 - SERIES_MARGIN`; conditioning degrades too fast
/// beyond that point for the truncation bound to mean anything.
pub const SERIES_MARGIN: f64 = 1e-6;

/// Numerical tolerances used by every check in the toolkit.
///
/// `eq_rel` governs operator equality, `psd_abs` is the eigenvalue floor
/// scale for positivity checks, and the `series_*` fields control the
/// binomial inverse-square-root iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative residual bound for operator equality.
    pub eq_rel: f64,
    /// Eigenvalue floor scale: `lambda_min >= -psd_abs * (1 + ||M||)` passes.
    pub psd_abs: f64,
    /// Series truncation bound on the term norm.
    pub series_term: f64,
    /// Hard cap on the number of series terms.
    pub series_max_terms: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eq_rel: 1e-8,
            psd_abs: 1e-10,
            series_term: 1e-15,
            series_max_terms: 10_000,
        }
    }
}

impl Tolerances {
    /// Default tolerances with a different operator-equality bound.
    pub fn with_eq_rel(eq_rel: f64) -> Self {
        Self {
            eq_rel,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eq_rel > 0.0 && self.psd_abs > 0.0 && self.series_term > 0.0) {
            return Err(GramianError::InvalidInput(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.series_max_terms == 0 {
            return Err(GramianError::InvalidInput(
                "series_max_terms must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Dense complex matrix with finite entries, row-major on the wire.
///
/// The JSON form is `{"rows": r, "cols": c, "re": [[..]], "im": [[..]]}`;
/// loading rejects dimension mismatches and non-finite values, so a
/// constructed value always satisfies the finiteness invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct ComplexMatrix {
    pub(crate) data: DMatrix<C64>,
}

impl ComplexMatrix {
    /// Build from row-major complex entries; validates length and finiteness.
    pub fn from_entries(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GramianError::InvalidInput(
                "matrix dimensions must be at least 1x1".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(GramianError::InvalidInput(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GramianError::InvalidInput(
                "matrix entries must be finite (no NaN/Inf)".into(),
            ));
        }
        Ok(Self {
            data: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    /// Build from row-major real entries.
    pub fn from_real_entries(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let complex: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_entries(rows, cols, &complex)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: DMatrix::identity(n, n),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self {
            data: DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(diag[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub(crate) fn from_dmatrix(data: DMatrix<C64>) -> Self {
        debug_assert!(
            data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "arithmetic produced non-finite entries"
        );
        Self { data }
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[(row, col)]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    /// Hermitian part `(M + M*) / 2`.
    pub fn hermitized(&self) -> Self {
        Self {
            data: (&self.data + self.data.adjoint()).scale(0.5),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            data: self.data.scale(factor),
        }
    }

    /// Largest singular value. Zero and identity cases short-circuit to
    /// keep them exact.
    pub fn spectral_norm(&self) -> f64 {
        if self.data.iter().all(|z| z.norm_sqr() == 0.0) {
            return 0.0;
        }
        nalgebra::SVD::new(self.data.clone(), false, false).singular_values[0]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    /// Horizontal concatenation `[self | other]`; rows must agree.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows() != other.rows() {
            return Err(GramianError::ShapeMismatch(format!(
                "cannot stack {}x{} beside {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let mut data = DMatrix::zeros(self.rows(), self.cols() + other.cols());
        data.view_mut((0, 0), (self.rows(), self.cols()))
            .copy_from(&self.data);
        data.view_mut((0, self.cols()), (other.rows(), other.cols()))
            .copy_from(&other.data);
        Ok(Self { data })
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows(), self.cols()),
            (rhs.rows(), rhs.cols()),
            "matrix addition shape mismatch"
        );
        ComplexMatrix::from_dmatrix(&self.data + &rhs.data)
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            (self.rows(), self.cols()),
            (rhs.rows(), rhs.cols()),
            "matrix subtraction shape mismatch"
        );
        ComplexMatrix::from_dmatrix(&self.data - &rhs.data)
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.cols(),
            rhs.rows(),
            "matrix product shape mismatch: {}x{} * {}x{}",
            self.rows(),
            self.cols(),
            rhs.rows(),
            rhs.cols()
        );
        ComplexMatrix::from_dmatrix(&self.data * &rhs.data)
    }
}

/// Relative spectral-norm distance `||a - b|| / (1 + max(||a||, ||b||))`.
pub fn rel_residual(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = (a - b).spectral_norm();
    diff / (1.0 + a.spectral_norm().max(b.spectral_norm()))
}

/// Hermitian eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

/// Spectral decomposition of a Hermitian matrix; the input is
/// symmetrized to `(M + M*) / 2` first.
pub fn eigh(m: &ComplexMatrix) -> Result<Eigh> {
    if !m.is_square() {
        return Err(GramianError::ShapeMismatch(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let herm = m.hermitized();
    let se = nalgebra::SymmetricEigen::new(herm.data);
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(Eigh {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_dmatrix(vectors),
    })
}

/// Loewner order test: `a <= b` iff `b - a` is positive semidefinite
/// within the eigenvalue floor `psd_abs * (1 + ||b - a||)`.
pub fn loewner_leq(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(GramianError::ShapeMismatch(format!(
            "Loewner comparison of {}x{} against {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let diff = b - a;
    let decomp = eigh(&diff)?;
    let lambda_min = decomp.eigenvalues[0];
    let scale = decomp
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    Ok(lambda_min >= -tol.psd_abs * (1.0 + scale))
}

/// Principal square root of a positive semidefinite Hermitian matrix,
/// computed spectrally. Eigenvalues in `[-psd_abs * ||A||, 0)` are
/// clamped to zero; anything lower is rejected.
pub fn sqrt_psd(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    let decomp = eigh(a)?;
    let scale = decomp
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let lambda_min = decomp.eigenvalues[0];
    if lambda_min < -tol.psd_abs * scale {
        return Err(GramianError::NotPositive { lambda_min });
    }
    let roots: Vec<f64> = decomp
        .eigenvalues
        .iter()
        .map(|&x| x.max(0.0).sqrt())
        .collect();
    let u = &decomp.eigenvectors;
    let s = &(u * &ComplexMatrix::from_real_diagonal(&roots)) * &u.adjoint();
    Ok(s.hermitized())
}

/// Inverse square root of a Hermitian matrix near the identity, via the
/// binomial series `(I + X)^{-1/2} = sum_k C(-1/2, k) X^k` with `X = A - I`.
///
/// Valid for `||A - I|| < 1 - SERIES_MARGIN`. Terms are accumulated until
/// the Frobenius norm of the current term (an upper bound on its spectral
/// norm) drops below `series_term`, or the term cap is hit.
pub fn inv_sqrt_series(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(GramianError::ShapeMismatch(format!(
            "inverse square root needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let x = a - &ComplexMatrix::identity(n);
    let xnorm = x.spectral_norm();
    let limit = 1.0 - SERIES_MARGIN;
    if xnorm >= limit {
        return Err(GramianError::SeriesDiverges { norm: xnorm, limit });
    }

    let mut sum = ComplexMatrix::identity(n);
    let mut power = ComplexMatrix::identity(n);
    let mut coeff = 1.0f64; // C(-1/2, 0)
    for k in 1..=tol.series_max_terms {
        power = &power * &x;
        // C(-1/2, k) = C(-1/2, k-1) * (-(2k - 1)) / (2k)
        coeff *= -((2 * k - 1) as f64) / ((2 * k) as f64);
        let term = power.scaled(coeff);
        sum = &sum + &term;
        if term.frobenius_norm() < tol.series_term {
            return Ok(sum);
        }
    }
    Err(GramianError::NoConvergence {
        terms: tol.series_max_terms,
    })
}

/// Orthogonal projector onto the column space of `g`, at numerical rank
/// (cutoff `RANK_CUTOFF * sigma_max`). The zero matrix maps to the zero
/// projector.
pub fn column_space_projector(g: &ComplexMatrix) -> ComplexMatrix {
    let rows = g.rows();
    let svd = nalgebra::SVD::new(g.data.clone(), true, false);
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |a, &s| a.max(s));
    if sigma_max == 0.0 {
        return ComplexMatrix::zeros(rows, rows);
    }
    let cutoff = RANK_CUTOFF * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    if rank == 0 {
        return ComplexMatrix::zeros(rows, rows);
    }
    let u = svd.u.expect("left singular vectors were requested");
    let ur = u.columns(0, rank).into_owned();
    ComplexMatrix::from_dmatrix(&ur * ur.adjoint()).hermitized()
}

#[derive(Serialize, Deserialize)]
struct MatrixWire {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl From<ComplexMatrix> for MatrixWire {
    fn from(m: ComplexMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut re = vec![vec![0.0; cols]; rows];
        let mut im = vec![vec![0.0; cols]; rows];
        for i in 0..rows {
            for j in 0..cols {
                let z = m.entry(i, j);
                re[i][j] = z.re;
                im[i][j] = z.im;
            }
        }
        Self { rows, cols, re, im }
    }
}

impl TryFrom<MatrixWire> for ComplexMatrix {
    type Error = GramianError;

    fn try_from(w: MatrixWire) -> Result<Self> {
        let row_shape_ok =
            |part: &Vec<Vec<f64>>| part.len() == w.rows && part.iter().all(|r| r.len() == w.cols);
        if !row_shape_ok(&w.re) || !row_shape_ok(&w.im) {
            return Err(GramianError::InvalidInput(format!(
                "re/im arrays do not match declared shape {}x{}",
                w.rows, w.cols
            )));
        }
        let mut entries = Vec::with_capacity(w.rows * w.cols);
        for i in 0..w.rows {
            for j in 0..w.cols {
                entries.push(C64::new(w.re[i][j], w.im[i][j]));
            }
        }
        Self::from_entries(w.rows, w.cols, &entries)
    }
}
