//! Dense complex matrix kernel.
//!
//! Only what the capacity formulas need: products, Gram matrices, a Hermitian
//! eigensolver (cyclic complex Jacobi), Cholesky-based `log2 det(I + sA)` and
//! the Hermitian square root of a PSD matrix.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative zero threshold used for eigenvalue rank decisions.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// Entrywise asymmetry allowed before a matrix is rejected as non-Hermitian,
/// relative to `max(1, max |a_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidShape { rows, cols, len: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Square diagonal matrix with the given real diagonal.
    ///
    /// # Panics
    /// If `diag` is empty.
    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Sum of diagonal entries (square matrices).
    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Σ |a_ij|².
    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| libm::sqrt(z.norm_sqr())).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    /// Largest entrywise `|a_ij - conj(a_ji)|`; infinite for non-square input.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                worst = worst.max(libm::sqrt(d.norm_sqr()));
            }
        }
        worst
    }

    fn check_hermitian(&self) -> Result<()> {
        let asymmetry = self.hermitian_asymmetry();
        if asymmetry > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// # Panics
    /// On incompatible shapes; use [`ComplexMatrix::matmul`] for a fallible product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

/// `H·H^H`, side `rows(H)`. Only the upper triangle is computed; the lower
/// triangle is its exact conjugate mirror.
pub fn gram(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let ri = h.row(i);
        for j in i..n {
            let rj = h.row(j);
            let mut acc = ZERO;
            for (a, b) in ri.iter().zip(rj) {
                acc += a * b.conj();
            }
            if i == j {
                acc.im = 0.0;
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    out
}

/// `H^H·H`, side `cols(H)`. Same nonzero spectrum as [`gram`].
pub fn gram_adjoint(h: &ComplexMatrix) -> ComplexMatrix {
    gram(&h.adjoint())
}

/// Gram matrix on the smaller side of `H`; shares the nonzero eigenvalues of `H·H^H`.
pub fn min_side_gram(h: &ComplexMatrix) -> ComplexMatrix {
    if h.cols() < h.rows() {
        gram_adjoint(h)
    } else {
        gram(h)
    }
}

/// Eigenvalues of a Hermitian PSD matrix, sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
    rank: usize,
}

impl EigenSpectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of eigenvalues above the zero threshold.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The leading `rank` eigenvalues.
    pub fn positive(&self) -> &[f64] {
        &self.values[..self.rank]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds a spectrum from raw eigenvalue estimates, applying the relative
    /// zero threshold. Values within `zero_tol` of zero are clamped to zero;
    /// anything more negative is rejected.
    pub fn from_values(mut values: Vec<f64>, zero_tol: f64) -> Result<Self> {
        // stable: equal eigenvalues keep their input order
        values.sort_by(|a, b| b.total_cmp(a));
        let scale = values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
        let threshold = zero_tol * scale;
        let mut rank = 0;
        for v in values.iter_mut() {
            if !v.is_finite() || *v < -threshold {
                return Err(Error::IndefiniteInput { eigenvalue: *v });
            }
            if v.abs() < threshold {
                *v = 0.0;
            } else {
                rank += 1;
            }
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values, rank })
    }
}

/// Raw eigen-decomposition of a Hermitian matrix: `A = V·diag(values)·V^H`.
/// Values are in Jacobi output order (unsorted); column `k` of `vectors`
/// belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const JACOBI_MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
pub fn herm_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    a.check_hermitian()?;
    let n = a.rows();
    // exact Hermitian working copy
    let mut w = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        w[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            w[(i, j)] = z;
            w[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let total = w.frobenius_norm_sqr();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| w[(p, q)].norm_sqr())
            .sum();
        if off == 0.0 || off <= f64::EPSILON * f64::EPSILON * total {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }

    let values = (0..n).map(|i| w[(i, i)].re).collect();
    Ok(HermitianEigen { values, vectors: v })
}

/// One Jacobi rotation annihilating `w[p][q]`.
///
/// `J = U·R` with `U = diag(1, conj(e))` on (p, q), `e = w_pq/|w_pq|`, which
/// makes the pivot real, followed by the real rotation `R = [[c, s], [-s, c]]`.
fn rotate(w: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = w[(p, q)];
    let abs_g = libm::sqrt(g.norm_sqr());
    if abs_g == 0.0 {
        return;
    }
    let n = w.rows();
    let uq = (g / abs_g).conj();
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let tau = (aqq - app) / (2.0 * abs_g);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    // columns: A <- A·J
    let jqp = -uq * s;
    let jqq = uq * c;
    for k in 0..n {
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        w[(k, p)] = akp * c + akq * jqp;
        w[(k, q)] = akp * s + akq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * jqp;
        v[(k, q)] = vkp * s + vkq * jqq;
    }
    // rows: A <- J^H·A
    let cjqp = jqp.conj();
    let cjqq = jqq.conj();
    for k in 0..n {
        let apk = w[(p, k)];
        let aqk = w[(q, k)];
        w[(p, k)] = apk * c + aqk * cjqp;
        w[(q, k)] = apk * s + aqk * cjqq;
    }
    w[(p, q)] = ZERO;
    w[(q, p)] = ZERO;
    w[(p, p)].im = 0.0;
    w[(q, q)].im = 0.0;
}

/// Eigenvalues of a Hermitian PSD matrix, sorted descending, with rank.
///
/// `zero_tol` is relative to `max(max |λ|, 1)`.
pub fn herm_eigvals(a: &ComplexMatrix, zero_tol: f64) -> Result<EigenSpectrum> {
    let eig = herm_eigen(a)?;
    EigenSpectrum::from_values(eig.values, zero_tol)
}

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
pub fn cholesky(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_hermitian()?;
    Ok(cholesky_with_pivots(a)?.0)
}

/// Cholesky factor plus the squared pivots `l_jj²`, whose product is `det(A)`.
fn cholesky_with_pivots(a: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>)> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    let mut pivots = Vec::with_capacity(n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::CholeskyBreakdown { pivot: j });
        }
        pivots.push(d);
        let ljj = libm::sqrt(d);
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut acc = a[(i, j)];
            for k in 0..j {
                acc -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = acc / ljj;
        }
    }
    Ok((l, pivots))
}

/// `log2 det(I + scale·A)` for Hermitian PSD `A`, via Cholesky of `I + scale·A`.
pub fn logdet2_id_plus(a: &ComplexMatrix, scale: f64) -> Result<f64> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::InvalidScale(scale));
    }
    a.check_hermitian()?;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let n = a.rows();
    let mut m = a.scaled(scale);
    for i in 0..n {
        m[(i, i)] += ONE;
    }
    let (_, pivots) = cholesky_with_pivots(&m)?;
    let sum: f64 = pivots.iter().map(|&d| libm::log2(d)).sum();
    Ok(sum.max(0.0))
}

/// Hermitian square root `B = U·diag(√λ)·U^H` of a PSD matrix, so `B·B^H = R`.
pub fn psd_sqrt(r: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eigen(r)?;
    let scale = eig.values.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1.0);
    let n = r.rows();
    let mut roots = Vec::with_capacity(n);
    for &lambda in &eig.values {
        if lambda < -HERMITIAN_TOL * scale {
            return Err(Error::IndefiniteInput { eigenvalue: lambda });
        }
        roots.push(libm::sqrt(lambda.max(0.0)));
    }
    let u = &eig.vectors;
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = ZERO;
            for (k, &root) in roots.iter().enumerate() {
                if root != 0.0 {
                    acc += u[(i, k)] * u[(j, k)].conj() * root;
                }
            }
            if i == j {
                acc.im = 0.0;
            }
            out[(i, j)] = acc;
            out[(j, i)] = acc.conj();
        }
    }
    Ok(out)
}
