//! Dense complex linear algebra used throughout the crate.
//!
//! Everything here is self-contained: a row-major [`ComplexMatrix`], a cyclic
//! Jacobi Hermitian eigensolver, an SVD built on top of it, unitary DFT
//! matrices, Kronecker products and a normal-equation least-squares solver.

mod dft;
mod eigen;
mod lstsq;
mod svd;

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use dft::dft_matrix;
pub use eigen::{eig_hermitian, EigenSpectrum, DEFAULT_EIG_TOL};
pub use lstsq::{cholesky_log_det, least_squares, GRAM_CONDITION_LIMIT};
pub(crate) use lstsq::hermitian_condition;
pub use svd::{svd, SvdResult, SVD_RANK_THRESHOLD};

/// Dense complex matrix stored in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for c in 0..self.cols.min(8) {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}j ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries. Fails on a length mismatch or
    /// on any non-finite entry.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix with `diag` on the diagonal.
    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of equal length).
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("columns have unequal lengths".into()));
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r]))
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
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[Complex<T>]) {
        assert_eq!(values.len(), self.rows, "column length mismatch");
        for (r, &v) in values.iter().enumerate() {
            self[(r, c)] = v;
        }
    }

    pub fn diagonal(&self) -> Vec<Complex<T>> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Columns `indices` of `self`, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self::from_fn(self.rows, indices.len(), |r, c| self[(r, indices[c])])
    }

    /// Leading `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        let idx: Vec<usize> = (0..k).collect();
        self.select_columns(&idx)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_complex(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Self { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// `self* * other` without materializing the adjoint.
    pub fn adjoint_mul(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut out = Self::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let a_row = self.row(k);
            let b_row = other.row(k);
            for (i, &a) in a_row.iter().enumerate() {
                let a = a.conj();
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// `self * other*`.
    pub fn mul_adjoint(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "column counts differ");
        Self::from_fn(self.rows, other.rows, |i, j| {
            self.row(i).iter().zip(other.row(j)).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| {
                acc + a * b.conj()
            })
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b))
            .collect()
    }

    /// `diag(d) * self`.
    pub fn scale_rows(&self, d: &[Complex<T>]) -> Self {
        assert_eq!(d.len(), self.rows, "diagonal length mismatch");
        Self::from_fn(self.rows, self.cols, |r, c| d[r] * self[(r, c)])
    }

    /// `self * diag(d)`.
    pub fn scale_cols(&self, d: &[Complex<T>]) -> Self {
        assert_eq!(d.len(), self.cols, "diagonal length mismatch");
        Self::from_fn(self.rows, self.cols, |r, c| self[(r, c)] * d[c])
    }

    pub fn frobenius_norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.frobenius_norm_sqr().sqrt()
    }

    pub fn trace(&self) -> Complex<T> {
        self.diagonal().into_iter().fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(&a, &b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// `‖A - A*‖_F / ‖A‖_F`, zero for the zero matrix.
    pub fn hermitian_asymmetry(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let norm = self.frobenius_norm();
        if norm == T::zero() {
            return T::zero();
        }
        let mut acc = T::zero();
        for r in 0..self.rows {
            for c in 0..self.cols {
                acc = acc + (self[(r, c)] - self[(c, r)].conj()).norm_sqr();
            }
        }
        acc.sqrt() / norm
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (br, bc) = other.shape();
        Self::from_fn(self.rows * br, self.cols * bc, |r, c| self[(r / br, c / bc)] * other[(r % br, c % bc)])
    }

    /// Column Euclidean norms.
    pub fn column_norms(&self) -> Vec<T> {
        let mut acc = vec![T::zero(); self.cols];
        for r in 0..self.rows {
            for (a, z) in acc.iter_mut().zip(self.row(r)) {
                *a = *a + z.norm_sqr();
            }
        }
        acc.into_iter().map(T::sqrt).collect()
    }

    /// Converts the scalar type, e.g. to check an `f32` result against `f64`.
    pub fn cast<U: Real>(&self) -> ComplexMatrix<U> {
        let cv = |x: T| U::from_f64(x.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(U::nan);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| Complex::new(cv(z.re), cv(z.im))).collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Kronecker product of two matrices.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("Kronecker operands must be non-empty".into()));
    }
    Ok(a.kron(b))
}

/// Inner product `x* y`.
pub fn dot<T: Real>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    x.iter().zip(y).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a.conj() * b)
}

pub fn vec_norm<T: Real>(x: &[Complex<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn new_rejects_bad_length_and_nan() {
        assert!(M::new(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(M::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(M::new(1, 2, vec![c(1.0, 0.0), c(0.0, 1.0)]).is_ok());
    }

    #[test]
    fn kron_identity_and_scalar() {
        let i2 = M::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), M::identity(4));

        let b = M::from_fn(2, 3, |r, c| Complex::new(r as f64, c as f64));
        let two = M::new(1, 1, vec![c(2.0, 0.0)]).unwrap();
        assert!(kron(&two, &b).unwrap().max_abs_diff(&b.scale(2.0)) < 1e-15);
        assert!(kron(&M::zeros(0, 0), &b).is_err());
    }

    #[test]
    fn adjoint_products_match_explicit() {
        let a = M::from_fn(3, 2, |r, c| Complex::new(r as f64 + 0.5, c as f64 - 1.0));
        let b = M::from_fn(3, 4, |r, c| Complex::new((r * c) as f64, 1.0));
        assert!(a.adjoint_mul(&b).max_abs_diff(&a.adjoint().matmul(&b)) < 1e-12);
        let d = M::from_fn(5, 2, |r, c| Complex::new(c as f64, r as f64));
        assert!(a.mul_adjoint(&d).max_abs_diff(&a.matmul(&d.adjoint())) < 1e-12);
    }

    #[test]
    fn hermitian_asymmetry_detects_skew() {
        let h = M::new(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        assert!(h.hermitian_asymmetry() < 1e-15);
        let s = M::new(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(2.0, 0.0)]).unwrap();
        assert!(s.hermitian_asymmetry() > 0.1);
    }
}
