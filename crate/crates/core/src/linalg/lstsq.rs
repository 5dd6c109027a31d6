use num_complex::Complex;

use super::eigen::{eig_hermitian, DEFAULT_EIG_TOL};
use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Gram matrices whose condition estimate exceeds this are rejected.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

/// `λ_max / λ_min` of a Hermitian positive semi-definite matrix (∞ if singular).
pub(crate) fn hermitian_condition<T: Real>(g: &ComplexMatrix<T>) -> Result<T> {
    let eig = eig_hermitian(g, T::tol(DEFAULT_EIG_TOL))?;
    let hi = eig.values.first().copied().unwrap_or_else(T::zero);
    let lo = eig.values.last().copied().unwrap_or_else(T::zero);
    if lo <= T::zero() {
        return Ok(T::infinity());
    }
    Ok(hi / lo)
}

/// Lower-triangular `L` with `A = L L*`, or `None` if `A` is not positive definite.
fn cholesky<T: Real>(a: &ComplexMatrix<T>) -> Option<ComplexMatrix<T>> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d = d - l[(j, k)].norm_sqr();
        }
        if !(d > T::zero()) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex::new(d, T::zero());
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / d;
        }
    }
    Some(l)
}

/// Solves `(L L*) X = B` given the Cholesky factor.
fn cholesky_solve<T: Real>(l: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut s = x[(i, c)];
            for k in 0..i {
                s = s - l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].re;
        }
        for i in (0..n).rev() {
            let mut s = x[(i, c)];
            for k in (i + 1)..n {
                s = s - l[(k, i)].conj() * x[(k, c)];
            }
            x[(i, c)] = s / l[(i, i)].re;
        }
    }
    x
}

/// Natural log-determinant of a Hermitian positive definite matrix.
pub fn cholesky_log_det<T: Real>(a: &ComplexMatrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let l = cholesky(a).ok_or_else(|| Error::InvalidParameter("matrix is not positive definite".into()))?;
    Ok((0..a.rows()).map(|i| l[(i, i)].re.ln()).sum::<T>() * T::lit(2.0))
}

/// Least-squares coefficients `X = (B*B)⁻¹ B* Y` minimizing `‖Y − B X‖_F`.
pub fn least_squares<T: Real>(basis: &ComplexMatrix<T>, target: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if basis.rows() != target.rows() {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} rows, target has {}",
            basis.rows(),
            target.rows()
        )));
    }
    if basis.cols() == 0 {
        return Err(Error::InvalidParameter("least-squares basis has no columns".into()));
    }
    let gram = basis.adjoint_mul(basis);
    let condition = hermitian_condition(&gram)?;
    if !(condition <= T::lit(GRAM_CONDITION_LIMIT)) {
        return Err(Error::IllConditionedBasis { condition: condition.to_f64().unwrap_or(f64::INFINITY) });
    }
    let l = cholesky(&gram).ok_or(Error::IllConditionedBasis { condition: f64::INFINITY })?;
    Ok(cholesky_solve(&l, &basis.adjoint_mul(target)))
}
