use num_complex::Complex;

use super::{dot, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Singular values at or below this fraction of the largest one count as zero.
pub const SVD_RANK_THRESHOLD: f64 = 1e-10;

/// `A = U Σ V*` with full square `U` (rows×rows) and `V` (cols×cols).
#[derive(Debug, Clone)]
pub struct SvdResult<T: Real> {
    pub left: ComplexMatrix<T>,
    /// `min(rows, cols)` values, non-increasing.
    pub singular_values: Vec<T>,
    pub right: ComplexMatrix<T>,
}

impl<T: Real> SvdResult<T> {
    /// Number of singular values above the relative rank threshold.
    pub fn rank(&self) -> usize {
        let top = self.singular_values.first().copied().unwrap_or_else(T::zero);
        let cut = T::tol(SVD_RANK_THRESHOLD) * top;
        self.singular_values.iter().filter(|&&s| s > cut).count()
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let k = self.singular_values.len();
        let sigma: Vec<Complex<T>> = self.singular_values.iter().map(|&s| Complex::new(s, T::zero())).collect();
        self.left.leading_columns(k).scale_cols(&sigma).mul_adjoint(&self.right.leading_columns(k))
    }
}

const MAX_SWEEPS: usize = 60;

/// SVD by one-sided (Hestenes) Jacobi rotations on the columns of `A` (or of
/// `A*` when `A` is wide), which keeps small singular values accurate.
///
/// Left vectors for the numerically non-zero singular values are the
/// normalized rotated columns; the rest complete an orthonormal basis.
pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<SvdResult<T>> {
    if a.is_empty() {
        return Err(Error::InvalidParameter("SVD of an empty matrix".into()));
    }
    if !a.is_finite() {
        return Err(Error::InvalidParameter("SVD input has non-finite entries".into()));
    }
    let wide = a.rows() < a.cols();
    let b = if wide { a.adjoint() } else { a.clone() };
    let (m, n) = b.shape();

    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|c| b.column(c)).collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|c| (0..n).map(|r| if r == c { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) }).collect())
        .collect();
    let tol = T::epsilon() * T::from_count(m).sqrt();
    // Columns at rounding level carry no direction worth orthogonalizing.
    let floor = (T::epsilon() * b.frobenius_norm()).powi(2);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: T = cols[p].iter().map(Complex::norm_sqr).sum();
                let beta: T = cols[q].iter().map(Complex::norm_sqr).sum();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if alpha <= floor || beta <= floor || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let tau = (beta - alpha) / (g + g);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let es = e.conj();
                rotate(&mut cols, p, q, c, s, es);
                rotate(&mut v, p, q, c, s, es);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<T> = cols.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap_or(std::cmp::Ordering::Equal));
    let singular_values: Vec<T> = order.iter().map(|&i| norms[i]).collect();
    let cut = T::tol(SVD_RANK_THRESHOLD) * singular_values[0];

    let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(m);
    for (&i, &s) in order.iter().zip(&singular_values) {
        if s <= cut || s == T::zero() {
            break;
        }
        let col: Vec<Complex<T>> = cols[i].iter().map(|&z| z / s).collect();
        match orthonormalize_against(&basis, col) {
            Some(u) => basis.push(u),
            None => break,
        }
    }
    complete_basis(&mut basis, m);
    let left = ComplexMatrix::from_columns(&basis)?;
    let right = ComplexMatrix::from_columns(&order.iter().map(|&i| v[i].clone()).collect::<Vec<_>>())?;

    Ok(if wide {
        SvdResult { left: right, singular_values, right: left }
    } else {
        SvdResult { left, singular_values, right }
    })
}

/// `x_p ← c x_p − s ē x_q`, `x_q ← s x_p + c ē x_q`.
fn rotate<T: Real>(x: &mut [Vec<Complex<T>>], p: usize, q: usize, c: T, s: T, es: Complex<T>) {
    let (head, tail) = x.split_at_mut(q);
    let (xp, xq) = (&mut head[p], &mut tail[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let (u, w) = (*a, *b * es);
        *a = u * c - w * s;
        *b = u * s + w * c;
    }
}

/// Twice-iterated modified Gram-Schmidt. Returns `None` when `x` is (numerically)
/// inside the span of `basis`.
pub(crate) fn orthonormalize_against<T: Real>(basis: &[Vec<Complex<T>>], mut x: Vec<Complex<T>>) -> Option<Vec<Complex<T>>> {
    let start = vec_norm(&x);
    if start == T::zero() {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let proj = dot(b, &x);
            for (xi, &bi) in x.iter_mut().zip(b) {
                *xi = *xi - bi * proj;
            }
        }
    }
    let norm = vec_norm(&x);
    if norm <= start * T::tol(1e-8) {
        return None;
    }
    Some(x.into_iter().map(|z| z / norm).collect())
}

/// Extends an orthonormal set to `dim` vectors using standard basis candidates.
pub(crate) fn complete_basis<T: Real>(basis: &mut Vec<Vec<Complex<T>>>, dim: usize) {
    let mut candidate = 0;
    while basis.len() < dim && candidate < dim {
        let mut e = vec![Complex::new(T::zero(), T::zero()); dim];
        e[candidate] = Complex::new(T::one(), T::zero());
        if let Some(u) = orthonormalize_against(basis, e) {
            basis.push(u);
        }
        candidate += 1;
    }
}
