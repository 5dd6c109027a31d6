use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Convergence target for the off-diagonal Frobenius mass, relative to `‖A‖_F`.
pub const DEFAULT_EIG_TOL: f64 = 1e-11;

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 60;

/// Eigenvalues in non-increasing order with matching unit-norm eigenvectors
/// stored column-wise.
#[derive(Debug, Clone)]
pub struct EigenSpectrum<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSpectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `V Λ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let lambda: Vec<Complex<T>> = self.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.vectors.scale_cols(&lambda).mul_adjoint(&self.vectors)
    }
}

fn off_diagonal_norm<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.rows();
    let mut acc = T::zero();
    for p in 0..n {
        for q in 0..n {
            if p != q {
                acc = acc + a[(p, q)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Pivots are visited in row-major order `(0,1), (0,2), …, (n-2,n-1)` every
/// sweep, so the result is reproducible for a given platform. Iteration stops
/// once the off-diagonal Frobenius mass falls to `tol · ‖A‖_F`.
pub fn eig_hermitian<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Result<EigenSpectrum<T>> {
    if !a.is_square() {
        return Err(Error::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let asym = a.hermitian_asymmetry();
    if asym > T::tol(HERMITIAN_TOL) {
        return Err(Error::NonHermitianInput { asymmetry: asym.to_f64().unwrap_or(f64::NAN) });
    }

    let n = a.rows();
    let half = T::lit(0.5);
    // Exact Hermitian working copy.
    let mut w = ComplexMatrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()) * half);
    for i in 0..n {
        w[(i, i)].im = T::zero();
    }
    let mut v = ComplexMatrix::identity(n);

    let norm = w.frobenius_norm();
    let target = tol.max(T::epsilon() * T::lit(16.0)) * norm;
    let mut converged = norm == T::zero();

    for _ in 0..MAX_SWEEPS {
        if converged || off_diagonal_norm(&w) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&w) > target {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort: equal values keep their original (lowest-index-first) order.
    order.sort_by(|&i, &j| w[(j, j)].re.partial_cmp(&w[(i, i)].re).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let vectors = v.select_columns(&order);
    Ok(EigenSpectrum { values, vectors })
}

/// Annihilates `w[p][q]` with a complex Jacobi rotation and accumulates it
/// into `v`.
fn rotate<T: Real>(w: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = w[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    let hundred_g = T::lit(100.0) * g;
    if app.abs() + hundred_g == app.abs() && aqq.abs() + hundred_g == aqq.abs() {
        w[(p, q)] = Complex::new(T::zero(), T::zero());
        w[(q, p)] = Complex::new(T::zero(), T::zero());
        return;
    }

    let phase = apq / g;
    let tau = (aqq - app) / (g + g);
    let t = if tau == T::zero() {
        T::one()
    } else if tau.abs() > T::lit(1e150) {
        T::one() / (tau + tau)
    } else {
        tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let pc = phase.conj();

    // Columns: col_p <- c col_p - s conj(e) col_q, col_q <- s col_p + c conj(e) col_q.
    let n = w.rows();
    for r in 0..n {
        let x = w[(r, p)];
        let y = w[(r, q)] * pc;
        w[(r, p)] = x * c - y * s;
        w[(r, q)] = x * s + y * c;
    }
    // Rows get the conjugate coefficients.
    for k in 0..n {
        let x = w[(p, k)];
        let y = w[(q, k)] * phase;
        w[(p, k)] = x * c - y * s;
        w[(q, k)] = x * s + y * c;
    }
    w[(p, p)] = Complex::new(app - t * g, T::zero());
    w[(q, q)] = Complex::new(aqq + t * g, T::zero());
    w[(p, q)] = Complex::new(T::zero(), T::zero());
    w[(q, p)] = Complex::new(T::zero(), T::zero());

    for r in 0..v.rows() {
        let x = v[(r, p)];
        let y = v[(r, q)] * pc;
        v[(r, p)] = x * c - y * s;
        v[(r, q)] = x * s + y * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn orthonormality_error(v: &ComplexMatrix<f64>) -> f64 {
        v.adjoint_mul(v).max_abs_diff(&ComplexMatrix::identity(v.cols()))
    }

    #[test]
    fn identity_spectrum() {
        let e = eig_hermitian(&ComplexMatrix::<f64>::identity(3), 1e-11).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        assert!(orthonormality_error(&e.vectors) < 1e-12);
    }

    #[test]
    fn diagonal_is_sorted_with_permuted_identity() {
        let a = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(-1.0, 0.0), c(5.0, 0.0)]);
        let e = eig_hermitian(&a, 1e-11).unwrap();
        assert_eq!(e.values, vec![5.0, 2.0, -1.0]);
        let expected = ComplexMatrix::<f64>::identity(3).select_columns(&[2, 0, 1]);
        assert!(e.vectors.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn two_by_two_characteristic_polynomial() {
        // λ² − 4λ + 3 = 0
        let a = ComplexMatrix::new(2, 2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)]).unwrap();
        let e = eig_hermitian(&a, 1e-11).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
        assert!(e.reconstruct().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn ties_keep_lowest_original_index_first() {
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(3.0, 0.0), c(1.0, 0.0)]);
        let e = eig_hermitian(&a, 1e-11).unwrap();
        let expected = ComplexMatrix::<f64>::identity(3).select_columns(&[1, 0, 2]);
        assert!(e.vectors.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let r = eig_hermitian(&ComplexMatrix::<f64>::zeros(2, 3), 1e-11);
        assert!(matches!(r, Err(Error::NonSquare { rows: 2, cols: 3 })));
        let a = ComplexMatrix::new(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(eig_hermitian(&a, 1e-11), Err(Error::NonHermitianInput { .. })));
    }

    #[test]
    fn zero_matrix() {
        let e = eig_hermitian(&ComplexMatrix::<f64>::zeros(4, 4), 1e-11).unwrap();
        assert!(e.values.iter().all(|&v| v == 0.0));
        assert!(orthonormality_error(&e.vectors) < 1e-15);
    }

    #[test]
    fn single_precision_small_case() {
        let a = ComplexMatrix::new(
            2,
            2,
            vec![Complex::new(2.0f32, 0.0), Complex::new(0.0, 1.0), Complex::new(0.0, -1.0), Complex::new(2.0, 0.0)],
        )
        .unwrap();
        let e = eig_hermitian(&a, f32::tol(1e-11)).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-5);
        assert!((e.values[1] - 1.0).abs() < 1e-5);
    }
}
