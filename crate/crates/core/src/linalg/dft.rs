use super::ComplexMatrix;
use crate::scalar::{cis, Real};

/// Unitary `k`-point DFT matrix, entry `(a, b) = exp(-j2πab/k) / √k`.
///
/// Panics if `k == 0`.
pub fn dft_matrix<T: Real>(k: usize) -> ComplexMatrix<T> {
    assert!(k >= 1, "DFT size must be positive");
    let scale = T::one() / T::from_count(k).sqrt();
    let two_pi_over_k = T::TAU() / T::from_count(k);
    ComplexMatrix::from_fn(k, k, |a, b| {
        // Reduce the exponent modulo k before converting to keep the phase exact.
        let idx = (a * b) % k;
        cis(-two_pi_over_k * T::from_count(idx)) * scale
    })
}
