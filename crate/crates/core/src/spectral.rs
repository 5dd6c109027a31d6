//! Eigenvalue clustering, water-filling and achievable-rate evaluation.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_log_det, dft_matrix, eig_hermitian, ComplexMatrix, EigenSpectrum, DEFAULT_EIG_TOL};
use crate::linalg::hermitian_condition;
use crate::scalar::Real;

/// Combiner Grams `W*W` with a larger condition estimate are rejected.
pub const COMBINER_CONDITION_LIMIT: f64 = 1e12;

/// Spacing data of one array axis, as used by the concentration bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisSpectrum<T: Real> {
    /// `Δ = d_t d_r N_max / (λ D)`.
    pub delta: T,
    pub n_min: usize,
    pub n_max: usize,
    /// Size of the Gram along this axis (transmit element count).
    pub m_dim: usize,
}

impl<T: Real> AxisSpectrum<T> {
    /// `2⌊Δ N_min / 2⌋`.
    pub fn predicted_rank(&self) -> usize {
        let x = self.delta * T::from_count(self.n_min) / T::lit(2.0);
        2 * (x * (T::one() + T::tol(1e-9))).floor().to_usize().unwrap_or(0)
    }

    /// `2 R(N_max, M, Δ, ε)`.
    pub fn transition_bound(&self, eps: T) -> T {
        T::lit(2.0) * transition_band(self.n_max, self.m_dim, self.delta, eps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterReport<T: Real> {
    pub eps: T,
    pub count_near_one: usize,
    pub count_near_zero: usize,
    pub transition_count: usize,
    pub predicted_rank: usize,
    pub transition_bound: T,
}

impl<T: Real> ClusterReport<T> {
    pub fn total(&self) -> usize {
        self.count_near_one + self.count_near_zero + self.transition_count
    }

    pub fn within_bound(&self) -> bool {
        T::from_count(self.transition_count) <= self.transition_bound
    }
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps > T::zero() && eps < T::lit(0.5) {
        Ok(())
    } else {
        Err(Error::BadEpsilon(eps.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `(≥ 1−ε, ≤ ε, strictly between)` counts of `values / normalizer`.
pub fn cluster_counts<T: Real>(values: &[T], normalizer: T, eps: T) -> Result<(usize, usize, usize)> {
    check_eps(eps)?;
    if !(normalizer > T::zero()) {
        return Err(Error::InvalidParameter("cluster normalizer must be positive".into()));
    }
    let mut counts = (0, 0, 0);
    for &v in values {
        let w = v / normalizer;
        if w >= T::one() - eps {
            counts.0 += 1;
        } else if w <= eps {
            counts.1 += 1;
        } else {
            counts.2 += 1;
        }
    }
    Ok(counts)
}

/// Concentration report for a single-axis (linear array) Gram.
///
/// `normalizer` is `N_max / Δ`, the scale at which the leading eigenvalues
/// cluster around one.
pub fn cluster_report<T: Real>(
    spectrum: &EigenSpectrum<T>,
    normalizer: T,
    eps: T,
    axis: &AxisSpectrum<T>,
) -> Result<ClusterReport<T>> {
    let (one, zero, mid) = cluster_counts(&spectrum.values, normalizer, eps)?;
    Ok(ClusterReport {
        eps,
        count_near_one: one,
        count_near_zero: zero,
        transition_count: mid,
        predicted_rank: axis.predicted_rank(),
        transition_bound: axis.transition_bound(eps),
    })
}

/// Concentration report for a planar Gram `G_v ⊗ G_h`, normalized by the
/// cluster centre `NM / N_s`.
///
/// The predicted rank is the product of the per-axis ranks. The transition
/// bound counts every product index with at least one factor outside the
/// per-axis guaranteed clusters: `dim − (M_v − 2R_v)⁺ (M_h − 2R_h)⁺`.
pub fn cluster_report_2d<T: Real>(
    spectrum: &EigenSpectrum<T>,
    normalizer: T,
    eps: T,
    vertical: &AxisSpectrum<T>,
    horizontal: &AxisSpectrum<T>,
) -> Result<ClusterReport<T>> {
    let (one, zero, mid) = cluster_counts(&spectrum.values, normalizer, eps)?;
    let settled = |a: &AxisSpectrum<T>| (T::from_count(a.m_dim) - a.transition_bound(eps)).max(T::zero());
    let dim = T::from_count(vertical.m_dim * horizontal.m_dim);
    Ok(ClusterReport {
        eps,
        count_near_one: one,
        count_near_zero: zero,
        transition_count: mid,
        predicted_rank: vertical.predicted_rank() * horizontal.predicted_rank(),
        transition_bound: dim - settled(vertical) * settled(horizontal),
    })
}

/// Transition-band width
/// `R = (4/π² ln(8M) + 6) ln(16/ε) + 2 [−ln(π/32 · ε (r² − 1)) / ln r]⁺`
/// with `r = N_max / (M Δ)` and `N_max = max(n_i, m_i)`.
///
/// Returns `+∞` when `r ≤ 1`, where the second term has no finite value.
pub fn transition_band<T: Real>(n_i: usize, m_i: usize, delta: T, eps: T) -> T {
    let m = T::from_count(m_i);
    let r = T::from_count(n_i.max(m_i)) / (m * delta);
    if !(r > T::one()) {
        return T::infinity();
    }
    let first = (T::lit(4.0) / (T::PI() * T::PI()) * (T::lit(8.0) * m).ln() + T::lit(6.0)) * (T::lit(16.0) / eps).ln();
    let arg = T::PI() / T::lit(32.0) * eps * (r * r - T::one());
    let second = (-arg.ln() / r.ln()).max(T::zero());
    first + T::lit(2.0) * second
}

/// Water-filling solution.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation<T: Real> {
    pub powers: Vec<T>,
    pub water_level: T,
}

/// Maximizes `Σ ln(1 + g λ_i p_i)` subject to `Σ p_i = p_total`, `p_i ≥ 0`.
pub fn water_filling<T: Real>(eigs: &[T], p_total: T, gain_over_noise: T) -> Result<PowerAllocation<T>> {
    if !(p_total > T::zero()) || !(gain_over_noise > T::zero()) {
        return Err(Error::InvalidParameter("total power and gain must be positive".into()));
    }
    if eigs.iter().any(|&l| !(l >= T::zero()) || !l.is_finite()) {
        return Err(Error::InvalidParameter("eigenvalues must be finite and non-negative".into()));
    }
    let mut order: Vec<usize> = (0..eigs.len()).filter(|&i| eigs[i] > T::zero()).collect();
    if order.is_empty() {
        return Err(Error::AllZeroEigenvalues);
    }
    order.sort_by(|&a, &b| eigs[b].partial_cmp(&eigs[a]).unwrap_or(std::cmp::Ordering::Equal));
    let floor = |i: usize| T::one() / (gain_over_noise * eigs[i]);

    // Shrink the active set until the weakest active channel sits below the level.
    let mut active = order.len();
    let mut level;
    loop {
        let sum: T = order[..active].iter().map(|&i| floor(i)).sum();
        level = (p_total + sum) / T::from_count(active);
        if active == 1 || level > floor(order[active - 1]) {
            break;
        }
        active -= 1;
    }
    let mut powers = vec![T::zero(); eigs.len()];
    for &i in &order[..active] {
        powers[i] = level - floor(i);
    }
    Ok(PowerAllocation { powers, water_level: level })
}

/// `log₂ det(I + c (W*W)⁻¹ W*H F F*H*W)`.
pub fn rate_with_prefactor<T: Real>(
    h: &ComplexMatrix<T>,
    f: &ComplexMatrix<T>,
    w: &ComplexMatrix<T>,
    prefactor: T,
) -> Result<T> {
    if h.cols() != f.rows() || h.rows() != w.rows() {
        return Err(Error::DimensionMismatch(format!(
            "H is {}x{}, F has {} rows, W has {} rows",
            h.rows(),
            h.cols(),
            f.rows(),
            w.rows()
        )));
    }
    let r_w = w.adjoint_mul(w);
    let condition = hermitian_condition(&r_w)?;
    if !(condition <= T::lit(COMBINER_CONDITION_LIMIT)) {
        return Err(Error::SingularCombiner { condition: condition.to_f64().unwrap_or(f64::INFINITY) });
    }
    // det(R + c A A*) / det(R) with A = W*HF.
    let a = w.adjoint_mul(&h.matmul(f));
    let num = r_w.add(&a.mul_adjoint(&a).scale(prefactor));
    let log_det = cholesky_log_det(&num)? - cholesky_log_det(&r_w)?;
    Ok((log_det / T::LN_2()).max(T::zero()))
}

/// Uniform-power rate `log₂ det(I + (snr/ns) (W*W)⁻¹ W*H F F*H*W)`.
pub fn rate<T: Real>(h: &ComplexMatrix<T>, f: &ComplexMatrix<T>, w: &ComplexMatrix<T>, snr: T, ns: usize) -> Result<T> {
    if ns == 0 {
        return Err(Error::InvalidParameter("stream count must be positive".into()));
    }
    rate_with_prefactor(h, f, w, snr / T::from_count(ns))
}

/// `ns log₂(1 + snr n m / ns²)`.
pub fn rate_upper_bound<T: Real>(n: usize, m: usize, ns: usize, snr: T) -> T {
    let ns_f = T::from_count(ns);
    ns_f * (T::one() + snr * T::from_count(n * m) / (ns_f * ns_f)).log2()
}

/// `Σ log₂(1 + snr λ_i / ns)` over the leading `ns` eigenvalues.
pub fn eigen_rate<T: Real>(eigs: &[T], snr: T, ns: usize) -> T {
    let ns_f = T::from_count(ns);
    eigs.iter().take(ns).map(|&l| (T::one() + snr * l.max(T::zero()) / ns_f).log2()).sum()
}

/// Fraction of squared Frobenius mass of `(Ω_v ⊗ Ω_h)* G (Ω_v ⊗ Ω_h)` that
/// lies off the diagonal.
pub fn dft_diag_quality<T: Real>(g: &ComplexMatrix<T>, nv: usize, nh: usize) -> Result<T> {
    let dim = nv * nh;
    if dim == 0 || g.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!("expected {dim}x{dim}, got {}x{}", g.rows(), g.cols())));
    }
    let omega = dft_matrix::<T>(nv).kron(&dft_matrix(nh));
    let q = omega.adjoint_mul(&g.matmul(&omega));
    let total = q.frobenius_norm_sqr();
    if total == T::zero() {
        return Ok(T::zero());
    }
    let diag: T = q.diagonal().iter().map(Complex::norm_sqr).sum();
    Ok(((total - diag) / total).max(T::zero()))
}

/// Sorted-eigenvalue L∞ distance between the Tx Grams of two equally sized
/// channels, divided by `N M`.
pub fn gram_spectrum_gap<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch("channels differ in shape".into()));
    }
    let ea = eig_hermitian(&a.adjoint_mul(a), T::tol(DEFAULT_EIG_TOL))?;
    let eb = eig_hermitian(&b.adjoint_mul(b), T::tol(DEFAULT_EIG_TOL))?;
    let gap = ea.values.iter().zip(&eb.values).map(|(&x, &y)| (x - y).abs()).fold(T::zero(), T::max);
    Ok(gap / T::from_count(a.rows() * a.cols()))
}
