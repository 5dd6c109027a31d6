//! Spherical-wavefront line-of-sight channels.
//!
//! [`exact_channel`] evaluates the unit-modulus phase matrix from exact
//! element distances. [`fresnel_factors`] splits its second-order expansion
//! into `D_r* H̃ D_t`, where the diagonal factors carry the per-side phase
//! curvature and `H̃` carries the cross terms that govern multiplexing.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{aperture, AntennaLayout, ArraySpec};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cis, Real};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical link parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T: Real> {
    pub wavelength: T,
    pub distance: T,
    pub tx_gain: T,
    pub rx_gain: T,
    pub noise_power: T,
    pub tx_power: T,
}

impl<T: Real> ChannelParams<T> {
    /// Unit gains, unit noise and unit transmit power.
    pub fn new(wavelength: T, distance: T) -> Result<Self> {
        let p = Self {
            wavelength,
            distance,
            tx_gain: T::one(),
            rx_gain: T::one(),
            noise_power: T::one(),
            tx_power: T::one(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn from_frequency_ghz(frequency_ghz: T, distance: T) -> Result<Self> {
        if !(frequency_ghz > T::zero()) {
            return Err(Error::InvalidParameter("carrier frequency must be positive".into()));
        }
        Self::new(T::lit(SPEED_OF_LIGHT) / (frequency_ghz * T::lit(1e9)), distance)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.wavelength, self.distance, self.tx_gain, self.rx_gain, self.noise_power, self.tx_power];
        if all.iter().all(|&v| v > T::zero() && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter("channel parameters must be finite and strictly positive".into()))
        }
    }

    #[inline]
    pub fn wavenumber(&self) -> T {
        T::TAU() / self.wavelength
    }

    /// Path loss `ζ = (√(G_t G_r) λ / (4π D))²`.
    pub fn zeta(&self) -> T {
        let amp = (self.tx_gain * self.rx_gain).sqrt() * self.wavelength / (T::lit(4.0) * T::PI() * self.distance);
        amp * amp
    }

    /// `ζ P_t / σ²`.
    pub fn snr(&self) -> T {
        self.zeta() * self.tx_power / self.noise_power
    }

    /// Whether both apertures are below the link distance (where the
    /// constant-path-loss and second-order phase models are meaningful).
    pub fn fresnel_regime(&self, tx: &AntennaLayout<T>, rx: &AntennaLayout<T>) -> bool {
        aperture(tx).max(aperture(rx)) < self.distance
    }
}

/// Exact channel together with its Fresnel factorization.
#[derive(Debug, Clone)]
pub struct ChannelSet<T: Real> {
    pub h_exact: ComplexMatrix<T>,
    pub h_tilde: ComplexMatrix<T>,
    /// Diagonal of `D_t` (length M).
    pub d_t: Vec<Complex<T>>,
    /// Diagonal of `D_r` (length N).
    pub d_r: Vec<Complex<T>>,
    pub zeta: T,
}

impl<T: Real> ChannelSet<T> {
    /// `D_r* H̃ D_t`.
    pub fn recompose(&self) -> ComplexMatrix<T> {
        let dr_conj: Vec<_> = self.d_r.iter().map(|z| z.conj()).collect();
        self.h_tilde.scale_rows(&dr_conj).scale_cols(&self.d_t)
    }

    /// `‖H − D_r* H̃ D_t‖_F / ‖H‖_F`.
    pub fn fresnel_error(&self) -> T {
        self.h_exact.sub(&self.recompose()).frobenius_norm() / self.h_exact.frobenius_norm()
    }
}

fn distance3<T: Real>(a: &[T; 3], b: &[T; 3]) -> T {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn check_layouts<T: Real>(tx: &AntennaLayout<T>, rx: &AntennaLayout<T>, params: &ChannelParams<T>) -> Result<()> {
    if tx.is_empty() || rx.is_empty() {
        return Err(Error::InvalidParameter("antenna layouts must be non-empty".into()));
    }
    params.validate()
}

/// `[H]_{n,m} = exp(−j 2π/λ · ‖r_n − t_m‖)`; N×M with `‖H‖_F² = NM`.
pub fn exact_channel<T: Real>(
    tx: &AntennaLayout<T>,
    rx: &AntennaLayout<T>,
    params: &ChannelParams<T>,
) -> Result<ComplexMatrix<T>> {
    check_layouts(tx, rx, params)?;
    let k = params.wavenumber();
    Ok(ComplexMatrix::from_fn(rx.len(), tx.len(), |n, m| cis(-k * distance3(&rx.coords[n], &tx.coords[m]))))
}

/// Channel with the second-order (Fresnel) distance
/// `D + r_z − t_z + ((r_x − t_x)² + (r_y − t_y)²) / 2D`.
pub fn taylor_channel<T: Real>(
    tx: &AntennaLayout<T>,
    rx: &AntennaLayout<T>,
    params: &ChannelParams<T>,
) -> Result<ComplexMatrix<T>> {
    check_layouts(tx, rx, params)?;
    let k = params.wavenumber();
    let two_d = params.distance + params.distance;
    Ok(ComplexMatrix::from_fn(rx.len(), tx.len(), |n, m| {
        let r = &rx.coords[n];
        let t = &tx.coords[m];
        let d = r[2] - t[2] + ((r[0] - t[0]).powi(2) + (r[1] - t[1]).powi(2)) / two_d;
        cis(-k * d)
    }))
}

/// Diagonal of `D_t`: `exp(j 2π/λ (t_z − (t_x² + t_y²) / 2D))`.
pub fn tx_phase_diagonal<T: Real>(tx: &AntennaLayout<T>, params: &ChannelParams<T>) -> Vec<Complex<T>> {
    let k = params.wavenumber();
    let two_d = params.distance + params.distance;
    tx.coords.iter().map(|t| cis(k * (t[2] - (t[0] * t[0] + t[1] * t[1]) / two_d))).collect()
}

/// Diagonal of `D_r`: `exp(j 2π/λ (D + r_z + (r_x² + r_y²) / 2D))`, where
/// `D + r_z` is the absolute z-coordinate of the Rx element.
pub fn rx_phase_diagonal<T: Real>(rx: &AntennaLayout<T>, params: &ChannelParams<T>) -> Vec<Complex<T>> {
    let k = params.wavenumber();
    let two_d = params.distance + params.distance;
    rx.coords.iter().map(|r| cis(k * (r[2] + (r[0] * r[0] + r[1] * r[1]) / two_d))).collect()
}

/// `[H̃]_{n,m} = exp(j 2π/λ (r_x t_x + r_y t_y) / D)`.
pub fn fresnel_core<T: Real>(
    tx: &AntennaLayout<T>,
    rx: &AntennaLayout<T>,
    params: &ChannelParams<T>,
) -> ComplexMatrix<T> {
    let k = params.wavenumber();
    ComplexMatrix::from_fn(rx.len(), tx.len(), |n, m| {
        let r = &rx.coords[n];
        let t = &tx.coords[m];
        cis(k * (r[0] * t[0] + r[1] * t[1]) / params.distance)
    })
}

/// Exact channel plus its Fresnel factors `D_t`, `H̃`, `D_r`.
pub fn fresnel_factors<T: Real>(
    tx: &AntennaLayout<T>,
    rx: &AntennaLayout<T>,
    params: &ChannelParams<T>,
) -> Result<ChannelSet<T>> {
    let h_exact = exact_channel(tx, rx, params)?;
    if !params.fresnel_regime(tx, rx) {
        log::warn!("array aperture is not smaller than the link distance; Fresnel factors are unreliable");
    }
    Ok(ChannelSet {
        h_exact,
        h_tilde: fresnel_core(tx, rx, params),
        d_t: tx_phase_diagonal(tx, params),
        d_r: rx_phase_diagonal(rx, params),
        zeta: params.zeta(),
    })
}

/// Vertical and horizontal linear-array channels of a parallel UPA link,
/// `[H_lin]_{n,m} = exp(j 2π/λ · d_r d_t n m / D)`, with
/// `H̃ = H_linv ⊗ H_linh`.
pub fn kron_factor_channel<T: Real>(
    spec_tx: &ArraySpec<T>,
    spec_rx: &ArraySpec<T>,
    params: &ChannelParams<T>,
) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    if !spec_tx.is_parallel() || !spec_rx.is_parallel() {
        return Err(Error::NotParallel);
    }
    spec_tx.validate()?;
    spec_rx.validate()?;
    params.validate()?;
    let k = params.wavenumber();
    let factor = |n_rx: usize, n_tx: usize, d_r: T, d_t: T| {
        let c = k * d_r * d_t / params.distance;
        ComplexMatrix::from_fn(n_rx, n_tx, |n, m| cis(c * T::from_count(n * m)))
    };
    Ok((
        factor(spec_rx.n_v, spec_tx.n_v, spec_rx.d_v, spec_tx.d_v),
        factor(spec_rx.n_h, spec_tx.n_h, spec_rx.d_h, spec_tx.d_h),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramSide {
    /// `H* H` (M×M).
    Tx,
    /// `H H*` (N×N).
    Rx,
}

/// Channel gain matrix.
pub fn gram<T: Real>(h: &ComplexMatrix<T>, side: GramSide) -> Result<ComplexMatrix<T>> {
    if h.is_empty() {
        return Err(Error::InvalidParameter("Gram of an empty channel".into()));
    }
    Ok(match side {
        GramSide::Tx => h.adjoint_mul(h),
        GramSide::Rx => h.mul_adjoint(h),
    })
}

/// `[B(α, K)]_{i,k} = sin(π(i−k)(K+1)/α) / (α sin(π(i−k)/α))`, truncated to
/// `dim × dim`.
///
/// Where `(i−k)/α` is an integer `p` the ratio is replaced by its limit
/// `(−1)^{pK} (K+1)/α`.
pub fn prolate_matrix<T: Real>(alpha: T, k_param: usize, dim: usize) -> Result<ComplexMatrix<T>> {
    if !(alpha > T::zero()) || dim == 0 {
        return Err(Error::InvalidParameter("prolate matrix needs alpha > 0 and dim >= 1".into()));
    }
    let kp1 = T::from_count(k_param + 1);
    let diag = kp1 / alpha;
    let mut b = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for k in 0..dim {
            let v = if i == k {
                diag
            } else {
                let d = T::from_count(i) - T::from_count(k);
                let den = (T::PI() * d / alpha).sin();
                if den.abs() < T::lit(1e-9) {
                    let p = (d / alpha).round().to_i64().unwrap_or(0);
                    if (p * k_param as i64) % 2 == 0 {
                        diag
                    } else {
                        -diag
                    }
                } else {
                    (T::PI() * d * kp1 / alpha).sin() / (alpha * den)
                }
            };
            b[(i, k)] = Complex::new(v, T::zero());
        }
    }
    Ok(b)
}

/// Linear-array gain matrix written through the prolate matrix:
/// `exp(−jπΔ(i−k)(N_rx−1)/N_max) · (N_max/Δ) · [B_{M}(N_max/Δ, N_rx−1)]_{i,k}`.
pub fn prolate_gram<T: Real>(n_rx: usize, m_tx: usize, delta: T, n_max: usize) -> Result<ComplexMatrix<T>> {
    if n_rx == 0 {
        return Err(Error::InvalidParameter("receive array must be non-empty".into()));
    }
    let alpha = T::from_count(n_max) / delta;
    let b = prolate_matrix(alpha, n_rx - 1, m_tx)?;
    let nr1 = T::from_count(n_rx - 1);
    Ok(ComplexMatrix::from_fn(m_tx, m_tx, |i, k| {
        let d = T::from_count(i) - T::from_count(k);
        cis(-T::PI() * delta * d * nr1 / T::from_count(n_max)) * b[(i, k)] * alpha
    }))
}

/// Largest deviation of `g` (an `(nv·nh)`-square matrix in vertical-major
/// order) from a doubly block Toeplitz matrix, i.e. from having entry `(i,k)`
/// depend only on `(i_v − k_v, i_h − k_h)`.
pub fn block_toeplitz_deviation<T: Real>(g: &ComplexMatrix<T>, nv: usize, nh: usize) -> Result<T> {
    let dim = nv * nh;
    if g.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!("expected {dim}x{dim}, got {}x{}", g.rows(), g.cols())));
    }
    let (w_v, w_h) = (2 * nv - 1, 2 * nh - 1);
    let mut reference: Vec<Option<Complex<T>>> = vec![None; w_v * w_h];
    let mut worst = T::zero();
    for i in 0..dim {
        for k in 0..dim {
            let dv = (i / nh) as isize - (k / nh) as isize + nv as isize - 1;
            let dh = (i % nh) as isize - (k % nh) as isize + nh as isize - 1;
            let slot = &mut reference[dv as usize * w_h + dh as usize];
            match slot {
                Some(r) => worst = worst.max((g[(i, k)] - *r).norm()),
                None => *slot = Some(g[(i, k)]),
            }
        }
    }
    Ok(worst)
}
