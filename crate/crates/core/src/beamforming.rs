//! Fully-digital and hybrid (analog + baseband) beam focusing.
//!
//! Power convention: a Tx hybrid precoder `F = F_RF F_BB` is scaled to
//! `‖F‖_F = 1` and evaluated with [`rate_with_prefactor`] at `c = snr`. The
//! uniform digital precoder keeps orthonormal columns and is evaluated with
//! `c = snr / ns`; both spend the same total power.

use num_complex::Complex;

use crate::channel::{rx_phase_diagonal, tx_phase_diagonal, ChannelParams};
use crate::error::{Error, Result};
use crate::geometry::{AntennaLayout, Side};
use crate::linalg::{dft_matrix, least_squares, svd, ComplexMatrix, SVD_RANK_THRESHOLD};
use crate::scalar::{cis, Real};
use crate::spectral::{rate, rate_with_prefactor, water_filling, PowerAllocation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerMode<T: Real> {
    Uniform,
    WaterFill { p_total: T, gain_over_noise: T },
}

/// SVD precoder and combiner.
#[derive(Debug, Clone)]
pub struct DigitalBeamformer<T: Real> {
    /// `M × ns`; orthonormal columns for uniform power, columns scaled by
    /// `√(p_i / P_t)` under water-filling.
    pub precoder: ComplexMatrix<T>,
    /// `N × ns`, orthonormal columns.
    pub combiner: ComplexMatrix<T>,
    pub powers: Option<PowerAllocation<T>>,
    pub singular_values: Vec<T>,
    /// Fewer than `ns` singular values exceed the rank threshold.
    pub rank_deficient: bool,
}

impl<T: Real> DigitalBeamformer<T> {
    pub fn streams(&self) -> usize {
        self.precoder.cols()
    }

    /// Precoder scaled to unit Frobenius norm.
    pub fn normalized_precoder(&self) -> ComplexMatrix<T> {
        match self.powers {
            Some(_) => self.precoder.clone(),
            None => self.precoder.scale(T::one() / T::from_count(self.streams()).sqrt()),
        }
    }

    /// Same singular vectors with water-filled column powers. Only valid on a
    /// uniform-power beamformer.
    pub fn water_filled(&self, p_total: T, gain_over_noise: T) -> Result<Self> {
        if self.powers.is_some() {
            return Err(Error::InvalidParameter("beamformer is already water-filled".into()));
        }
        let eigs: Vec<T> = self.singular_values.iter().map(|&v| v * v).collect();
        let alloc = water_filling(&eigs, p_total, gain_over_noise)?;
        let scale: Vec<Complex<T>> =
            alloc.powers.iter().map(|&p| Complex::new((p / p_total).sqrt(), T::zero())).collect();
        Ok(Self { precoder: self.precoder.scale_cols(&scale), powers: Some(alloc), ..self.clone() })
    }

    pub fn rate(&self, h: &ComplexMatrix<T>, snr: T) -> Result<T> {
        match self.powers {
            Some(_) => rate_with_prefactor(h, &self.precoder, &self.combiner, snr),
            None => rate(h, &self.precoder, &self.combiner, snr, self.streams()),
        }
    }
}

pub fn digital_svd<T: Real>(h: &ComplexMatrix<T>, ns: usize, power: PowerMode<T>) -> Result<DigitalBeamformer<T>> {
    let limit = h.rows().min(h.cols());
    if ns == 0 {
        return Err(Error::InvalidParameter("stream count must be positive".into()));
    }
    if ns > limit {
        return Err(Error::StreamExceedsArray { streams: ns, limit });
    }
    let s = svd(h)?;
    let singular_values: Vec<T> = s.singular_values[..ns].to_vec();
    let cut = T::tol(SVD_RANK_THRESHOLD) * s.singular_values[0];
    let rank_deficient = singular_values.iter().filter(|&&v| v > cut).count() < ns;
    if rank_deficient {
        log::warn!("channel supports fewer than {ns} streams above the rank threshold");
    }
    let uniform = DigitalBeamformer {
        precoder: s.right.leading_columns(ns),
        combiner: s.left.leading_columns(ns),
        powers: None,
        singular_values,
        rank_deficient,
    };
    match power {
        PowerMode::Uniform => Ok(uniform),
        PowerMode::WaterFill { p_total, gain_over_noise } => uniform.water_filled(p_total, gain_over_noise),
    }
}

fn dictionary<T: Real>(phases: &[Complex<T>], nv: usize, nh: usize) -> Result<ComplexMatrix<T>> {
    if nv * nh != phases.len() {
        return Err(Error::DimensionMismatch(format!("{nv}x{nh} grid for {} antennas", phases.len())));
    }
    let omega = dft_matrix::<T>(nv).kron(&dft_matrix(nh));
    let conj: Vec<_> = phases.iter().map(|z| z.conj()).collect();
    Ok(omega.adjoint().scale_rows(&conj))
}

/// `D_t* (Ω_v ⊗ Ω_h)*`, the asymptotic right singular basis.
pub fn dictionary_tx<T: Real>(
    layout: &AntennaLayout<T>,
    params: &ChannelParams<T>,
    nv: usize,
    nh: usize,
) -> Result<ComplexMatrix<T>> {
    dictionary(&tx_phase_diagonal(layout, params), nv, nh)
}

/// `D_r* (Ω_v ⊗ Ω_h)*`, the asymptotic left singular basis.
pub fn dictionary_rx<T: Real>(
    layout: &AntennaLayout<T>,
    params: &ChannelParams<T>,
    nv: usize,
    nh: usize,
) -> Result<ComplexMatrix<T>> {
    dictionary(&rx_phase_diagonal(layout, params), nv, nh)
}

/// Analog matrix with constant-modulus entries followed by a baseband stage.
#[derive(Debug, Clone)]
pub struct HybridBeamformer<T: Real> {
    pub analog: ComplexMatrix<T>,
    pub baseband: ComplexMatrix<T>,
    pub side: Side,
    pub n_rf: usize,
}

impl<T: Real> HybridBeamformer<T> {
    fn new(analog: ComplexMatrix<T>, baseband: ComplexMatrix<T>, side: Side) -> Self {
        let n_rf = analog.cols();
        let mut bf = Self { analog, baseband, side, n_rf };
        if side == Side::Tx {
            let norm = bf.combined().frobenius_norm();
            if norm > T::zero() {
                bf.baseband = bf.baseband.scale(T::one() / norm);
            }
        }
        bf
    }

    pub fn streams(&self) -> usize {
        self.baseband.cols()
    }

    /// `analog · baseband`.
    pub fn combined(&self) -> ComplexMatrix<T> {
        self.analog.matmul(&self.baseband)
    }

    /// `(max − min) / max` of the analog entry moduli.
    pub fn modulus_spread(&self) -> T {
        let mods = self.analog.as_slice().iter().map(|z| z.norm());
        let (lo, hi) = mods.fold((T::infinity(), T::zero()), |(lo, hi), m| (lo.min(m), hi.max(m)));
        if hi == T::zero() {
            T::zero()
        } else {
            (hi - lo) / hi
        }
    }

    pub fn is_constant_modulus(&self, tol: T) -> bool {
        self.modulus_spread() <= tol
    }
}

/// Rate of a hybrid precoder/combiner pair under the normalized convention.
pub fn hybrid_rate<T: Real>(
    h: &ComplexMatrix<T>,
    tx: &HybridBeamformer<T>,
    rx: &HybridBeamformer<T>,
    snr: T,
) -> Result<T> {
    rate_with_prefactor(h, &tx.combined(), &rx.combined(), snr)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColumnSelection {
    /// Columns `0..ns` in dictionary order.
    FirstColumns,
    /// Tx columns with the largest `‖H f_k‖`; each is paired with the unused
    /// Rx column it couples to most strongly.
    #[default]
    GainRanked,
}

/// Gains closer than this fraction of the largest gain rank as ties.
pub const GAIN_TIE_TOL: f64 = 1e-9;

/// Indices of the `count` columns of `dict` with the largest `‖A · d_k‖`,
/// strongest first. Gains equal up to [`GAIN_TIE_TOL`] keep index order, so
/// symmetric spectra select the same columns on every platform.
pub fn rank_columns<T: Real>(a: &ComplexMatrix<T>, dict: &ComplexMatrix<T>, count: usize) -> Vec<usize> {
    let gains = a.matmul(dict).column_norms();
    let top = gains.iter().copied().fold(T::zero(), T::max);
    let step = if top > T::zero() { top * T::tol(GAIN_TIE_TOL) } else { T::one() };
    let key = |k: usize| (gains[k] / step).round().to_i64().unwrap_or(0);
    let mut idx: Vec<usize> = (0..dict.cols()).collect();
    idx.sort_by_key(|&k| std::cmp::Reverse(key(k)));
    idx.truncate(count);
    idx
}

/// For each beam (column of `beams`) in order, the unused column of `dict`
/// with the largest coupling `|d_k* b_j|`.
fn match_columns<T: Real>(beams: &ComplexMatrix<T>, dict: &ComplexMatrix<T>) -> Vec<usize> {
    let coupling = dict.adjoint_mul(beams);
    let mut used = vec![false; dict.cols()];
    let mut picked = Vec::with_capacity(beams.cols());
    for j in 0..beams.cols() {
        let top = (0..dict.cols()).map(|k| coupling[(k, j)].norm()).fold(T::zero(), T::max);
        let step = if top > T::zero() { top * T::tol(GAIN_TIE_TOL) } else { T::one() };
        let best = (0..dict.cols())
            .filter(|&k| !used[k])
            .max_by_key(|&k| ((coupling[(k, j)].norm() / step).round().to_i64().unwrap_or(0), std::cmp::Reverse(k)))
            .expect("dictionary has at least as many columns as beams");
        used[best] = true;
        picked.push(best);
    }
    picked
}

/// Closed-form DFT hybrid beamformer: `ns` dictionary columns as the analog
/// stage and a scaled identity as the baseband.
pub fn asymptotic_hybrid<T: Real>(
    tx_dict: &ComplexMatrix<T>,
    rx_dict: &ComplexMatrix<T>,
    h: &ComplexMatrix<T>,
    ns: usize,
    selection: ColumnSelection,
) -> Result<(HybridBeamformer<T>, HybridBeamformer<T>)> {
    if h.cols() != tx_dict.rows() || h.rows() != rx_dict.rows() {
        return Err(Error::DimensionMismatch("dictionaries do not match the channel".into()));
    }
    let available = tx_dict.cols().min(rx_dict.cols());
    if ns == 0 || ns > available {
        return Err(Error::StreamExceedsArray { streams: ns, limit: available });
    }
    let (tx_idx, rx_idx) = match selection {
        ColumnSelection::FirstColumns => ((0..ns).collect(), (0..ns).collect()),
        ColumnSelection::GainRanked => {
            let tx_idx = rank_columns(h, tx_dict, ns);
            let rx_idx = match_columns(&h.matmul(&tx_dict.select_columns(&tx_idx)), rx_dict);
            (tx_idx, rx_idx)
        }
    };
    let eye = ComplexMatrix::identity(ns);
    Ok((
        HybridBeamformer::new(tx_dict.select_columns(&tx_idx), eye.clone(), Side::Tx),
        HybridBeamformer::new(rx_dict.select_columns(&rx_idx), eye, Side::Rx),
    ))
}

/// OMP output with its per-iteration diagnostics.
#[derive(Debug, Clone)]
pub struct OmpResult<T: Real> {
    pub beamformer: HybridBeamformer<T>,
    /// Dictionary columns in selection order.
    pub selected: Vec<usize>,
    /// `‖target − F_RF F_BB‖_F` after each iteration.
    pub residual_norms: Vec<T>,
}

/// Sparse reconstruction of `target` from `n_rf` dictionary columns.
///
/// Each iteration picks the unused column with the largest correlation to the
/// residual, refits the baseband by least squares and renormalizes the
/// residual by its squared Frobenius norm.
pub fn omp_hybrid<T: Real>(
    target: &ComplexMatrix<T>,
    dictionary: &ComplexMatrix<T>,
    n_rf: usize,
    side: Side,
) -> Result<OmpResult<T>> {
    if target.rows() != dictionary.rows() {
        return Err(Error::DimensionMismatch(format!(
            "target has {} rows, dictionary {}",
            target.rows(),
            dictionary.rows()
        )));
    }
    if n_rf > dictionary.cols() {
        return Err(Error::DictionaryExhausted { requested: n_rf, available: dictionary.cols() });
    }
    if n_rf < target.cols() || n_rf == 0 {
        return Err(Error::InvalidParameter(format!("{n_rf} RF chains cannot carry {} streams", target.cols())));
    }

    let mut residual = target.clone();
    let mut selected = Vec::with_capacity(n_rf);
    let mut used = vec![false; dictionary.cols()];
    let mut residual_norms = Vec::with_capacity(n_rf);
    let mut baseband = ComplexMatrix::zeros(0, target.cols());

    for _ in 0..n_rf {
        let psi = dictionary.adjoint_mul(&residual);
        let mut best: Option<(usize, T)> = None;
        for k in (0..dictionary.cols()).filter(|&k| !used[k]) {
            let score: T = psi.row(k).iter().map(Complex::norm_sqr).sum();
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((k, score));
            }
        }
        let (k, _) = best.expect("n_rf does not exceed the dictionary size");
        used[k] = true;
        selected.push(k);

        let analog = dictionary.select_columns(&selected);
        baseband = least_squares(&analog, target)?;
        let diff = target.sub(&analog.matmul(&baseband));
        let norm_sqr = diff.frobenius_norm_sqr();
        residual_norms.push(norm_sqr.sqrt());
        residual = if norm_sqr > T::zero() { diff.scale(T::one() / norm_sqr) } else { diff };
    }

    Ok(OmpResult {
        beamformer: HybridBeamformer::new(dictionary.select_columns(&selected), baseband, side),
        selected,
        residual_norms,
    })
}

fn phase_only<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let scale = T::one() / T::from_count(m.rows()).sqrt();
    m.map(|z| cis(z.arg()) * scale)
}

fn pad_columns<T: Real>(analog: ComplexMatrix<T>, dict: &ComplexMatrix<T>, gain_source: &ComplexMatrix<T>, n_rf: usize) -> ComplexMatrix<T> {
    let extra = n_rf - analog.cols();
    if extra == 0 {
        return analog;
    }
    let mut cols: Vec<Vec<Complex<T>>> = (0..analog.cols()).map(|c| analog.column(c)).collect();
    for k in rank_columns(gain_source, dict, extra) {
        cols.push(dict.column(k));
    }
    ComplexMatrix::from_columns(&cols).expect("padded columns share a length")
}

/// Baseline: analog stages take the entrywise phase of the digital
/// precoder/combiner, baseband stages come from the SVD of the effective
/// channel `W_RF* H F_RF`.
pub fn phase_extraction_hybrid<T: Real>(
    h: &ComplexMatrix<T>,
    digital: &DigitalBeamformer<T>,
    n_rf: usize,
    tx_dict: &ComplexMatrix<T>,
    rx_dict: &ComplexMatrix<T>,
) -> Result<(HybridBeamformer<T>, HybridBeamformer<T>)> {
    let ns = digital.streams();
    if n_rf < ns {
        return Err(Error::InvalidParameter(format!("{n_rf} RF chains cannot carry {ns} streams")));
    }
    if n_rf > tx_dict.cols().min(rx_dict.cols()) {
        return Err(Error::DictionaryExhausted { requested: n_rf, available: tx_dict.cols().min(rx_dict.cols()) });
    }
    let f_rf = pad_columns(phase_only(&digital.precoder), tx_dict, h, n_rf);
    let w_rf = pad_columns(phase_only(&digital.combiner), rx_dict, &h.adjoint(), n_rf);
    let effective = w_rf.adjoint_mul(&h.matmul(&f_rf));
    let s = svd(&effective)?;
    Ok((
        HybridBeamformer::new(f_rf, s.right.leading_columns(ns), Side::Tx),
        HybridBeamformer::new(w_rf, s.left.leading_columns(ns), Side::Rx),
    ))
}
