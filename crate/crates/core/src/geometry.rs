//! Planar array layouts, apertures and the spectral-efficiency-optimal spacing.
//!
//! Antenna `m` of an `n_v × n_h` array sits at grid position
//! `(m_v, m_h) = (m / n_h, m % n_h)`, so vertical is the slow index. With that
//! order the parallel-array channel factors as `H_v ⊗ H_h`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Smallest admissible `|cos θ cos φ|` for a sheared (parallelogram) layout.
pub const DEGENERATE_PLANE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LayoutKind {
    /// Grid whose xy-projection is the parallel optimum, sheared along z into
    /// the rotated array plane.
    ParallelogramOptimal,
    /// Flat uniform grid rigidly rotated by `(θ, φ)`.
    RotatedUpa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Tx,
    Rx,
}

/// Logical description of one planar array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySpec<T: Real> {
    pub n_v: usize,
    pub n_h: usize,
    /// Vertical spacing in meters.
    pub d_v: T,
    /// Horizontal spacing in meters.
    pub d_h: T,
    /// Rotation θ in radians.
    pub theta: T,
    /// Rotation φ in radians.
    pub phi: T,
    pub layout_kind: LayoutKind,
}

impl<T: Real> ArraySpec<T> {
    /// Unrotated array; both layout kinds coincide.
    pub fn parallel(n_v: usize, n_h: usize, d_v: T, d_h: T) -> Self {
        Self { n_v, n_h, d_v, d_h, theta: T::zero(), phi: T::zero(), layout_kind: LayoutKind::ParallelogramOptimal }
    }

    pub fn with_rotation(mut self, theta: T, phi: T) -> Self {
        self.theta = theta;
        self.phi = phi;
        self
    }

    pub fn with_layout(mut self, kind: LayoutKind) -> Self {
        self.layout_kind = kind;
        self
    }

    pub fn num_elements(&self) -> usize {
        self.n_v * self.n_h
    }

    pub fn is_parallel(&self) -> bool {
        self.theta == T::zero() && self.phi == T::zero()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_v == 0 || self.n_h == 0 {
            return Err(Error::InvalidParameter(format!("array must have elements, got {}x{}", self.n_v, self.n_h)));
        }
        if !(self.d_v > T::zero() && self.d_h > T::zero()) {
            return Err(Error::InvalidParameter("antenna spacing must be positive".into()));
        }
        if !self.theta.is_finite() || !self.phi.is_finite() {
            return Err(Error::InvalidParameter("rotation angles must be finite".into()));
        }
        if self.layout_kind == LayoutKind::ParallelogramOptimal {
            let tilt = (self.theta.cos() * self.phi.cos()).abs();
            if tilt <= T::lit(DEGENERATE_PLANE_TOL) {
                return Err(Error::DegeneratePlane(tilt.to_f64().unwrap_or(0.0)));
            }
        }
        Ok(())
    }
}

/// Realized antenna coordinates of one side of the link, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaLayout<T: Real> {
    /// Column `m` of the 3×K position matrix, as `[x, y, z]`.
    pub coords: Vec<[T; 3]>,
    pub side: Side,
    /// Link distance `D`; already included in the z-coordinates of Rx layouts.
    pub link_distance: T,
    pub n_v: usize,
    pub n_h: usize,
}

impl<T: Real> AntennaLayout<T> {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// `(m_v, m_h)` grid indices of antenna `m`.
    pub fn grid_index(&self, m: usize) -> (usize, usize) {
        (m / self.n_h, m % self.n_h)
    }

    /// z-coordinates measured from the array's own reference plane
    /// (`z` for Tx, `z − D` for Rx).
    pub fn local_z(&self, m: usize) -> T {
        match self.side {
            Side::Tx => self.coords[m][2],
            Side::Rx => self.coords[m][2] - self.link_distance,
        }
    }

    /// Layout built directly from coordinates (e.g. test fixtures). The grid
    /// shape is taken as `1 × K`.
    pub fn from_coords(coords: Vec<[T; 3]>, side: Side, link_distance: T) -> Self {
        let n_h = coords.len();
        Self { coords, side, link_distance, n_v: 1, n_h }
    }
}

/// Antenna spacing that realizes a requested per-axis stream count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingSolution<T: Real> {
    pub d_t: T,
    pub d_r: T,
    /// `Δ = d_t d_r N_max / (λ D)`.
    pub delta: T,
    /// `2⌊d_t d_r N M / (2 λ D)⌋`.
    pub achieved_streams: usize,
}

/// Solves `2⌊d_t d_r N_i M_i / (2λD)⌋ = N_{s,i}` with the product placed at
/// the lower edge of the floor interval and `d_t / d_r = split`.
pub fn optimal_spacing<T: Real>(
    n_i: usize,
    m_i: usize,
    ns_i: usize,
    wavelength: T,
    distance: T,
    split: T,
) -> Result<SpacingSolution<T>> {
    if ns_i == 0 {
        return Err(Error::InvalidParameter("stream count must be at least 2".into()));
    }
    if ns_i % 2 == 1 {
        return Err(Error::OddStreamCount(ns_i));
    }
    let limit = n_i.min(m_i);
    if ns_i > limit {
        return Err(Error::StreamExceedsArray { streams: ns_i, limit });
    }
    if !(wavelength > T::zero() && distance > T::zero()) {
        return Err(Error::InvalidParameter("wavelength and distance must be positive".into()));
    }
    if !(split > T::zero() && split <= T::one()) {
        return Err(Error::InvalidParameter("split must lie in (0, 1]".into()));
    }

    let nm = T::from_count(n_i * m_i);
    let product = T::from_count(ns_i) * wavelength * distance / nm;
    let d_t = (product * split).sqrt();
    let d_r = (product / split).sqrt();
    let delta = d_t * d_r * T::from_count(n_i.max(m_i)) / (wavelength * distance);
    Ok(SpacingSolution { d_t, d_r, delta, achieved_streams: attained_streams(d_t, d_r, n_i, m_i, wavelength, distance) })
}

/// `2⌊d_t d_r N M / (2λD)⌋`, with a relative guard so that a product sitting
/// exactly on an interval edge is not lost to rounding.
pub fn attained_streams<T: Real>(d_t: T, d_r: T, n_i: usize, m_i: usize, wavelength: T, distance: T) -> usize {
    let x = d_t * d_r * T::from_count(n_i * m_i) / (T::lit(2.0) * wavelength * distance);
    let guarded = x * (T::one() + T::tol(1e-9));
    2 * guarded.floor().to_usize().unwrap_or(0)
}

/// Antenna positions for `spec`; Rx layouts are offset by `distance` along z.
pub fn build_layout<T: Real>(spec: &ArraySpec<T>, side: Side, distance: T) -> Result<AntennaLayout<T>> {
    spec.validate()?;
    let k = spec.num_elements();
    let (st, ct) = spec.theta.sin_cos();
    let (sp, cp) = spec.phi.sin_cos();
    let mut coords = Vec::with_capacity(k);

    for m in 0..k {
        let (m_v, m_h) = (m / spec.n_h, m % spec.n_h);
        let x = spec.d_v * T::from_count(m_v);
        let y = spec.d_h * T::from_count(m_h);
        let p = match spec.layout_kind {
            LayoutKind::ParallelogramOptimal => {
                let shear = ct * sp * x + st * y;
                match side {
                    Side::Tx => [x, y, shear / -(ct * cp)],
                    Side::Rx => [x, y, distance + shear / (ct * cp)],
                }
            }
            LayoutKind::RotatedUpa => {
                // R = R_y(φ) R_x(−θ) applied to (x, y, 0).
                let (xr, yr, zr) = (x, y * ct, -(y * st));
                let (xr, zr) = (xr * cp + zr * sp, -xr * sp + zr * cp);
                match side {
                    Side::Tx => [xr, yr, zr],
                    Side::Rx => [xr, yr, distance - zr],
                }
            }
        };
        coords.push(p);
    }
    Ok(AntennaLayout { coords, side, link_distance: distance, n_v: spec.n_v, n_h: spec.n_h })
}

/// Largest distance between two elements (0 for a single antenna).
pub fn aperture<T: Real>(layout: &AntennaLayout<T>) -> T {
    let c = &layout.coords;
    let mut best = T::zero();
    for i in 0..c.len() {
        for j in (i + 1)..c.len() {
            let d2 = (0..3).map(|a| (c[i][a] - c[j][a]).powi(2)).sum::<T>();
            best = best.max(d2);
        }
    }
    best.sqrt()
}

/// `L_t L_r ≥ 2 √N_s λ D`.
pub fn aperture_feasible<T: Real>(l_t: T, l_r: T, ns: usize, wavelength: T, distance: T) -> bool {
    l_t * l_r >= aperture_threshold(ns, wavelength, distance)
}

/// Minimum aperture product `2 √N_s λ D`.
pub fn aperture_threshold<T: Real>(ns: usize, wavelength: T, distance: T) -> T {
    T::lit(2.0) * T::from_count(ns).sqrt() * wavelength * distance
}

/// Largest residual of the array-plane equation
/// `cosθ sinφ x + sinθ y ± cosθ cosφ z_local = 0` (`+` for Tx, `−` for Rx).
pub fn plane_residual<T: Real>(layout: &AntennaLayout<T>, theta: T, phi: T) -> T {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let sign = match layout.side {
        Side::Tx => T::one(),
        Side::Rx => -T::one(),
    };
    (0..layout.len())
        .map(|m| {
            let [x, y, _] = layout.coords[m];
            (ct * sp * x + st * y + sign * ct * cp * layout.local_z(m)).abs()
        })
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    #[test]
    fn spacing_desk_example() {
        let s = optimal_spacing(16, 16, 4, 0.010707, 50.0, 1.0).unwrap();
        let expected = (4.0f64 * 0.010707 * 50.0 / 256.0).sqrt();
        assert!((s.d_t - expected).abs() < 1e-15);
        assert!((s.d_t - 0.09146).abs() < 5e-6);
        assert_eq!(s.d_t, s.d_r);
        assert_eq!(s.achieved_streams, 4);
        assert!((s.delta - 0.25).abs() < 1e-12);
    }

    #[test]
    fn spacing_hand_example() {
        let s = optimal_spacing(2, 2, 2, 0.01, 10.0, 1.0).unwrap();
        assert!((s.d_t - 0.05f64.sqrt()).abs() < 1e-15);
        assert!((s.d_t - 0.2236).abs() < 1e-4);
        assert_eq!(s.achieved_streams, 2);
    }

    #[test]
    fn spacing_split_apportions_product() {
        let s = optimal_spacing(8, 8, 4, 0.01f64, 20.0, 0.5).unwrap();
        assert!((s.d_t / s.d_r - 0.5).abs() < 1e-12);
        assert!((s.d_t * s.d_r - 4.0 * 0.01 * 20.0 / 64.0).abs() < 1e-15);
        assert!(optimal_spacing(8, 8, 4, 0.01, 20.0, 1.5).is_err());
    }

    #[test]
    fn spacing_errors() {
        assert_eq!(optimal_spacing(16, 16, 3, 0.01, 50.0, 1.0), Err(Error::OddStreamCount(3)));
        assert_eq!(
            optimal_spacing(4, 8, 6, 0.01, 50.0, 1.0),
            Err(Error::StreamExceedsArray { streams: 6, limit: 4 })
        );
        assert!(optimal_spacing(4, 4, 0, 0.01, 50.0, 1.0).is_err());
    }

    #[test]
    fn parallel_layout_is_flat() {
        let spec = ArraySpec::parallel(3, 4, 0.1, 0.2);
        let tx = build_layout(&spec, Side::Tx, 50.0).unwrap();
        let rx = build_layout(&spec, Side::Rx, 50.0).unwrap();
        assert!(tx.coords.iter().all(|p| p[2] == 0.0));
        assert!(rx.coords.iter().all(|p| p[2] == 50.0));
        assert_eq!(tx.coords[5], [0.1, 0.2, 0.0]);
        assert_eq!(tx.grid_index(5), (1, 1));
    }

    #[test]
    fn sheared_tx_element_by_hand() {
        let spec = ArraySpec::parallel(2, 1, 0.1, 0.1).with_rotation(0.0, FRAC_PI_6);
        let tx = build_layout(&spec, Side::Tx, 50.0).unwrap();
        let [x, y, z] = tx.coords[1];
        assert!((x - 0.1).abs() < 1e-15 && y == 0.0);
        assert!((z + 0.1 * FRAC_PI_6.tan()).abs() < 1e-15);
        assert!((z + 0.05774).abs() < 1e-5);
    }

    #[test]
    fn degenerate_plane_rejected() {
        let spec = ArraySpec::parallel(2, 2, 0.1, 0.1).with_rotation(FRAC_PI_2, FRAC_PI_2);
        assert!(matches!(build_layout(&spec, Side::Tx, 10.0), Err(Error::DegeneratePlane(_))));
        // The rigid-rotation baseline has no such restriction.
        let upa = spec.with_layout(LayoutKind::RotatedUpa);
        assert!(build_layout(&upa, Side::Tx, 10.0).is_ok());
    }

    #[test]
    fn both_kinds_agree_without_rotation() {
        let a = ArraySpec::parallel(3, 5, 0.07, 0.03);
        let b = a.with_layout(LayoutKind::RotatedUpa);
        for side in [Side::Tx, Side::Rx] {
            assert_eq!(build_layout(&a, side, 30.0).unwrap(), build_layout(&b, side, 30.0).unwrap());
        }
    }

    #[test]
    fn rotated_upa_lies_in_the_same_plane() {
        let spec = ArraySpec::parallel(4, 3, 0.1, 0.1).with_rotation(0.3, -0.4).with_layout(LayoutKind::RotatedUpa);
        for side in [Side::Tx, Side::Rx] {
            let l = build_layout(&spec, side, 20.0).unwrap();
            assert!(plane_residual(&l, 0.3, -0.4) < 1e-14);
        }
    }

    #[test]
    fn aperture_examples() {
        let single = build_layout(&ArraySpec::parallel(1, 1, 0.1, 0.1), Side::Tx, 1.0).unwrap();
        assert_eq!(aperture(&single), 0.0);
        let pair = build_layout(&ArraySpec::parallel(1, 2, 0.5f64, 0.5), Side::Tx, 1.0).unwrap();
        assert!((aperture(&pair) - 0.5).abs() < 1e-15);
        let grid = build_layout(&ArraySpec::parallel(4, 4, 0.1, 0.1), Side::Tx, 1.0).unwrap();
        assert!((aperture(&grid) - 0.3 * 2f64.sqrt()).abs() < 1e-12);
        assert!((aperture(&grid) - 0.42426).abs() < 1e-5);
    }

    #[test]
    fn aperture_feasibility_examples() {
        let (lam, d) = (0.010707f64, 50.0);
        assert!((aperture_threshold(16, lam, d) - 4.2828).abs() < 1e-9);
        assert!(aperture_feasible(2.1, 2.1, 16, lam, d));
        assert!(!aperture_feasible(2.0, 2.0, 16, lam, d));
        let t = aperture_threshold(9, 0.5, 2.0);
        assert!(aperture_feasible(t, 1.0, 9, 0.5, 2.0));
    }
}
