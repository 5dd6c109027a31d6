//! Near-field line-of-sight MIMO between planar arrays.
//!
//! The crate builds spherical-wavefront channels between (possibly rotated)
//! uniform planar arrays, finds the antenna spacing that maximizes spectral
//! efficiency for a target stream count, and designs fully-digital and
//! hybrid beam-focusing matrices. Everything is generic over [`Real`] (`f32`
//! or `f64`); the aliases at the crate root fix `f64`.
//!
//! ```
//! use losmimo_core::{geometry, channel, ArraySpec, ChannelParams, Side};
//!
//! let params = ChannelParams::<f64>::from_frequency_ghz(28.0, 50.0).unwrap();
//! let sol = geometry::optimal_spacing(4, 4, 2, params.wavelength, params.distance, 1.0).unwrap();
//! let spec = ArraySpec::parallel(4, 4, sol.d_t, sol.d_t);
//! let tx = geometry::build_layout(&spec, Side::Tx, params.distance).unwrap();
//! let rx = geometry::build_layout(&spec, Side::Rx, params.distance).unwrap();
//! let h = channel::exact_channel(&tx, &rx, &params).unwrap();
//! assert!((h.frobenius_norm_sqr() - 256.0).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beamforming;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod scalar;
pub mod spectral;

pub use beamforming::{ColumnSelection, DigitalBeamformer, HybridBeamformer, OmpResult, PowerMode};
pub use channel::{ChannelParams, ChannelSet, GramSide};
pub use error::{Error, Result};
pub use geometry::{AntennaLayout, ArraySpec, LayoutKind, Side, SpacingSolution};
pub use linalg::{ComplexMatrix, EigenSpectrum, SvdResult};
pub use scalar::Real;
pub use spectral::{AxisSpectrum, ClusterReport, PowerAllocation};

pub type C64 = num_complex::Complex<f64>;
pub type Matrix = ComplexMatrix<f64>;
pub type Spectrum = EigenSpectrum<f64>;
pub type Params = ChannelParams<f64>;
pub type Spec = ArraySpec<f64>;
pub type Layout = AntennaLayout<f64>;
pub type Digital = DigitalBeamformer<f64>;
pub type Hybrid = HybridBeamformer<f64>;
