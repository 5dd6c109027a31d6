#![allow(dead_code)]

use losmimo_core::{channel, geometry, ArraySpec, ChannelParams, Layout, Matrix, Params, Side};

pub const WAVELENGTH: f64 = 0.010707;
pub const DISTANCE: f64 = 50.0;

pub struct Scenario {
    pub params: Params,
    pub spec: ArraySpec<f64>,
    pub tx: Layout,
    pub rx: Layout,
    pub h: Matrix,
}

/// Square `n×n` arrays on both sides at the optimal spacing for `ns_axis`
/// streams per axis.
pub fn optimal(n: usize, ns_axis: usize, distance: f64) -> Scenario {
    let params = ChannelParams::new(WAVELENGTH, distance).unwrap();
    let sol = geometry::optimal_spacing(n, n, ns_axis, WAVELENGTH, distance, 1.0).unwrap();
    with_spec(params, ArraySpec::parallel(n, n, sol.d_t, sol.d_t))
}

pub fn with_spec(params: Params, spec: ArraySpec<f64>) -> Scenario {
    let tx = geometry::build_layout(&spec, Side::Tx, params.distance).unwrap();
    let rx = geometry::build_layout(&spec, Side::Rx, params.distance).unwrap();
    let h = channel::exact_channel(&tx, &rx, &params).unwrap();
    Scenario { params, spec, tx, rx, h }
}
