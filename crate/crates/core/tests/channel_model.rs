mod common;

use losmimo_core::channel::{
    block_toeplitz_deviation, exact_channel, fresnel_factors, gram, kron_factor_channel, prolate_gram, prolate_matrix,
    taylor_channel, GramSide,
};
use losmimo_core::linalg::eig_hermitian;
use losmimo_core::spectral::gram_spectrum_gap;
use losmimo_core::{geometry, ArraySpec, ChannelParams};

use common::{optimal, with_spec, WAVELENGTH};

#[test]
fn desk_scale_recomposition_matches_taylor_channel() {
    let s = optimal(8, 4, 50.0);
    let set = fresnel_factors(&s.tx, &s.rx, &s.params).unwrap();
    let taylor = taylor_channel(&s.tx, &s.rx, &s.params).unwrap();
    assert!(set.recompose().max_abs_diff(&taylor) < 1e-10);
    for z in set.h_tilde.as_slice().iter().chain(&set.d_t).chain(&set.d_r) {
        assert!((z.norm() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn recomposition_holds_for_rotated_layouts() {
    let params = ChannelParams::new(WAVELENGTH, 20.0).unwrap();
    let spec = ArraySpec::parallel(4, 3, 0.05, 0.07).with_rotation(0.3, -0.2);
    let s = with_spec(params, spec);
    let set = fresnel_factors(&s.tx, &s.rx, &s.params).unwrap();
    assert!(set.recompose().max_abs_diff(&taylor_channel(&s.tx, &s.rx, &s.params).unwrap()) < 1e-10);
}

#[test]
fn fresnel_error_and_spectrum_gap_shrink_with_distance() {
    let spec = {
        let sol = geometry::optimal_spacing(8, 8, 4, WAVELENGTH, 50.0, 1.0).unwrap();
        ArraySpec::parallel(8, 8, sol.d_t, sol.d_t)
    };
    let mut last = (f64::INFINITY, f64::INFINITY);
    for d in [25.0, 50.0, 100.0] {
        let s = with_spec(ChannelParams::new(WAVELENGTH, d).unwrap(), spec);
        let set = fresnel_factors(&s.tx, &s.rx, &s.params).unwrap();
        let now = (set.fresnel_error(), gram_spectrum_gap(&set.h_exact, &set.h_tilde).unwrap());
        assert!(now.0 < last.0 && now.1 < last.1, "D={d}: {now:?} vs {last:?}");
        last = now;
    }
}

#[test]
fn kronecker_factors_rebuild_the_fresnel_core() {
    for (n, ns) in [(2usize, 2usize), (8, 4)] {
        let s = optimal(n, ns, 50.0);
        let (hv, hh) = kron_factor_channel(&s.spec, &s.spec, &s.params).unwrap();
        let set = fresnel_factors(&s.tx, &s.rx, &s.params).unwrap();
        assert!(hv.kron(&hh).max_abs_diff(&set.h_tilde) < 1e-12);

        let g = gram(&set.h_tilde, GramSide::Tx).unwrap();
        let gv = gram(&hv, GramSide::Tx).unwrap();
        let gh = gram(&hh, GramSide::Tx).unwrap();
        assert!(gv.kron(&gh).max_abs_diff(&g) < 1e-9);
    }
}

#[test]
fn single_elements_give_unit_factors() {
    let params = ChannelParams::new(WAVELENGTH, 10.0).unwrap();
    let spec = ArraySpec::parallel(1, 1, 0.1, 0.1);
    let (hv, hh) = kron_factor_channel(&spec, &spec, &params).unwrap();
    assert_eq!(hv.as_slice()[0].re, 1.0);
    assert_eq!(hh.as_slice()[0].re, 1.0);
}

#[test]
fn gram_trace_and_symmetry() {
    let s = optimal(4, 2, 50.0);
    for side in [GramSide::Tx, GramSide::Rx] {
        let g = gram(&s.h, side).unwrap();
        assert!((g.trace().re - 256.0).abs() < 1e-9);
        assert!(g.hermitian_asymmetry() < 1e-12);
    }
}

#[test]
fn parallel_gram_is_doubly_block_toeplitz() {
    let s = optimal(8, 4, 50.0);
    let set = fresnel_factors(&s.tx, &s.rx, &s.params).unwrap();
    let g = gram(&set.h_tilde, GramSide::Tx).unwrap();
    assert!(block_toeplitz_deviation(&g, 8, 8).unwrap() < 1e-9);
}

#[test]
fn linear_gram_is_a_scaled_prolate_matrix() {
    let (n, d_t, d_r, dist) = (8usize, 0.04, 0.05, 30.0);
    let params = ChannelParams::new(WAVELENGTH, dist).unwrap();
    let spec_t = ArraySpec::parallel(n, 1, d_t, d_t);
    let spec_r = ArraySpec::parallel(n, 1, d_r, d_r);
    let (hv, _) = kron_factor_channel(&spec_t, &spec_r, &params).unwrap();
    let delta = d_t * d_r * n as f64 / (WAVELENGTH * dist);
    let g = gram(&hv, GramSide::Tx).unwrap();
    let p = prolate_gram(n, n, delta, n).unwrap();
    assert!(g.max_abs_diff(&p) < 1e-10, "{}", g.max_abs_diff(&p));
}

#[test]
fn prolate_trace_and_concentration() {
    let b = prolate_matrix(32.0f64, 7, 16).unwrap();
    assert!(b.hermitian_asymmetry() == 0.0);
    assert!((b.trace().re - 16.0 * 8.0 / 32.0).abs() < 1e-10);
    let e = eig_hermitian(&b, 1e-12).unwrap();
    assert_eq!(e.len(), 16);
    assert!(e.values.iter().all(|&v| v > -1e-9 && v < 1.0 + 1e-9));
    let near_one = e.values.iter().filter(|&&v| v >= 0.9).count();
    assert!((3..=5).contains(&near_one), "{:?}", e.values);
}

#[test]
fn exact_channel_is_normalized() {
    let s = optimal(4, 2, 5.0);
    let h = exact_channel(&s.tx, &s.rx, &s.params).unwrap();
    assert!((h.frobenius_norm_sqr() - 256.0).abs() < 1e-9);
    assert!(h.as_slice().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
}
