//! Cross-module invariant suite run by `losmimo validate`.

use losmimo_core::beamforming::{
    asymptotic_hybrid, dictionary_rx, dictionary_tx, digital_svd, hybrid_rate, omp_hybrid, ColumnSelection, PowerMode,
};
use losmimo_core::channel::{
    block_toeplitz_deviation, exact_channel, fresnel_factors, gram, kron_factor_channel, taylor_channel, GramSide,
};
use losmimo_core::geometry::{build_layout, optimal_spacing};
use losmimo_core::linalg::{dft_matrix, eig_hermitian, svd, DEFAULT_EIG_TOL};
use losmimo_core::spectral::{cluster_report_2d, rate_upper_bound, water_filling};
use losmimo_core::{AxisSpectrum, LayoutKind, Matrix, Params, Side, Spec};

/// Deliberate defects used to prove that the suite can fail.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Faults {
    /// Conjugates `D_t` before recomposition.
    pub dt_sign: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn record(&mut self, name: &'static str, outcome: Result<(bool, String), losmimo_core::Error>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check { name, passed, detail });
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {:<28} {}\n", c.name, c.detail));
        }
        out.push_str(&format!("{} of {} invariants passed\n", self.checks.len() - self.failures(), self.checks.len()));
        out
    }
}

fn bounded(value: f64, limit: f64) -> (bool, String) {
    (value <= limit, format!("{value:.3e} <= {limit:.1e}"))
}

fn unitarity_error(q: &Matrix) -> f64 {
    q.adjoint_mul(q).max_abs_diff(&Matrix::identity(q.cols()))
}

const N: usize = 8;
const NS_AXIS: usize = 2;

struct Fixture {
    params: Params,
    spec: Spec,
    h: Matrix,
}

fn fixture() -> losmimo_core::Result<Fixture> {
    let params = Params::from_frequency_ghz(28.0, 50.0)?;
    let sol = optimal_spacing(N, N, NS_AXIS, params.wavelength, params.distance, 1.0)?;
    let spec = Spec::parallel(N, N, sol.d_t, sol.d_t);
    let tx = build_layout(&spec, Side::Tx, params.distance)?;
    let rx = build_layout(&spec, Side::Rx, params.distance)?;
    let h = exact_channel(&tx, &rx, &params)?;
    Ok(Fixture { params, spec, h })
}

/// Runs every invariant on an 8×8 link at 28 GHz over 50 m with four streams.
pub fn run(faults: Faults) -> Report {
    let mut report = Report::default();
    let fx = match fixture() {
        Ok(f) => f,
        Err(e) => {
            report.record("fixture", Err(e));
            return report;
        }
    };
    let (params, spec, h) = (&fx.params, &fx.spec, &fx.h);
    let dim = (N * N) as f64;
    let ns = NS_AXIS * NS_AXIS;

    report.record("channel-normalization", Ok(bounded((h.frobenius_norm_sqr() - dim * dim).abs() / (dim * dim), 1e-9)));

    report.record(
        "fresnel-recomposition",
        (|| {
            let rotated = spec.with_rotation(20f64.to_radians(), 20f64.to_radians()).with_layout(LayoutKind::ParallelogramOptimal);
            let tx = build_layout(&rotated, Side::Tx, params.distance)?;
            let rx = build_layout(&rotated, Side::Rx, params.distance)?;
            let mut set = fresnel_factors(&tx, &rx, params)?;
            if faults.dt_sign {
                set.d_t.iter_mut().for_each(|z| *z = z.conj());
            }
            Ok(bounded(set.recompose().max_abs_diff(&taylor_channel(&tx, &rx, params)?), 1e-10))
        })(),
    );

    report.record(
        "kronecker-identity",
        (|| {
            let tx = build_layout(spec, Side::Tx, params.distance)?;
            let rx = build_layout(spec, Side::Rx, params.distance)?;
            let (hv, hh) = kron_factor_channel(spec, spec, params)?;
            let set = fresnel_factors(&tx, &rx, params)?;
            Ok(bounded(set.h_tilde.max_abs_diff(&hv.kron(&hh)), 1e-10))
        })(),
    );

    report.record(
        "block-toeplitz-gram",
        (|| {
            let tx = build_layout(spec, Side::Tx, params.distance)?;
            let rx = build_layout(spec, Side::Rx, params.distance)?;
            let g = gram(&fresnel_factors(&tx, &rx, params)?.h_tilde, GramSide::Tx)?;
            Ok(bounded(block_toeplitz_deviation(&g, N, N)? / dim, 1e-9))
        })(),
    );

    report.record("dft-unitarity", Ok(bounded(unitarity_error(&dft_matrix::<f64>(N).kron(&dft_matrix(N))), 1e-12)));

    report.record(
        "dictionary-unitarity",
        (|| {
            let tx = build_layout(spec, Side::Tx, params.distance)?;
            let rx = build_layout(spec, Side::Rx, params.distance)?;
            let worst = unitarity_error(&dictionary_tx(&tx, params, N, N)?)
                .max(unitarity_error(&dictionary_rx(&rx, params, N, N)?));
            Ok(bounded(worst, 1e-12))
        })(),
    );

    let g = gram(h, GramSide::Tx);
    let eig = g.as_ref().map_err(Clone::clone).and_then(|g| eig_hermitian(g, DEFAULT_EIG_TOL));

    report.record(
        "eigen-reconstruction",
        eig.as_ref().map_err(Clone::clone).and_then(|e| {
            let g = g.as_ref().map_err(Clone::clone)?;
            let sorted = e.values.windows(2).all(|w| w[0] >= w[1]);
            let (ok, detail) = bounded(e.reconstruct().max_abs_diff(g) / dim, 1e-10);
            let ortho = unitarity_error(&e.vectors);
            Ok((ok && sorted && ortho < 1e-10, format!("{detail}, orthonormality {ortho:.3e}, sorted {sorted}")))
        }),
    );

    report.record(
        "svd-reconstruction",
        svd(h).map(|s| {
            let (ok, detail) = bounded(s.reconstruct().max_abs_diff(h), 1e-10);
            let sorted = s.singular_values.windows(2).all(|w| w[0] >= w[1]);
            (ok && sorted, format!("{detail}, sorted {sorted}"))
        }),
    );

    report.record(
        "spectrum-concentration",
        eig.as_ref().map_err(Clone::clone).and_then(|e| {
            let delta = spec.d_v * spec.d_v * N as f64 / (params.wavelength * params.distance);
            let axis = AxisSpectrum { delta, n_min: N, n_max: N, m_dim: N };
            let r = cluster_report_2d(e, dim * dim / ns as f64, 0.1, &axis, &axis)?;
            Ok((
                (r.transition_count as f64) <= r.transition_bound && r.total() == N * N,
                format!("transition {} <= bound {:.1}", r.transition_count, r.transition_bound),
            ))
        }),
    );

    let digital = digital_svd(h, ns, PowerMode::Uniform);

    report.record(
        "precoder-orthonormality",
        digital
            .as_ref()
            .map_err(Clone::clone)
            .map(|d| bounded(unitarity_error(&d.precoder).max(unitarity_error(&d.combiner)), 1e-10)),
    );

    report.record(
        "water-filling-kkt",
        (|| {
            let eigs = [4.0, 1.0, 0.25, 0.01];
            let (p_total, g) = (2.0, 3.0);
            let wf = water_filling(&eigs, p_total, g)?;
            let sum_err = (wf.powers.iter().sum::<f64>() - p_total).abs();
            let mut worst = sum_err;
            for (&p, &l) in wf.powers.iter().zip(&eigs) {
                let floor = 1.0 / (g * l);
                worst = worst.max(if p > 0.0 { (p + floor - wf.water_level).abs() } else { (wf.water_level - floor).max(0.0) });
                if p < 0.0 {
                    worst = f64::INFINITY;
                }
            }
            Ok(bounded(worst, 1e-9))
        })(),
    );

    report.record(
        "rate-bound-dominance",
        digital.as_ref().map_err(Clone::clone).and_then(|d| {
            let mut excess = f64::NEG_INFINITY;
            for snr_db in [-10.0, 0.0, 10.0, 20.0] {
                let snr = 10f64.powf(snr_db / 10.0);
                excess = excess.max(d.rate(h, snr)? - rate_upper_bound(N * N, N * N, ns, snr));
            }
            Ok((excess <= 1e-9, format!("max excess {excess:.3e}")))
        }),
    );

    report.record(
        "hybrid-below-digital",
        digital.as_ref().map_err(Clone::clone).and_then(|d| {
            let tx = build_layout(spec, Side::Tx, params.distance)?;
            let rx = build_layout(spec, Side::Rx, params.distance)?;
            let (ft, fr) = (dictionary_tx(&tx, params, N, N)?, dictionary_rx(&rx, params, N, N)?);
            let (t, r) = asymptotic_hybrid(&ft, &fr, h, ns, ColumnSelection::GainRanked)?;
            let modulus = t.is_constant_modulus(1e-12) && r.is_constant_modulus(1e-12);
            let gap = hybrid_rate(h, &t, &r, 1.0)? - d.rate(h, 1.0)?;
            Ok((gap <= 1e-9 && modulus, format!("hybrid - digital = {gap:.3e}, constant modulus {modulus}")))
        }),
    );

    report.record(
        "omp-residual-monotone",
        digital.as_ref().map_err(Clone::clone).and_then(|d| {
            let tx = build_layout(spec, Side::Tx, params.distance)?;
            let out = omp_hybrid(&d.normalized_precoder(), &dictionary_tx(&tx, params, N, N)?, ns, Side::Tx)?;
            let monotone = out.residual_norms.windows(2).all(|w| w[1] <= w[0] + 1e-12);
            Ok((monotone, format!("residuals {:?}", out.residual_norms.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>())))
        }),
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes_everything() {
        let r = run(Faults::default());
        assert!(r.checks.len() >= 10);
        assert_eq!(r.failures(), 0, "{}", r.render());
    }

    #[test]
    fn flipped_dt_breaks_recomposition_only() {
        let r = run(Faults { dt_sign: true });
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        assert_eq!(failed, vec!["fresnel-recomposition"]);
    }
}
