//! Subcommands that evaluate a scenario and return a CSV table.
//!
//! | command          | columns                                                                 |
//! |------------------|-------------------------------------------------------------------------|
//! | `spectrum`       | `index,raw_value,normalized_value` + `#` summary lines                  |
//! | `rate-sweep`     | `scheme,snr_db,rotation_deg,rate_bps_hz,digital_gap_ratio,wall_time_ms` |
//! | `rotation-sweep` | rate-sweep columns + `fresnel_error`                                    |
//! | `aperture-sweep` | `scale,l_t,l_r,product,feasible,rate_bps_hz`                            |

use rayon::prelude::*;

use losmimo_core::channel::{gram, GramSide};
use losmimo_core::geometry::aperture_feasible;
use losmimo_core::linalg::{eig_hermitian, DEFAULT_EIG_TOL};
use losmimo_core::spectral::{cluster_report_2d, rate_upper_bound};

use crate::config::{ScenarioConfig, Scheme};
use crate::csv::{num, Table};
use crate::error::CliError;
use crate::scenario::{geometry, snr_linear, Prepared};

pub const RATE_HEADER: [&str; 6] = ["scheme", "snr_db", "rotation_deg", "rate_bps_hz", "digital_gap_ratio", "wall_time_ms"];

/// Run options shared by every sweep.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Report real wall times instead of zeros.
    pub timings: bool,
}

/// One rate-sweep row before serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub rotation_deg: f64,
    pub rate: f64,
    pub gap_ratio: f64,
    pub wall_ms: f64,
}

fn point(scheme: Scheme, snr_db: f64, rotation: f64) -> String {
    format!("scheme {scheme}, snr {snr_db} dB, rotation {rotation} deg")
}

/// Evaluates every `(scheme, snr, rotation)` point, ordered by scheme, then
/// SNR, then rotation.
pub fn rate_rows(cfg: &ScenarioConfig, rotations: &[f64], opts: RunOptions) -> Result<Vec<RateRow>, CliError> {
    let prepared: Vec<Prepared> =
        rotations.par_iter().map(|&rot| Prepared::new(cfg, rot, 1.0)).collect::<Result<_, _>>()?;
    let snrs = cfg.sorted_snr();
    let grid: Vec<(Scheme, f64, usize)> = cfg
        .schemes
        .iter()
        .flat_map(|&s| snrs.iter().flat_map(move |&snr| (0..rotations.len()).map(move |r| (s, snr, r))))
        .collect();

    grid.par_iter()
        .map(|&(scheme, snr_db, r)| {
            let p = &prepared[r];
            let snr = snr_linear(snr_db);
            let fail = |e| CliError::numeric(point(scheme, snr_db, rotations[r]))(e);
            let (rate, elapsed) = p.rate(scheme, snr).map_err(fail)?;
            let (reference, _) = p.rate(Scheme::DigitalUniform, snr).map_err(fail)?;
            if !rate.is_finite() {
                return Err(fail(losmimo_core::Error::InvalidParameter("rate is not finite".into())));
            }
            Ok(RateRow {
                scheme,
                snr_db,
                rotation_deg: rotations[r],
                rate,
                gap_ratio: rate / reference,
                wall_ms: if opts.timings { elapsed.as_secs_f64() * 1e3 } else { 0.0 },
            })
        })
        .collect()
}

fn rate_cells(r: &RateRow) -> Vec<String> {
    vec![r.scheme.to_string(), num(r.snr_db), num(r.rotation_deg), num(r.rate), num(r.gap_ratio), num(r.wall_ms)]
}

pub fn rate_sweep(cfg: &ScenarioConfig, opts: RunOptions) -> Result<Table, CliError> {
    let rows = rate_rows(cfg, &cfg.rotations(), opts)?;
    let mut t = Table::new(&RATE_HEADER);
    for r in &rows {
        t.push(rate_cells(r));
    }
    Ok(t)
}

pub const DEFAULT_ROTATIONS: [f64; 5] = [0.0, 10.0, 20.0, 30.0, 40.0];

/// Rate sweep over the rotation grid, defaulting to 0..40 degrees in steps of
/// ten when the scenario lists at most one angle.
pub fn rotation_sweep(cfg: &ScenarioConfig, opts: RunOptions) -> Result<Table, CliError> {
    let rotations = if cfg.rotation_deg.len() > 1 { cfg.rotations() } else { DEFAULT_ROTATIONS.to_vec() };
    let errors: Vec<f64> = rotations
        .par_iter()
        .map(|&rot| geometry(cfg, rot, 1.0)?.fresnel_error())
        .collect::<Result<_, _>>()?;
    let rows = rate_rows(cfg, &rotations, opts)?;
    let mut header = RATE_HEADER.to_vec();
    header.push("fresnel_error");
    let mut t = Table::new(&header);
    for r in &rows {
        let idx = rotations.iter().position(|&x| x == r.rotation_deg).expect("row rotation comes from the grid");
        let mut cells = rate_cells(r);
        cells.push(num(errors[idx]));
        t.push(cells);
    }
    Ok(t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApertureRow {
    pub scale: f64,
    pub l_t: f64,
    pub l_r: f64,
    pub feasible: bool,
    pub rate: f64,
}

/// Digital-uniform rate at `aperture_snr_db` with every spacing scaled.
pub fn aperture_rows(cfg: &ScenarioConfig) -> Result<Vec<ApertureRow>, CliError> {
    let snr = snr_linear(cfg.aperture_snr_db);
    let rotation = cfg.rotations()[0];
    let ns = cfg.streams();
    cfg.aperture_scale
        .par_iter()
        .map(|&scale| {
            let mut single = cfg.clone();
            single.schemes = vec![Scheme::DigitalUniform];
            let p = Prepared::new(&single, rotation, scale)?;
            let (rate, _) = p
                .rate(Scheme::DigitalUniform, snr)
                .map_err(CliError::numeric(format!("scale {scale}, snr {} dB", cfg.aperture_snr_db)))?;
            let (l_t, l_r) = p.geometry.apertures();
            let g = &p.geometry.params;
            Ok(ApertureRow { scale, l_t, l_r, feasible: aperture_feasible(l_t, l_r, ns, g.wavelength, g.distance), rate })
        })
        .collect()
}

pub fn aperture_sweep(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["scale", "l_t", "l_r", "product", "feasible", "rate_bps_hz"]);
    for r in aperture_rows(cfg)? {
        t.push(vec![num(r.scale), num(r.l_t), num(r.l_r), num(r.l_t * r.l_r), r.feasible.to_string(), num(r.rate)]);
    }
    Ok(t)
}

/// Eigenvalues of `H*H` at the first configured rotation, normalized by the
/// cluster centre `NM / N_s`, with a concentration summary.
pub fn spectrum(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let geo = geometry(cfg, cfg.rotations()[0], 1.0)?;
    let h = geo.channel()?;
    let ctx = || CliError::numeric("transmit Gram eigendecomposition");
    let spec = eig_hermitian(&gram(&h, GramSide::Tx).map_err(ctx())?, DEFAULT_EIG_TOL).map_err(ctx())?;
    let (n, m) = geo.antennas();
    let ns = cfg.streams();
    let normalizer = (n * m) as f64 / ns as f64;
    let report = cluster_report_2d(&spec, normalizer, cfg.eps, &geo.axes[0], &geo.axes[1]).map_err(ctx())?;

    let mut t = Table::new(&["index", "raw_value", "normalized_value"]);
    for (i, &v) in spec.values.iter().enumerate() {
        t.push(vec![i.to_string(), num(v), num(v / normalizer)]);
    }
    t.note("normalizer", num(normalizer));
    t.note("eps", num(report.eps));
    t.note("count_near_one", report.count_near_one);
    t.note("count_near_zero", report.count_near_zero);
    t.note("transition_count", report.transition_count);
    t.note("transition_bound", num(report.transition_bound));
    t.note("predicted_rank", report.predicted_rank);
    t.note("delta_v", num(geo.axes[0].delta));
    t.note("delta_h", num(geo.axes[1].delta));
    t.note("rate_upper_bound", num(rate_upper_bound(n, m, ns, snr_linear(0.0))));
    Ok(t)
}
