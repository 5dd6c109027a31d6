//! Turns a [`ScenarioConfig`] into geometry, channels and beamformers.

use std::time::{Duration, Instant};

use losmimo_core::beamforming::{
    asymptotic_hybrid, dictionary_rx, dictionary_tx, digital_svd, hybrid_rate, omp_hybrid, phase_extraction_hybrid,
    ColumnSelection, PowerMode,
};
use losmimo_core::channel::{exact_channel, fresnel_factors};
use losmimo_core::geometry::{aperture, build_layout, optimal_spacing};
use losmimo_core::{AxisSpectrum, ChannelParams, Digital, Hybrid, LayoutKind, Layout, Matrix, Params, Side, Spec};

use crate::config::{ArrayConfig, Layout as LayoutChoice, ScenarioConfig, Scheme, SpacingMode};
use crate::error::CliError;

/// Realized arrays for one grid point.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub params: Params,
    pub tx_spec: Spec,
    pub rx_spec: Spec,
    pub tx: Layout,
    pub rx: Layout,
    /// Vertical and horizontal concentration data.
    pub axes: [AxisSpectrum<f64>; 2],
}

impl Geometry {
    pub fn antennas(&self) -> (usize, usize) {
        (self.rx.len(), self.tx.len())
    }

    pub fn apertures(&self) -> (f64, f64) {
        (aperture(&self.tx), aperture(&self.rx))
    }

    pub fn channel(&self) -> Result<Matrix, CliError> {
        exact_channel(&self.tx, &self.rx, &self.params).map_err(CliError::numeric("channel construction"))
    }

    /// `‖H − D_r* H̃ D_t‖_F / ‖H‖_F`.
    pub fn fresnel_error(&self) -> Result<f64, CliError> {
        let set = fresnel_factors(&self.tx, &self.rx, &self.params).map_err(CliError::numeric("Fresnel factors"))?;
        Ok(set.fresnel_error())
    }
}

fn spec_for(a: &ArrayConfig, d_v: f64, d_h: f64, rotation_deg: f64) -> Spec {
    let kind = match a.layout {
        LayoutChoice::Parallelogram => LayoutKind::ParallelogramOptimal,
        LayoutChoice::RotatedUpa => LayoutKind::RotatedUpa,
    };
    Spec::parallel(a.n_v, a.n_h, d_v, d_h)
        .with_rotation((a.theta_deg + rotation_deg).to_radians(), (a.phi_deg + rotation_deg).to_radians())
        .with_layout(kind)
}

/// Builds both arrays with every spacing multiplied by `scale` and every
/// rotation angle offset by `rotation_deg`.
pub fn geometry(cfg: &ScenarioConfig, rotation_deg: f64, scale: f64) -> Result<Geometry, CliError> {
    let context = format!("geometry (rotation {rotation_deg} deg, scale {scale})");
    let params = ChannelParams::from_frequency_ghz(cfg.frequency_ghz, cfg.distance_m)
        .map_err(CliError::numeric(context.clone()))?;
    let (lam, dist) = (params.wavelength, params.distance);
    let split = cfg.split();

    // ((tx d_v, rx d_v), (tx d_h, rx d_h))
    let (v, h) = match cfg.spacing_mode {
        SpacingMode::Optimal => {
            let sv = optimal_spacing(cfg.rx.n_v, cfg.tx.n_v, split[0], lam, dist, cfg.spacing_split)
                .map_err(CliError::numeric(context.clone()))?;
            let sh = optimal_spacing(cfg.rx.n_h, cfg.tx.n_h, split[1], lam, dist, cfg.spacing_split)
                .map_err(CliError::numeric(context.clone()))?;
            ((sv.d_t, sv.d_r), (sh.d_t, sh.d_r))
        }
        SpacingMode::HalfWavelength => ((lam / 2.0, lam / 2.0), (lam / 2.0, lam / 2.0)),
        SpacingMode::Explicit => {
            let get = |x: Option<f64>| x.expect("validated explicit spacing");
            ((get(cfg.tx.d_v), get(cfg.rx.d_v)), (get(cfg.tx.d_h), get(cfg.rx.d_h)))
        }
    };
    let tx_spec = spec_for(&cfg.tx, v.0 * scale, h.0 * scale, rotation_deg);
    let rx_spec = spec_for(&cfg.rx, v.1 * scale, h.1 * scale, rotation_deg);
    let tx = build_layout(&tx_spec, Side::Tx, dist).map_err(CliError::numeric(context.clone()))?;
    let rx = build_layout(&rx_spec, Side::Rx, dist).map_err(CliError::numeric(context))?;

    let axis = |n: usize, m: usize, d_t: f64, d_r: f64| AxisSpectrum {
        delta: d_t * d_r * n.max(m) as f64 / (lam * dist),
        n_min: n.min(m),
        n_max: n.max(m),
        m_dim: m,
    };
    let axes = [
        axis(cfg.rx.n_v, cfg.tx.n_v, tx_spec.d_v, rx_spec.d_v),
        axis(cfg.rx.n_h, cfg.tx.n_h, tx_spec.d_h, rx_spec.d_h),
    ];
    Ok(Geometry { params, tx_spec, rx_spec, tx, rx, axes })
}

pub fn snr_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Everything about one grid point that does not depend on the SNR.
pub struct Prepared {
    pub geometry: Geometry,
    pub h: Matrix,
    pub digital: Digital,
    hybrids: Vec<(Scheme, Hybrid, Hybrid, Duration)>,
    digital_time: Duration,
}

impl Prepared {
    pub fn new(cfg: &ScenarioConfig, rotation_deg: f64, scale: f64) -> Result<Self, CliError> {
        let geometry = geometry(cfg, rotation_deg, scale)?;
        let h = geometry.channel()?;
        let ns = cfg.streams();
        let ctx = |what: &str| format!("{what} (rotation {rotation_deg} deg, scale {scale})");

        let start = Instant::now();
        let digital = digital_svd(&h, ns, PowerMode::Uniform).map_err(CliError::numeric(ctx("digital SVD")))?;
        let digital_time = start.elapsed();

        let mut hybrids = Vec::new();
        let needs_dict = cfg
            .schemes
            .iter()
            .any(|s| matches!(s, Scheme::AsymptoticHybrid | Scheme::OmpHybrid | Scheme::PhaseExtract));
        if needs_dict {
            let (tx, rx) = (&geometry.tx, &geometry.rx);
            let ft = dictionary_tx(tx, &geometry.params, tx.n_v, tx.n_h).map_err(CliError::numeric(ctx("Tx dictionary")))?;
            let fr = dictionary_rx(rx, &geometry.params, rx.n_v, rx.n_h).map_err(CliError::numeric(ctx("Rx dictionary")))?;
            let (rf_t, rf_r) = cfg.rf_chains();
            for &scheme in &cfg.schemes {
                let start = Instant::now();
                let pair = match scheme {
                    Scheme::AsymptoticHybrid => asymptotic_hybrid(&ft, &fr, &h, ns, ColumnSelection::GainRanked),
                    Scheme::OmpHybrid => omp_hybrid(&digital.normalized_precoder(), &ft, rf_t, Side::Tx).and_then(|t| {
                        omp_hybrid(&digital.combiner, &fr, rf_r, Side::Rx).map(|r| (t.beamformer, r.beamformer))
                    }),
                    Scheme::PhaseExtract => phase_extraction_hybrid(&h, &digital, rf_t.min(rf_r), &ft, &fr),
                    Scheme::DigitalUniform | Scheme::DigitalWf => continue,
                };
                let (t, r) = pair.map_err(CliError::numeric(ctx(scheme.name())))?;
                hybrids.push((scheme, t, r, start.elapsed()));
            }
        }
        Ok(Self { geometry, h, digital, hybrids, digital_time })
    }

    /// Rate in b/s/Hz of `scheme` at a linear SNR, with the time spent
    /// building and evaluating it.
    pub fn rate(&self, scheme: Scheme, snr: f64) -> Result<(f64, Duration), losmimo_core::Error> {
        let start = Instant::now();
        let (rate, build) = match scheme {
            Scheme::DigitalUniform => (self.digital.rate(&self.h, snr)?, self.digital_time),
            Scheme::DigitalWf => (self.digital.water_filled(1.0, snr)?.rate(&self.h, snr)?, self.digital_time),
            _ => {
                let (_, t, r, build) =
                    self.hybrids.iter().find(|(s, ..)| *s == scheme).expect("hybrid prepared for every configured scheme");
                (hybrid_rate(&self.h, t, r, snr)?, *build)
            }
        };
        Ok((rate, build + start.elapsed()))
    }

    pub fn hybrid(&self, scheme: Scheme) -> Option<(&Hybrid, &Hybrid)> {
        self.hybrids.iter().find(|(s, ..)| *s == scheme).map(|(_, t, r, _)| (t, r))
    }
}
