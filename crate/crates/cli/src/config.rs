//! Scenario files.
//!
//! A scenario is a TOML document. Lengths are meters, frequencies GHz and
//! angles degrees. Every key except `[tx]` / `[rx]` sizes has a default, so the
//! smallest valid file is
//!
//! ```toml
//! [tx]
//! n_v = 4
//! n_h = 4
//! [rx]
//! n_v = 4
//! n_h = 4
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

pub const EXAMPLE: &str = include_str!("../examples/desk.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    DigitalWf,
    DigitalUniform,
    AsymptoticHybrid,
    OmpHybrid,
    PhaseExtract,
}

impl Scheme {
    pub const ALL: [Scheme; 5] =
        [Scheme::DigitalWf, Scheme::DigitalUniform, Scheme::AsymptoticHybrid, Scheme::OmpHybrid, Scheme::PhaseExtract];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::DigitalWf => "digital-wf",
            Scheme::DigitalUniform => "digital-uniform",
            Scheme::AsymptoticHybrid => "asymptotic-hybrid",
            Scheme::OmpHybrid => "omp-hybrid",
            Scheme::PhaseExtract => "phase-extract",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SpacingMode {
    #[default]
    Optimal,
    HalfWavelength,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    #[default]
    Parallelogram,
    RotatedUpa,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub n_v: usize,
    pub n_h: usize,
    /// Only read with `spacing_mode = "explicit"`.
    pub d_v: Option<f64>,
    pub d_h: Option<f64>,
    #[serde(default)]
    pub theta_deg: f64,
    #[serde(default)]
    pub phi_deg: f64,
    #[serde(default)]
    pub layout: Layout,
}

fn default_frequency() -> f64 {
    28.0
}
fn default_distance() -> f64 {
    50.0
}
fn default_snr() -> Vec<f64> {
    vec![0.0]
}
fn default_schemes() -> Vec<Scheme> {
    vec![Scheme::DigitalUniform]
}
fn default_scales() -> Vec<f64> {
    vec![0.25, 0.5, 0.75, 1.0, 1.5]
}
fn default_eps() -> f64 {
    0.1
}
fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_frequency")]
    pub frequency_ghz: f64,
    #[serde(default = "default_distance")]
    pub distance_m: f64,
    pub tx: ArrayConfig,
    pub rx: ArrayConfig,
    /// Defaults to the product of `ns_split`.
    pub ns: Option<usize>,
    /// Streams along the vertical and horizontal axes.
    pub ns_split: Option<[usize; 2]>,
    pub n_rf_tx: Option<usize>,
    pub n_rf_rx: Option<usize>,
    #[serde(default = "default_snr")]
    pub snr_db: Vec<f64>,
    #[serde(default = "default_schemes")]
    pub schemes: Vec<Scheme>,
    #[serde(default)]
    pub spacing_mode: SpacingMode,
    /// `d_t / d_r` used by the optimal spacing, in (0, 1].
    #[serde(default = "one")]
    pub spacing_split: f64,
    /// Applied to every rotation angle of both arrays.
    #[serde(default)]
    pub rotation_deg: Vec<f64>,
    #[serde(default = "default_scales")]
    pub aperture_scale: Vec<f64>,
    /// SNR used by the aperture sweep.
    #[serde(default)]
    pub aperture_snr_db: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default)]
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

/// Rejected scenario, with the offending field and (when it can be located)
/// its 1-based line in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: `{}`: {}", self.field, self.message),
            None => write!(f, "`{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn line_of_offset(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Line of the first `key = …` assignment for the last component of `field`,
/// searching inside `[tx]` / `[rx]` when the field is qualified.
fn line_of_field(src: &str, field: &str) -> Option<usize> {
    let (table, key) = match field.split_once('.') {
        Some((t, k)) => (Some(t), k),
        None => (None, field),
    };
    let mut current: Option<&str> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(name.trim());
            continue;
        }
        let Some((lhs, _)) = line.split_once('=') else { continue };
        if lhs.trim() == key && (table.is_none() || current == table) && (table.is_some() || current.is_none()) {
            return Some(i + 1);
        }
    }
    table.and_then(|t| src.lines().position(|l| l.trim() == format!("[{t}]")).map(|i| i + 1))
}

impl ScenarioConfig {
    pub fn from_toml(src: &str) -> Result<Self, ConfigError> {
        let cfg: ScenarioConfig = toml::from_str(src).map_err(|e| {
            let line = e.span().map(|s| line_of_offset(src, s.start));
            let field = e.message().split('`').nth(1).unwrap_or("document").to_string();
            ConfigError { field, line, message: e.message().trim().to_string() }
        })?;
        cfg.validate().map_err(|(field, message)| ConfigError {
            line: line_of_field(src, field),
            field: field.to_string(),
            message,
        })?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let src = std::fs::read_to_string(path).map_err(|e| ConfigError {
            field: "config".into(),
            line: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_toml(&src)
    }

    pub fn example() -> Self {
        Self::from_toml(EXAMPLE).expect("bundled example is valid")
    }

    pub fn streams(&self) -> usize {
        self.ns.unwrap_or_else(|| self.split().iter().product())
    }

    /// Per-axis stream split; defaults to `(ns, 1)`.
    pub fn split(&self) -> [usize; 2] {
        self.ns_split.unwrap_or([self.ns.unwrap_or(1), 1])
    }

    pub fn rf_chains(&self) -> (usize, usize) {
        let ns = self.streams();
        (self.n_rf_tx.unwrap_or(ns), self.n_rf_rx.unwrap_or(ns))
    }

    /// Rotation grid in ascending order; empty means `[0]`.
    pub fn rotations(&self) -> Vec<f64> {
        let mut r = if self.rotation_deg.is_empty() { vec![0.0] } else { self.rotation_deg.clone() };
        r.sort_by(|a, b| a.total_cmp(b));
        r
    }

    pub fn sorted_snr(&self) -> Vec<f64> {
        let mut s = self.snr_db.clone();
        s.sort_by(|a, b| a.total_cmp(b));
        s
    }

    fn validate(&self) -> Result<(), (&'static str, String)> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.frequency_ghz) {
            return Err(("frequency_ghz", "must be a positive number".into()));
        }
        if !positive(self.distance_m) {
            return Err(("distance_m", "must be a positive number".into()));
        }
        for (name, a) in [("tx", &self.tx), ("rx", &self.rx)] {
            if a.n_v == 0 || a.n_h == 0 {
                let field = if name == "tx" { "tx.n_v" } else { "rx.n_v" };
                return Err((field, "array dimensions must be at least 1".into()));
            }
            if !a.theta_deg.is_finite() || !a.phi_deg.is_finite() {
                return Err((if name == "tx" { "tx.theta_deg" } else { "rx.theta_deg" }, "must be finite".into()));
            }
            if self.spacing_mode == SpacingMode::Explicit {
                for (key, v) in [("d_v", a.d_v), ("d_h", a.d_h)] {
                    if !v.is_some_and(positive) {
                        let field = match (name, key) {
                            ("tx", "d_v") => "tx.d_v",
                            ("tx", _) => "tx.d_h",
                            (_, "d_v") => "rx.d_v",
                            _ => "rx.d_h",
                        };
                        return Err((field, "explicit spacing needs a positive value".into()));
                    }
                }
            }
        }
        if self.ns.is_none() && self.ns_split.is_none() {
            return Err(("ns", "set `ns`, `ns_split` or both".into()));
        }
        let ns = self.streams();
        let split = self.split();
        if ns == 0 {
            return Err(("ns", "must be at least 1".into()));
        }
        if split[0] * split[1] != ns {
            return Err(("ns_split", format!("product {} differs from ns = {ns}", split[0] * split[1])));
        }
        if self.spacing_mode == SpacingMode::Optimal {
            if split.iter().any(|&s| s == 0 || s % 2 == 1) {
                return Err(("ns_split", "optimal spacing needs even, non-zero per-axis stream counts".into()));
            }
            if split[0] > self.tx.n_v.min(self.rx.n_v) || split[1] > self.tx.n_h.min(self.rx.n_h) {
                return Err(("ns_split", "per-axis streams exceed the array size along that axis".into()));
            }
            if !(self.spacing_split > 0.0 && self.spacing_split <= 1.0) {
                return Err(("spacing_split", "must lie in (0, 1]".into()));
            }
        }
        let (rf_t, rf_r) = self.rf_chains();
        let n = self.rx.n_v * self.rx.n_h;
        let m = self.tx.n_v * self.tx.n_h;
        if rf_t < ns || rf_r < ns {
            return Err((if rf_t < ns { "n_rf_tx" } else { "n_rf_rx" }, format!("must be at least ns = {ns}")));
        }
        if rf_t > m || rf_r > n || rf_t.min(rf_r) > n.min(m) {
            return Err((if rf_t > m { "n_rf_tx" } else { "n_rf_rx" }, "exceeds the antenna count".into()));
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|v| !v.is_finite()) {
            return Err(("snr_db", "needs at least one finite value".into()));
        }
        if self.schemes.is_empty() {
            return Err(("schemes", "needs at least one scheme".into()));
        }
        if self.rotation_deg.iter().any(|v| !v.is_finite() || v.abs() >= 90.0) {
            return Err(("rotation_deg", "angles must be finite and inside (-90, 90)".into()));
        }
        if self.aperture_scale.iter().any(|&v| !positive(v)) || self.aperture_scale.is_empty() {
            return Err(("aperture_scale", "needs positive scale factors".into()));
        }
        if !self.aperture_snr_db.is_finite() {
            return Err(("aperture_snr_db", "must be finite".into()));
        }
        if !(self.eps > 0.0 && self.eps < 0.5) {
            return Err(("eps", "must lie in (0, 0.5)".into()));
        }
        Ok(())
    }
}
