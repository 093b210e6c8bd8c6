//! Scenario layer: configuration, compiled-in presets, time sweeps,
//! revival reports and density snapshots.

mod config;
pub mod csv;
pub mod presets;
mod sweep;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;

pub use config::{ConfigError, RawConfig};
pub use sweep::{
    analyse, run_snapshots, run_sweep, Breach, Snapshot, SweepOutcome, SweepRow,
};

use crate::bouncer::{bouncer_gaussian_coefficients, bouncer_timescales, Bouncer, BouncerParams};
use crate::error::{Error, Result};
use crate::fourier::{MomentumPathway, DEFAULT_ZERO_PAD};
use crate::grid::SpatialGrid;
use crate::morse::{bound_state_max, morse_lambda, morse_population, morse_timescales, Morse, MorseParams};
use crate::spectral::{SpectralPacket, System, Timescales, TRUNCATION_THRESHOLD};
use crate::square_well::{sw_gaussian_coefficients, sw_timescales, SquareWell, SquareWellParams};
use num_complex::Complex64;

/// Physical system together with the parameters of its initial packet.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemConfig {
    SquareWell {
        length: f64,
        x0: f64,
        p0: f64,
        sigma: f64,
    },
    Bouncer {
        z0: f64,
        sigma: f64,
        p0: f64,
    },
    Morse(MorseParams),
}

impl SystemConfig {
    pub fn kind(&self) -> crate::spectral::SystemKind {
        use crate::spectral::SystemKind;
        match self {
            Self::SquareWell { .. } => SystemKind::SquareWell,
            Self::Bouncer { .. } => SystemKind::Bouncer,
            Self::Morse(_) => SystemKind::Morse,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketConfig {
    /// Rescale the truncated coefficients to unit norm.
    pub renormalize: bool,
    /// Edge weight `|a_n|²` below which states are dropped.
    pub truncation: f64,
    /// Half-width of the candidate index range for the bouncer, and an
    /// explicit override for the square well when non-zero.
    pub n_window: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub zero_pad: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeConfig {
    pub t_max_over_trev: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConfig {
    pub q_max: u64,
    pub tol: f64,
    /// Minimum prominence as a fraction of each series' full range.
    pub min_prominence: f64,
    /// Centred moving average over one classical period before detection.
    pub smoothing: bool,
    pub momentum: MomentumPathway,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub timeseries: String,
    pub report: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub system: SystemConfig,
    pub packet: PacketConfig,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub analysis: AnalysisConfig,
    pub output: OutputConfig,
}

impl ScenarioConfig {
    /// A compiled-in preset by name.
    pub fn preset(name: &str) -> std::result::Result<Self, ConfigError> {
        presets::by_name(name).ok_or_else(|| {
            ConfigError::new(
                "preset",
                format!("unknown preset '{name}' (known: {})", presets::NAMES.join(", ")),
            )
        })
    }

    /// `self` overridden by the entries of a config text.
    pub fn with_overrides(&self, text: &str) -> std::result::Result<Self, ConfigError> {
        config::apply(self, &config::parse(text)?)
    }

    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        config::validate(self)
    }

    /// Sample times `i · t_max / (n − 1)`, both ends included.
    pub fn sample_times(&self, t_rev: f64) -> Vec<f64> {
        let n = self.time.n_samples;
        let t_max = self.time.t_max_over_trev * t_rev;
        (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
    }
}

/// A configuration resolved into a packet, a grid and its time scales.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub packet: SpectralPacket,
    pub grid: SpatialGrid,
    pub timescales: Timescales,
    /// Packet norm before any renormalisation.
    pub raw_norm: f64,
    pub warnings: Vec<String>,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self> {
        config
            .validate()
            .map_err(|e| Error::Parameter(e.to_string()))?;
        let base_grid = SpatialGrid::new(config.grid.x_min, config.grid.x_max, config.grid.n_points)?;
        let threshold = config.packet.truncation;
        let mut warnings = Vec::new();
        let (packet, timescales, grid) = match &config.system {
            &SystemConfig::SquareWell {
                length,
                x0,
                p0,
                sigma,
            } => {
                let params = SquareWellParams::new(length, x0, p0, sigma)?;
                let centre = params.central_index();
                let half = match config.packet.n_window {
                    0 => (8.0 * length / (PI * sigma)).ceil() as usize + 4,
                    w => w,
                };
                let n_min = centre.saturating_sub(half).max(1);
                let coeffs = sw_gaussian_coefficients(&params, n_min, centre + half)?;
                if coeffs.near_wall {
                    warnings.push(format!(
                        "packet x0 = {x0} lies within 3 sigma of a wall; closed-form coefficients are used"
                    ));
                }
                let basis = Arc::new(System::SquareWell(SquareWell::new(length)?));
                let packet = SpectralPacket::new(basis, n_min, coeffs.coefficients)?.truncated(threshold);
                let ts = sw_timescales(&params, packet.dominant_index())?;
                (packet, ts, base_grid)
            }
            &SystemConfig::Bouncer { z0, sigma, p0 } => {
                let params = BouncerParams::new(z0, sigma, p0)?;
                let half = config.packet.n_window.max(1);
                let centre = bouncer_index_estimate(z0);
                let n_min = centre.saturating_sub(half).max(1);
                let bouncer = Bouncer::new(centre + half)?;
                let coeffs = bouncer_gaussian_coefficients(&bouncer, &params, n_min, centre + half)?;
                let basis = Arc::new(System::Bouncer(bouncer));
                let packet = SpectralPacket::new(basis, n_min, coeffs)?.truncated(threshold);
                (packet, bouncer_timescales(&params), base_grid)
            }
            SystemConfig::Morse(params) => {
                let morse = Morse::new(*params)?;
                let top = bound_state_max(morse_lambda(params));
                let coeffs: Vec<Complex64> = morse_population(params, 0, top)?
                    .iter()
                    .map(|&c| Complex64::new(c, 0.0))
                    .collect();
                let retained = SpectralPacket::new(Arc::new(System::Morse(morse.clone())), 0, coeffs)?
                    .truncated(threshold);
                let grid = morse.window(&base_grid, retained.n_max())?;
                if grid != base_grid {
                    warnings.push(format!(
                        "x window widened to [{}, {}] to contain the retained states",
                        grid.x_min(),
                        grid.x_max()
                    ));
                }
                (retained, morse_timescales(params), grid)
            }
        };
        crate::spectral::check_domain(packet.basis(), &grid)?;
        let raw_norm = crate::spectral::packet_norm(&packet);
        let packet = if config.packet.renormalize {
            packet.renormalized()
        } else {
            packet
        };
        Ok(Self {
            config: config.clone(),
            packet,
            grid,
            timescales,
            raw_norm,
            warnings,
        })
    }
}

/// Quantum number whose level lies closest to `energy`, from the
/// asymptotic Airy-zero formula.
fn bouncer_index_estimate(energy: f64) -> usize {
    ((2.0 * energy.powf(1.5) / (3.0 * PI) + 0.25).round() as usize).max(1)
}

/// Defaults shared by every preset.
pub(crate) fn default_packet() -> PacketConfig {
    PacketConfig {
        renormalize: false,
        truncation: TRUNCATION_THRESHOLD,
        n_window: 0,
    }
}

pub(crate) fn default_time() -> TimeConfig {
    TimeConfig {
        t_max_over_trev: 1.0,
        n_samples: 4096,
    }
}

pub(crate) fn default_grid(x_min: f64, x_max: f64, n_points: usize) -> GridConfig {
    GridConfig {
        x_min,
        x_max,
        n_points,
        zero_pad: DEFAULT_ZERO_PAD,
    }
}
