//! Spectral wave-packet propagation in exactly solvable one-dimensional
//! systems, with position/momentum Shannon entropies and fractional revival
//! detection.
//!
//! Three model systems are provided: the infinite square well
//! ([`square_well`]), the gravitational bouncer ([`bouncer`]) and the Morse
//! oscillator ([`morse`]). A [`SpectralPacket`] holds expansion coefficients
//! over one of them; [`fourier::RecordEngine`] turns a packet into rows of
//! `(t, |A|², S_ρ, S_γ, S_ρ+S_γ)`, and [`revival`] locates and labels the
//! revival signatures in those rows. [`scenario`] wires everything into
//! reproducible, preset-driven sweeps.

pub mod bouncer;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod morse;
pub mod quadrature;
pub mod revival;
pub mod scenario;
pub mod spectral;
pub mod square_well;

pub use error::{Error, Result};
pub use grid::{ComplexField, DensityProfile, Grid, MomentumGrid, SpatialGrid};
pub use spectral::{
    autocorrelation, classical_component, evolve_position, packet_norm, Eigenbasis,
    SpectralPacket, System, SystemKind, TimeSeriesRecord, Timescales,
};
