//! Conjugate-space transform, Shannon entropies and per-time sweep records.
//!
//! The continuous transform `φ(p) = (2π)^{-1/2} ∫ ψ(x) e^{−ipx} dx` is
//! discretised as `φ(p_k) = Δx (2π)^{-1/2} e^{−ip_k x_min} DFT_k[ψ_j (−1)^j]`
//! on the zero-padded lattice `p_k = 2π(k − M/2)/(MΔx)`. The `(−1)^j`
//! modulation centres `p = 0` at `k = M/2` without a separate shift pass.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{DensityProfile, Grid, MomentumField, MomentumGrid, PositionField, SpatialGrid};
use crate::quadrature::simpson;
use crate::spectral::{packet_norm, Eigenbasis, Propagator, SpectralPacket, TimeSeriesRecord};

/// `1 + ln π`, the entropic uncertainty floor for `S_ρ + S_γ`.
pub const ENTROPY_BOUND: f64 = 2.144_729_885_849_400_2;

pub const DEFAULT_ZERO_PAD: usize = 4;

/// Densities below this are treated as zero inside `ρ ln ρ`.
const LOG_FLOOR: f64 = 1e-300;

/// Planned forward/inverse transform between a spatial grid and its padded
/// momentum lattice. Cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct FourierTransform {
    grid: SpatialGrid,
    zero_pad: usize,
    momentum: MomentumGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierTransform")
            .field("grid", &self.grid)
            .field("zero_pad", &self.zero_pad)
            .field("momentum", &self.momentum)
            .finish()
    }
}

impl FourierTransform {
    pub fn new(grid: SpatialGrid, zero_pad: usize) -> Result<Self> {
        if zero_pad == 0 || !zero_pad.is_power_of_two() {
            return Err(Error::Grid(format!(
                "zero padding factor {zero_pad} must be a power of two"
            )));
        }
        let m = grid.len() * zero_pad;
        let momentum = MomentumGrid::conjugate_to(grid.step(), m)?;
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid,
            zero_pad,
            momentum,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        })
    }

    pub fn spatial_grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn momentum_grid(&self) -> &MomentumGrid {
        &self.momentum
    }

    pub fn zero_pad(&self) -> usize {
        self.zero_pad
    }

    pub fn forward(&self, field: &PositionField) -> Result<MomentumField> {
        if field.grid != self.grid || field.values.len() != self.grid.len() {
            return Err(Error::Grid("field does not live on the planned grid".into()));
        }
        let m = self.momentum.len();
        let mut buf = vec![Complex64::default(); m];
        for (j, (b, v)) in buf.iter_mut().zip(&field.values).enumerate() {
            *b = if j % 2 == 0 { *v } else { -*v };
        }
        self.forward.process(&mut buf);
        let scale = self.grid.step() / (2.0 * PI).sqrt();
        let x_min = self.grid.x_min();
        for (k, b) in buf.iter_mut().enumerate() {
            let p = self.momentum.coord(k);
            *b *= Complex64::from_polar(scale, -p * x_min);
        }
        Ok(MomentumField {
            grid: self.momentum,
            values: buf,
        })
    }

    /// Inverse transform, truncated back to the unpadded spatial grid.
    pub fn inverse(&self, field: &MomentumField) -> Result<PositionField> {
        if field.grid != self.momentum {
            return Err(Error::Grid("field does not live on the planned momentum grid".into()));
        }
        let x_min = self.grid.x_min();
        let scale = self.momentum.step() / (2.0 * PI).sqrt();
        let mut buf: Vec<Complex64> = field
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::from_polar(scale, self.momentum.coord(k) * x_min))
            .collect();
        self.inverse.process(&mut buf);
        buf.truncate(self.grid.len());
        for (j, b) in buf.iter_mut().enumerate() {
            if j % 2 == 1 {
                *b = -*b;
            }
        }
        Ok(PositionField {
            grid: self.grid,
            values: buf,
        })
    }
}

/// One-shot forward transform with the default padding.
pub fn to_momentum(field: &PositionField) -> Result<MomentumField> {
    FourierTransform::new(field.grid, DEFAULT_ZERO_PAD)?.forward(field)
}

/// `−∫ρ ln ρ` by composite Simpson, with `0·ln 0 = 0`.
pub fn shannon_entropy<G: Grid>(density: &DensityProfile<G>) -> Result<f64> {
    let mut integrand = Vec::with_capacity(density.values.len());
    for &v in &density.values {
        if v < -1e-12 || v.is_nan() {
            return Err(Error::Data(format!("density value {v} is negative")));
        }
        let v = v.max(0.0);
        integrand.push(-v * v.max(LOG_FLOOR).ln());
    }
    Ok(simpson(&integrand, density.grid.step()))
}

/// How `γ(p, t)` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MomentumPathway {
    /// FFT of the sampled position wave function.
    #[default]
    Fft,
    /// Resummation of analytic momentum eigenfunctions.
    Analytic,
}

/// Per-row conservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub packet_norm: f64,
    /// Simpson `∫ρ dx`.
    pub position_norm: f64,
    /// Simpson `∫γ dp`.
    pub momentum_norm: f64,
    /// `|Σ|φ_k|²Δp − Σ|ψ_j|²Δx|`.
    pub parseval_error: f64,
    /// `max_j |ψ_j − F⁻¹Fψ_j|`, when computed.
    pub roundtrip_error: Option<f64>,
}

/// Everything needed to produce sweep rows for one packet.
#[derive(Debug, Clone)]
pub struct RecordEngine {
    propagator: Propagator,
    transform: FourierTransform,
    analytic: Option<Vec<Complex64>>,
    t_rev: f64,
    packet_norm: f64,
    check_roundtrip: bool,
}

impl RecordEngine {
    pub fn new(
        packet: &SpectralPacket,
        grid: &SpatialGrid,
        zero_pad: usize,
        pathway: MomentumPathway,
        t_rev: f64,
    ) -> Result<Self> {
        if !(t_rev > 0.0) {
            return Err(Error::Parameter(format!("T_rev must be positive, got {t_rev}")));
        }
        let propagator = Propagator::new(packet, grid)?;
        let transform = FourierTransform::new(*grid, zero_pad)?;
        let analytic = match pathway {
            MomentumPathway::Fft => None,
            MomentumPathway::Analytic => {
                let ps = transform.momentum_grid().coords();
                let basis = packet.basis();
                let mut table = Vec::with_capacity(ps.len() * packet.coefficients().len());
                for (n, _) in packet.iter() {
                    for &p in &ps {
                        table.push(basis.momentum_eigenfunction(n, p).ok_or_else(|| {
                            Error::Parameter(format!(
                                "{} has no analytic momentum eigenfunctions",
                                basis.kind()
                            ))
                        })?);
                    }
                }
                Some(table)
            }
        };
        Ok(Self {
            propagator,
            transform,
            analytic,
            t_rev,
            packet_norm: packet_norm(packet),
            check_roundtrip: false,
        })
    }

    /// Also measure the inverse∘forward residual for every record.
    pub fn with_roundtrip_check(mut self, on: bool) -> Self {
        self.check_roundtrip = on;
        self
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn transform(&self) -> &FourierTransform {
        &self.transform
    }

    pub fn t_rev(&self) -> f64 {
        self.t_rev
    }

    pub fn position(&self, t: f64) -> PositionField {
        self.propagator.position(t)
    }

    /// `φ(p, t)` via the configured pathway.
    pub fn momentum(&self, t: f64) -> Result<MomentumField> {
        match &self.analytic {
            None => self.transform.forward(&self.propagator.position(t)),
            Some(table) => Ok(self.analytic_momentum(table, t)),
        }
    }

    fn analytic_momentum(&self, table: &[Complex64], t: f64) -> MomentumField {
        let grid = *self.transform.momentum_grid();
        let m = grid.len();
        let mut values = vec![Complex64::default(); m];
        for (row, c) in table.chunks_exact(m).zip(self.propagator.phased(t)) {
            for (v, u) in values.iter_mut().zip(row) {
                *v += c * u;
            }
        }
        MomentumField { grid, values }
    }

    pub fn record(&self, t: f64) -> Result<TimeSeriesRecord> {
        Ok(self.record_with_diagnostics(t)?.0)
    }

    pub fn record_with_diagnostics(&self, t: f64) -> Result<(TimeSeriesRecord, Diagnostics)> {
        let psi = self.propagator.position(t);
        let fft = self.transform.forward(&psi)?;
        let phi = match &self.analytic {
            None => fft.clone(),
            Some(table) => self.analytic_momentum(table, t),
        };
        let rho = psi.density();
        let gamma = phi.density();
        let s_rho = shannon_entropy(&rho)?;
        let s_gamma = shannon_entropy(&gamma)?;
        let a = self.propagator.autocorrelation(t);
        let record = TimeSeriesRecord::new(t, self.t_rev, a.norm_sqr(), s_rho, s_gamma);
        let roundtrip_error = if self.check_roundtrip {
            let back = self.transform.inverse(&fft)?;
            Some(
                back.values
                    .iter()
                    .zip(&psi.values)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max),
            )
        } else {
            None
        };
        let diagnostics = Diagnostics {
            packet_norm: self.packet_norm,
            position_norm: rho.integral(),
            momentum_norm: gamma.integral(),
            parseval_error: (fft.riemann_norm() - psi.riemann_norm()).abs(),
            roundtrip_error,
        };
        Ok((record, diagnostics))
    }
}

/// Builds a one-off engine and returns the row at `t`.
pub fn entropy_record(
    packet: &SpectralPacket,
    grid: &SpatialGrid,
    zero_pad: usize,
    pathway: MomentumPathway,
    t_rev: f64,
    t: f64,
) -> Result<TimeSeriesRecord> {
    RecordEngine::new(packet, grid, zero_pad, pathway, t_rev)?.record(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_field(grid: SpatialGrid, x0: f64, sigma: f64, p0: f64) -> PositionField {
        let norm = 1.0 / (sigma * PI.sqrt()).sqrt();
        let values = grid
            .coords()
            .into_iter()
            .map(|x| {
                let d = x - x0;
                Complex64::from_polar(norm * (-d * d / (2.0 * sigma * sigma)).exp(), p0 * d)
            })
            .collect();
        PositionField { grid, values }
    }

    #[test]
    fn bound_constant() {
        assert!((ENTROPY_BOUND - (1.0 + PI.ln())).abs() < 1e-15);
    }

    #[test]
    fn gaussian_maps_to_gaussian() {
        let sigma = 0.1;
        let grid = SpatialGrid::new(-2.0, 2.0, 1 << 12).unwrap();
        let phi = to_momentum(&gaussian_field(grid, 0.0, sigma, 0.0)).unwrap();
        let err = phi
            .grid
            .coords()
            .iter()
            .zip(&phi.values)
            .map(|(&p, v)| {
                let exact = sigma / PI.sqrt() * (-sigma * sigma * p * p).exp();
                (v.norm_sqr() - exact).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    #[test]
    fn shifted_gaussian_carries_its_momentum() {
        let grid = SpatialGrid::new(0.0, 1.0, 1 << 12).unwrap();
        let phi = to_momentum(&gaussian_field(grid, 0.5, 0.05, 300.0)).unwrap();
        let (k, _) = phi
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap();
        assert!((phi.grid.coord(k) - 300.0).abs() < phi.grid.step());
    }

    #[test]
    fn parseval_and_roundtrip() {
        let grid = SpatialGrid::new(-1.0, 3.0, 1 << 10).unwrap();
        let psi = gaussian_field(grid, 0.7, 0.2, 13.0);
        let ft = FourierTransform::new(grid, 4).unwrap();
        let phi = ft.forward(&psi).unwrap();
        assert!((phi.riemann_norm() - psi.riemann_norm()).abs() < 1e-10);
        let back = ft.inverse(&phi).unwrap();
        let err = back
            .values
            .iter()
            .zip(&psi.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn rejects_foreign_fields_and_bad_padding() {
        let g1 = SpatialGrid::new(0.0, 1.0, 64).unwrap();
        let g2 = SpatialGrid::new(0.0, 2.0, 64).unwrap();
        let ft = FourierTransform::new(g1, 2).unwrap();
        assert!(ft.forward(&gaussian_field(g2, 1.0, 0.1, 0.0)).is_err());
        assert!(FourierTransform::new(g1, 3).is_err());
    }

    #[test]
    fn entropies_of_reference_densities() {
        let g = SpatialGrid::new(0.0, 1.0, 1024).unwrap();
        let uniform = DensityProfile {
            grid: g,
            values: vec![1.0; 1024],
        };
        assert!(shannon_entropy(&uniform).unwrap().abs() < 1e-14);

        let g2 = SpatialGrid::new(0.0, 2.0, 1024).unwrap();
        let half = DensityProfile {
            grid: g2,
            values: vec![0.5; 1024],
        };
        assert!((shannon_entropy(&half).unwrap() - 2f64.ln()).abs() < 1e-14);

        let sigma = 0.1;
        let rho = gaussian_field(g, 0.5, sigma, 0.0).density();
        let expect = 0.5 * (1.0 + PI.ln()) + sigma.ln();
        assert!((shannon_entropy(&rho).unwrap() - expect).abs() < 1e-9);
        assert!((expect + 1.230_220_9).abs() < 1e-6);
    }

    #[test]
    fn zeros_and_negatives() {
        let g = SpatialGrid::new(0.0, 1.0, 8).unwrap();
        let mut d = DensityProfile {
            grid: g,
            values: vec![0.0; 8],
        };
        assert_eq!(shannon_entropy(&d).unwrap(), 0.0);
        d.values[3] = -1e-14;
        assert!(shannon_entropy(&d).is_ok());
        d.values[3] = -1e-6;
        assert!(matches!(shannon_entropy(&d), Err(Error::Data(_))));
    }

    #[test]
    fn entropy_shifts_by_log_of_scale() {
        let c = 2.5;
        let g = SpatialGrid::new(-3.0, 3.0, 1 << 12).unwrap();
        let gc = g.scaled(c).unwrap();
        let rho = |x: f64| {
            let a = (-(x - 0.3).powi(2) / 0.08).exp();
            let b = 0.5 * (-(x + 0.7).powi(2) / 0.02).exp();
            (a + b) / (0.08f64 * PI).sqrt() / (1.0 + 0.5 * (0.02f64 / 0.08).sqrt())
        };
        let d = DensityProfile {
            grid: g,
            values: g.coords().iter().map(|&x| rho(x)).collect(),
        };
        let dc = DensityProfile {
            grid: gc,
            values: gc.coords().iter().map(|&y| rho(y / c) / c).collect(),
        };
        let s = shannon_entropy(&d).unwrap();
        let sc = shannon_entropy(&dc).unwrap();
        assert!((sc - s - c.ln()).abs() < 1e-8);
    }
}
