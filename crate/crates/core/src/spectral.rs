//! Basis-agnostic spectral state and exact time propagation.
//!
//! A state is a finite set of expansion coefficients over the eigenbasis of one
//! of the model systems. Evolution to any time is a phase rotation of each
//! coefficient followed by resummation, so no time stepping is involved.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::bouncer::Bouncer;
use crate::error::{Error, Result};
use crate::grid::{Grid, PositionField, SpatialGrid};
use crate::morse::Morse;
use crate::square_well::SquareWell;

/// Default tolerance on `1 − Σ|a_n|²`.
pub const NORM_TOLERANCE: f64 = 1e-4;

/// Coefficients with `|a_n|²` below this are dropped by [`SpectralPacket::truncated`].
pub const TRUNCATION_THRESHOLD: f64 = 1e-12;

const TWO_PI_HI: f64 = 6.283_185_307_179_586;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    SquareWell,
    Bouncer,
    Morse,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SystemKind::SquareWell => "square-well",
            SystemKind::Bouncer => "bouncer",
            SystemKind::Morse => "morse",
        })
    }
}

/// Classical period and quantum revival time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Timescales {
    pub t_cl: f64,
    pub t_rev: f64,
}

/// An exactly solvable system with real, orthonormal eigenfunctions.
pub trait Eigenbasis {
    fn kind(&self) -> SystemKind;

    /// Smallest admissible quantum number.
    fn lowest_index(&self) -> usize;

    /// Largest admissible quantum number, if the spectrum is finite.
    fn highest_index(&self) -> Option<usize> {
        None
    }

    fn energy(&self, n: usize) -> Result<f64>;

    fn eigenfunction(&self, n: usize, x: f64) -> Result<f64>;

    /// Closed interval on which the eigenfunctions are defined.
    fn domain(&self) -> (f64, f64);

    /// Analytic momentum-space eigenfunction, when one is available.
    fn momentum_eigenfunction(&self, _n: usize, _p: f64) -> Option<Complex64> {
        None
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < self.lowest_index() {
            return Err(crate::error::index_error(
                n as i64,
                format!("{} indices start at {}", self.kind(), self.lowest_index()),
            ));
        }
        if let Some(hi) = self.highest_index() {
            if n > hi {
                return Err(crate::error::index_error(
                    n as i64,
                    format!("{} has no state above {}", self.kind(), hi),
                ));
            }
        }
        Ok(())
    }
}

/// One of the three model systems together with its parameters.
#[derive(Debug, Clone)]
pub enum System {
    SquareWell(SquareWell),
    Bouncer(Bouncer),
    Morse(Morse),
}

macro_rules! dispatch {
    ($self:ident, $b:ident => $e:expr) => {
        match $self {
            System::SquareWell($b) => $e,
            System::Bouncer($b) => $e,
            System::Morse($b) => $e,
        }
    };
}

impl Eigenbasis for System {
    fn kind(&self) -> SystemKind {
        dispatch!(self, b => b.kind())
    }
    fn lowest_index(&self) -> usize {
        dispatch!(self, b => b.lowest_index())
    }
    fn highest_index(&self) -> Option<usize> {
        dispatch!(self, b => b.highest_index())
    }
    fn energy(&self, n: usize) -> Result<f64> {
        dispatch!(self, b => b.energy(n))
    }
    fn eigenfunction(&self, n: usize, x: f64) -> Result<f64> {
        dispatch!(self, b => b.eigenfunction(n, x))
    }
    fn domain(&self) -> (f64, f64) {
        dispatch!(self, b => b.domain())
    }
    fn momentum_eigenfunction(&self, n: usize, p: f64) -> Option<Complex64> {
        dispatch!(self, b => b.momentum_eigenfunction(n, p))
    }
}

/// Expansion coefficients `a_n`, `n = n_min ..= n_max`, over a shared eigenbasis.
#[derive(Debug, Clone)]
pub struct SpectralPacket {
    basis: Arc<System>,
    n_min: usize,
    coefficients: Vec<Complex64>,
}

impl SpectralPacket {
    pub fn new(basis: Arc<System>, n_min: usize, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidPacket("empty coefficient range".into()));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidPacket("non-finite coefficient".into()));
        }
        let n_max = n_min + coefficients.len() - 1;
        basis
            .check_index(n_min)
            .and_then(|_| basis.check_index(n_max))
            .map_err(|e| Error::InvalidPacket(e.to_string()))?;
        Ok(Self {
            basis,
            n_min,
            coefficients,
        })
    }

    /// A packet occupying the single eigenstate `n`.
    pub fn eigenstate(basis: Arc<System>, n: usize) -> Result<Self> {
        Self::new(basis, n, vec![Complex64::new(1.0, 0.0)])
    }

    pub fn basis(&self) -> &System {
        &self.basis
    }

    pub fn basis_arc(&self) -> Arc<System> {
        Arc::clone(&self.basis)
    }

    pub fn n_min(&self) -> usize {
        self.n_min
    }

    pub fn n_max(&self) -> usize {
        self.n_min + self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        n.checked_sub(self.n_min)
            .and_then(|i| self.coefficients.get(i))
            .copied()
            .unwrap_or_default()
    }

    /// `(n, a_n)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.n_min + i, *c))
    }

    /// Index of the largest `|a_n|`.
    pub fn dominant_index(&self) -> usize {
        let (i, _) = self
            .coefficients
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, c)| {
                let w = c.norm_sqr();
                if w > best.1 {
                    (i, w)
                } else {
                    best
                }
            });
        self.n_min + i
    }

    /// Keeps the contiguous index window around the dominant state whose
    /// edges still carry `|a_n|² > threshold`. The norm is left as is.
    pub fn truncated(&self, threshold: f64) -> Self {
        let weights: Vec<f64> = self.coefficients.iter().map(|c| c.norm_sqr()).collect();
        let first = weights.iter().position(|&w| w > threshold);
        let last = weights.iter().rposition(|&w| w > threshold);
        match (first, last) {
            (Some(lo), Some(hi)) => Self {
                basis: Arc::clone(&self.basis),
                n_min: self.n_min + lo,
                coefficients: self.coefficients[lo..=hi].to_vec(),
            },
            _ => {
                let d = self.dominant_index() - self.n_min;
                Self {
                    basis: Arc::clone(&self.basis),
                    n_min: self.n_min + d,
                    coefficients: vec![self.coefficients[d]],
                }
            }
        }
    }

    /// Copy rescaled so that `Σ|a_n|² = 1`.
    pub fn renormalized(&self) -> Self {
        let scale = 1.0 / packet_norm(self).sqrt();
        Self {
            basis: Arc::clone(&self.basis),
            n_min: self.n_min,
            coefficients: self.coefficients.iter().map(|c| c * scale).collect(),
        }
    }

    /// Fails unless `Σ|a_n|² ∈ [1 − tol, 1 + 1e-12]`.
    pub fn check_norm(&self, tol: f64) -> Result<f64> {
        let norm = packet_norm(self);
        if norm < 1.0 - tol || norm > 1.0 + 1e-12 {
            return Err(Error::InvalidPacket(format!(
                "norm {norm:.12} outside [1 - {tol:e}, 1]"
            )));
        }
        Ok(norm)
    }
}

/// `Σ|a_n|²`.
pub fn packet_norm(packet: &SpectralPacket) -> f64 {
    packet.coefficients.iter().map(|c| c.norm_sqr()).sum()
}

/// `e^{−iEt}` with the phase reduced modulo 2π before the trig call.
///
/// The product `E·t` is split into a rounded part and its exact fma residual,
/// and 2π is carried as a two-term constant, so the reduced angle stays
/// accurate to a few ulps of 2π even for `|E·t| ~ 10⁷`.
pub fn phase_factor(energy: f64, t: f64) -> Complex64 {
    let prod = energy * t;
    let residual = energy.mul_add(t, -prod);
    let k = (prod / TWO_PI_HI).round();
    let reduced = (-k).mul_add(TWO_PI_HI, prod) - k * TWO_PI_LO + residual;
    let (s, c) = reduced.sin_cos();
    Complex64::new(c, -s)
}

/// `e^{−2πi·n·t/T_cl}`, exact at integer multiples of `T_cl`.
fn classical_phase(n: usize, t: f64, t_cl: f64) -> Complex64 {
    let cycles = n as f64 * (t / t_cl);
    let frac = cycles - cycles.round();
    let (s, c) = (2.0 * PI * frac).sin_cos();
    Complex64::new(c, -s)
}

/// `A(t) = Σ|a_n|² e^{−iE_n t}`.
pub fn autocorrelation(packet: &SpectralPacket, t: f64) -> Result<Complex64> {
    packet
        .iter()
        .map(|(n, a)| Ok(a.norm_sqr() * phase_factor(packet.basis.energy(n)?, t)))
        .sum()
}

/// `ψ(x_j, t) = Σ a_n u_n(x_j) e^{−iE_n t}` on `grid`.
pub fn evolve_position(packet: &SpectralPacket, grid: &SpatialGrid, t: f64) -> Result<PositionField> {
    Ok(Propagator::new(packet, grid)?.position(t))
}

/// `ψ_cl(x_j, t) = Σ a_n u_n(x_j) e^{−2πi n t/T_cl}` on `grid`.
pub fn classical_component(
    packet: &SpectralPacket,
    grid: &SpatialGrid,
    t: f64,
    t_cl: f64,
) -> Result<PositionField> {
    Propagator::new(packet, grid)?.classical(t, t_cl)
}

/// Fails unless `grid` lies inside the domain of `basis`.
pub fn check_domain(basis: &System, grid: &SpatialGrid) -> Result<()> {
    let (lo, hi) = basis.domain();
    let slack = 1e-12 * (1.0 + grid.x_min().abs().max(grid.x_max().abs()));
    if grid.x_min() < lo - slack || grid.x_max() > hi + slack {
        return Err(Error::Domain(format!(
            "grid [{}, {}] leaves the {} domain [{lo}, {hi}]",
            grid.x_min(),
            grid.x_max(),
            basis.kind()
        )));
    }
    Ok(())
}

/// Eigenfunction table of a packet on a fixed grid, reused across times.
#[derive(Debug, Clone)]
pub struct Propagator {
    grid: SpatialGrid,
    indices: Vec<usize>,
    energies: Vec<f64>,
    coefficients: Vec<Complex64>,
    weights: Vec<f64>,
    // row-major: one row of grid samples per retained state
    table: Vec<f64>,
}

impl Propagator {
    pub fn new(packet: &SpectralPacket, grid: &SpatialGrid) -> Result<Self> {
        let basis = packet.basis();
        check_domain(basis, grid)?;
        let (lo, hi) = basis.domain();
        let xs = grid.coords();
        let n_points = xs.len();
        let mut table = Vec::with_capacity(n_points * packet.coefficients().len());
        let mut indices = Vec::new();
        let mut energies = Vec::new();
        for (n, _) in packet.iter() {
            indices.push(n);
            energies.push(basis.energy(n)?);
            for &x in &xs {
                table.push(basis.eigenfunction(n, x.clamp(lo, hi))?);
            }
        }
        Ok(Self {
            grid: *grid,
            indices,
            energies,
            coefficients: packet.coefficients().to_vec(),
            weights: packet.coefficients().iter().map(|c| c.norm_sqr()).collect(),
            table,
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Phased coefficients `a_n e^{−iE_n t}`.
    pub fn phased(&self, t: f64) -> Vec<Complex64> {
        self.coefficients
            .iter()
            .zip(&self.energies)
            .map(|(a, &e)| a * phase_factor(e, t))
            .collect()
    }

    fn resum(&self, phased: &[Complex64]) -> PositionField {
        let n_points = self.grid.len();
        let mut values = vec![Complex64::default(); n_points];
        for (row, c) in self.table.chunks_exact(n_points).zip(phased) {
            for (v, &u) in values.iter_mut().zip(row) {
                *v += c * u;
            }
        }
        PositionField {
            grid: self.grid,
            values,
        }
    }

    pub fn position(&self, t: f64) -> PositionField {
        self.resum(&self.phased(t))
    }

    pub fn classical(&self, t: f64, t_cl: f64) -> Result<PositionField> {
        if !(t_cl > 0.0) {
            return Err(Error::Parameter(format!(
                "classical period must be positive, got {t_cl}"
            )));
        }
        let phased: Vec<Complex64> = self
            .coefficients
            .iter()
            .zip(&self.indices)
            .map(|(a, &n)| a * classical_phase(n, t, t_cl))
            .collect();
        Ok(self.resum(&phased))
    }

    pub fn autocorrelation(&self, t: f64) -> Complex64 {
        self.weights
            .iter()
            .zip(&self.energies)
            .map(|(&w, &e)| w * phase_factor(e, t))
            .sum()
    }
}

/// One row of a time sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub t_over_trev: f64,
    pub autocorr_sq: f64,
    pub s_rho: f64,
    pub s_gamma: f64,
    pub s_sum: f64,
}

impl TimeSeriesRecord {
    pub fn new(t: f64, t_rev: f64, autocorr_sq: f64, s_rho: f64, s_gamma: f64) -> Self {
        Self {
            t,
            t_over_trev: t / t_rev,
            autocorr_sq,
            s_rho,
            s_gamma,
            s_sum: s_rho + s_gamma,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square_well::{SquareWell, SquareWellParams};

    fn well() -> Arc<System> {
        Arc::new(System::SquareWell(SquareWell::new(1.0).unwrap()))
    }

    #[test]
    fn phase_factor_matches_naive_for_small_arguments() {
        for &(e, t) in &[(1.0, 0.3), (9.87, -2.5), (123.4, 0.01)] {
            let naive = Complex64::from_polar(1.0, -e * t);
            assert!((phase_factor(e, t) - naive).norm() < 1e-14);
        }
    }

    #[test]
    fn phase_factor_is_exact_for_square_well_revival() {
        // E_n T_rev = 2π n² for the well in 2m = ħ = L = 1 units
        let t_rev = 2.0 / PI;
        for n in [1usize, 7, 400, 460, 1000] {
            let e = (n * n) as f64 * PI * PI;
            let z = phase_factor(e, t_rev);
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-9, "n={n} z={z}");
        }
    }

    #[test]
    fn packet_norm_examples() {
        let b = well();
        let one = SpectralPacket::eigenstate(b.clone(), 3).unwrap();
        assert_eq!(packet_norm(&one), 1.0);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let two = SpectralPacket::new(
            b,
            1,
            vec![Complex64::new(h, 0.0), Complex64::default(), Complex64::new(0.0, h)],
        )
        .unwrap();
        assert!((packet_norm(&two) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_packets_are_rejected() {
        assert!(matches!(
            SpectralPacket::new(well(), 1, vec![]),
            Err(Error::InvalidPacket(_))
        ));
        assert!(matches!(
            SpectralPacket::new(well(), 0, vec![Complex64::new(1.0, 0.0)]),
            Err(Error::InvalidPacket(_))
        ));
    }

    #[test]
    fn grid_outside_domain_is_a_domain_error() {
        let p = SpectralPacket::eigenstate(well(), 1).unwrap();
        let g = SpatialGrid::new(-0.5, 1.0, 64).unwrap();
        assert!(matches!(evolve_position(&p, &g, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn stationary_state_density_is_time_independent() {
        let p = SpectralPacket::eigenstate(well(), 5).unwrap();
        let g = SpatialGrid::new(0.0, 1.0, 256).unwrap();
        let prop = Propagator::new(&p, &g).unwrap();
        let d0 = prop.position(0.0).density();
        for t in [0.1, 3.7, 1234.5] {
            let d = prop.position(t).density();
            let dev = d0
                .values
                .iter()
                .zip(&d.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(dev < 1e-12);
            assert!((prop.autocorrelation(t).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn classical_component_rejects_nonpositive_period() {
        let p = SpectralPacket::eigenstate(well(), 1).unwrap();
        let g = SpatialGrid::new(0.0, 1.0, 16).unwrap();
        assert!(matches!(
            classical_component(&p, &g, 0.0, 0.0),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn truncation_keeps_window_around_peak() {
        let params = SquareWellParams::new(1.0, 0.5, 400.0 * PI, 0.1).unwrap();
        let coeffs = crate::square_well::sw_gaussian_coefficients(&params, 300, 500).unwrap();
        let packet = SpectralPacket::new(well(), 300, coeffs.coefficients).unwrap();
        let t = packet.truncated(TRUNCATION_THRESHOLD);
        assert!(t.n_min() > 300 && t.n_max() < 500);
        assert!(t.coefficients().first().unwrap().norm_sqr() > TRUNCATION_THRESHOLD);
        assert!((packet_norm(&packet) - packet_norm(&t)).abs() < 1e-10);
        assert_eq!(t.dominant_index(), 400);
    }
}
