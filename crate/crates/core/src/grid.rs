//! Uniform sampling windows and the fields and densities that live on them.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A uniformly spaced one-dimensional lattice.
pub trait Grid {
    fn start(&self) -> f64;
    fn step(&self) -> f64;
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(&self, i: usize) -> f64 {
        self.start() + i as f64 * self.step()
    }

    fn coords(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.coord(i)).collect()
    }
}

/// Position window `[x_min, x_max]`, endpoints included, `n_points` a power of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Grid(format!(
                "x_max ({x_max}) must exceed x_min ({x_min})"
            )));
        }
        if n_points < 4 || !n_points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "n_points ({n_points}) must be a power of two >= 4"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Same spacing, coordinates scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.x_min * factor, self.x_max * factor, self.n_points)
    }
}

impl Grid for SpatialGrid {
    fn start(&self) -> f64 {
        self.x_min
    }
    fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }
    fn len(&self) -> usize {
        self.n_points
    }
}

/// FFT-conjugate momentum lattice `p_k = 2π(k − n/2)/(n·Δx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumGrid {
    dp: f64,
    n_points: usize,
}

impl MomentumGrid {
    /// Momentum lattice conjugate to `n_points` samples spaced by `dx`.
    pub fn conjugate_to(dx: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::Grid(format!(
                "momentum grid length {n_points} is not a power of two"
            )));
        }
        if !(dx > 0.0) {
            return Err(Error::Grid(format!("spacing {dx} must be positive")));
        }
        Ok(Self {
            dp: 2.0 * PI / (n_points as f64 * dx),
            n_points,
        })
    }

    pub fn p_min(&self) -> f64 {
        self.start()
    }

    pub fn p_max(&self) -> f64 {
        self.coord(self.n_points - 1)
    }
}

impl Grid for MomentumGrid {
    fn start(&self) -> f64 {
        -(self.n_points as f64 / 2.0) * self.dp
    }
    fn step(&self) -> f64 {
        self.dp
    }
    fn len(&self) -> usize {
        self.n_points
    }
}

/// Complex samples of a wave function on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField<G> {
    pub grid: G,
    pub values: Vec<Complex64>,
}

impl<G: Grid + Copy> ComplexField<G> {
    pub fn new(grid: G, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "field has {} samples, grid has {}",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// `|ψ|²` as a density profile.
    pub fn density(&self) -> DensityProfile<G> {
        DensityProfile {
            grid: self.grid,
            values: self.values.iter().map(|v| v.norm_sqr()).collect(),
        }
    }

    /// Riemann sum `Σ|ψ_j|² Δ`.
    pub fn riemann_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.step()
    }

    /// `⟨self|other⟩` by Simpson quadrature.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        let h = self.grid.step();
        let re: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.conj() * b).re)
            .collect();
        let im: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a.conj() * b).im)
            .collect();
        Complex64::new(
            crate::quadrature::simpson(&re, h),
            crate::quadrature::simpson(&im, h),
        )
    }
}

pub type PositionField = ComplexField<SpatialGrid>;
pub type MomentumField = ComplexField<MomentumGrid>;

/// Non-negative probability density sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile<G> {
    pub grid: G,
    pub values: Vec<f64>,
}

impl<G: Grid> DensityProfile<G> {
    pub fn integral(&self) -> f64 {
        crate::quadrature::simpson(&self.values, self.grid.step())
    }

    /// `∫|ρ − other| dx`.
    pub fn l1_distance(&self, other: &[f64]) -> f64 {
        let diff: Vec<f64> = self
            .values
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).abs())
            .collect();
        crate::quadrature::simpson(&diff, self.grid.step())
    }

    /// Samples reflected about the window centre.
    pub fn reflected(&self) -> Vec<f64> {
        self.values.iter().rev().copied().collect()
    }
}
