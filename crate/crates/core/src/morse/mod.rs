//! Morse oscillator `V(x) = D(e^{−2βx} − 2e^{−βx})`, `x = r/r0 − 1`, with ħ = 1.
//!
//! With `λ = √(2μD)·r0/β`, the bound states are
//! `ψ_n(ξ) = N e^{−ξ/2} ξ^{s/2} L_n^s(ξ)`, `ξ = 2λe^{−βx}`, `s = 2(λ − n − ½)`,
//! `E_n = −D(λ − n − ½)²/λ²`, for `n = 0 ..= ⌊λ − ½⌋`. The constants `N` are
//! fixed by quadrature in `x` at construction.

pub mod laguerre;

use std::f64::consts::PI;

use crate::error::{index_error, Error, Result};
use crate::grid::{Grid, SpatialGrid};
use crate::quadrature::simpson_fn;
use crate::spectral::{Eigenbasis, SystemKind, Timescales};

pub use laguerre::laguerre;

/// Density level that must not be exceeded at the window edges.
pub const EDGE_DENSITY: f64 = 1e-12;

/// Morse parameters plus the Gaussian level population.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams {
    pub dissociation: f64,
    pub beta: f64,
    pub r0: f64,
    pub mu: f64,
    pub n0: usize,
    pub sigma_n: f64,
}

impl MorseParams {
    /// Hydrogen iodide in atomic units, population centred on `n0 = 7`, width 3.
    pub fn hydrogen_iodide() -> Self {
        Self {
            dissociation: 0.1125,
            beta: 2.07932,
            r0: 3.04159,
            mu: 1819.99,
            n0: 7,
            sigma_n: 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("D", self.dissociation),
            ("beta", self.beta),
            ("r0", self.r0),
            ("mu", self.mu),
            ("sigma_n", self.sigma_n),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
            }
        }
        let lambda = morse_lambda(self);
        if !(lambda > 0.5) {
            return Err(Error::Parameter(format!("lambda = {lambda} supports no bound state")));
        }
        if self.n0 > bound_state_max(lambda) {
            return Err(Error::Parameter(format!(
                "n0 = {} exceeds the highest bound state {}",
                self.n0,
                bound_state_max(lambda)
            )));
        }
        Ok(())
    }
}

/// `λ = √(2μD)·r0/β`.
pub fn morse_lambda(params: &MorseParams) -> f64 {
    (2.0 * params.mu * params.dissociation).sqrt() * params.r0 / params.beta
}

/// `⌊λ − ½⌋`.
pub fn bound_state_max(lambda: f64) -> usize {
    (lambda - 0.5).floor() as usize
}

/// `E_n = −D(λ − n − ½)²/λ²`.
pub fn morse_energy(n: usize, params: &MorseParams) -> Result<f64> {
    let lambda = morse_lambda(params);
    if n > bound_state_max(lambda) {
        return Err(index_error(
            n as i64,
            format!("highest bound state is {}", bound_state_max(lambda)),
        ));
    }
    let d = lambda - n as f64 - 0.5;
    Ok(-params.dissociation * d * d / (lambda * lambda))
}

/// `(T_cl, T_rev) = (T_rev/(2λ − 1), 2πλ²/D)`.
pub fn morse_timescales(params: &MorseParams) -> Timescales {
    let lambda = morse_lambda(params);
    let t_rev = 2.0 * PI * lambda * lambda / params.dissociation;
    Timescales {
        t_cl: t_rev / (2.0 * lambda - 1.0),
        t_rev,
    }
}

/// Real non-negative `c_n ∝ exp(−(n−n0)²/2σ_n)` for `n_min ..= n_max`,
/// normalised so that `Σ|c_n|² = 1` over every bound state.
pub fn morse_population(params: &MorseParams, n_min: usize, n_max: usize) -> Result<Vec<f64>> {
    let top = bound_state_max(morse_lambda(params));
    if n_max > top || n_min > n_max {
        return Err(index_error(
            n_max as i64,
            format!("range {n_min}..={n_max} not within bound states 0..={top}"),
        ));
    }
    let weight = |n: usize| {
        let d = n as f64 - params.n0 as f64;
        (-d * d / params.sigma_n).exp()
    };
    let total: f64 = (0..=top).map(weight).sum();
    Ok((n_min..=n_max).map(|n| (weight(n) / total).sqrt()).collect())
}

/// Bound-state eigenbasis with numerically fixed normalisation.
#[derive(Debug, Clone, PartialEq)]
pub struct Morse {
    params: MorseParams,
    lambda: f64,
    // ln N_n including the shift applied in `log_envelope`
    log_norms: Vec<f64>,
}

impl Morse {
    pub fn new(params: MorseParams) -> Result<Self> {
        params.validate()?;
        let lambda = morse_lambda(&params);
        let mut morse = Self {
            params,
            lambda,
            log_norms: vec![0.0; bound_state_max(lambda) + 1],
        };
        for n in 0..morse.log_norms.len() {
            let (lo, hi) = morse.support(n);
            let panels = (((hi - lo) / 1e-3) as usize).max(1 << 14);
            let raw = simpson_fn(|x| morse.raw(n, x).powi(2), lo, hi, panels);
            morse.log_norms[n] = -0.5 * raw.ln();
        }
        Ok(morse)
    }

    pub fn params(&self) -> &MorseParams {
        &self.params
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn bound_states(&self) -> usize {
        self.log_norms.len()
    }

    pub fn order(&self, n: usize) -> f64 {
        2.0 * (self.lambda - n as f64 - 0.5)
    }

    pub fn xi(&self, x: f64) -> f64 {
        2.0 * self.lambda * (-self.params.beta * x).exp()
    }

    // ln(e^{−ξ/2} ξ^{s/2}) shifted by its maximum over ξ, which sits at ξ = s
    fn log_envelope(&self, s: f64, xi: f64) -> f64 {
        let peak = 0.5 * s * (s.ln() - 1.0);
        -0.5 * xi + 0.5 * s * xi.ln() - peak
    }

    fn raw(&self, n: usize, x: f64) -> f64 {
        let s = self.order(n);
        let xi = self.xi(x);
        let env = self.log_envelope(s, xi);
        if env < -745.0 {
            return 0.0;
        }
        env.exp() * laguerre(n, s, xi)
    }

    /// Interval outside which the density of state `n` is below `e^{−80}` of its peak.
    pub fn support(&self, n: usize) -> (f64, f64) {
        let s = self.order(n);
        let beta = self.params.beta;
        let far = ((2.0 * self.lambda).ln() + 80.0 / s) / beta + 1.0;
        let near = -((4.0 * (n as f64 + s + 40.0) / (2.0 * self.lambda)).ln() / beta) - 0.2;
        let step = 2e-3;
        let count = ((far - near) / step).ceil() as usize;
        let dens: Vec<f64> = (0..=count)
            .map(|i| self.raw(n, near + i as f64 * step).powi(2))
            .collect();
        let peak = dens.iter().copied().fold(0.0, f64::max);
        let cut = peak * (-80f64).exp();
        let first = dens.iter().position(|&d| d > cut).unwrap_or(0);
        let last = dens.iter().rposition(|&d| d > cut).unwrap_or(count);
        (
            near + first.saturating_sub(1) as f64 * step,
            near + (last + 1).min(count) as f64 * step,
        )
    }

    /// Smallest window containing `base` on which every state up to `n_max`
    /// has density below [`EDGE_DENSITY`] at both edges. The spacing of `base`
    /// is kept or refined and the point count stays a power of two.
    pub fn window(&self, base: &SpatialGrid, n_max: usize) -> Result<SpatialGrid> {
        let mut lo = base.x_min();
        let mut hi = base.x_max();
        let dens = |n: usize, x: f64| self.eigenfunction(n, x).map(|v| v * v);
        for n in 0..=n_max {
            while dens(n, lo)? > EDGE_DENSITY {
                lo -= 0.1;
            }
            while dens(n, hi)? > EDGE_DENSITY {
                hi += 0.25;
            }
        }
        if lo == base.x_min() && hi == base.x_max() {
            return Ok(*base);
        }
        let needed = ((hi - lo) / base.step()).ceil() as usize + 1;
        SpatialGrid::new(lo, hi, needed.next_power_of_two())
    }
}

impl Eigenbasis for Morse {
    fn kind(&self) -> SystemKind {
        SystemKind::Morse
    }

    fn lowest_index(&self) -> usize {
        0
    }

    fn highest_index(&self) -> Option<usize> {
        Some(self.log_norms.len() - 1)
    }

    fn energy(&self, n: usize) -> Result<f64> {
        morse_energy(n, &self.params)
    }

    fn eigenfunction(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        if !x.is_finite() {
            return Err(Error::Domain(format!("x = {x}")));
        }
        let s = self.order(n);
        let xi = self.xi(x);
        let env = self.log_envelope(s, xi) + self.log_norms[n];
        if env < -745.0 {
            return Ok(0.0);
        }
        Ok(env.exp() * laguerre(n, s, xi))
    }

    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}
