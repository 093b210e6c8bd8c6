//! Quantum bouncer: a particle above a hard floor in uniform gravity.
//!
//! Lengths are in units of the gravitational length and energies in units of
//! `m g l_g`, which turns the problem into `−u'' + z u = E u` on `z ≥ 0`.
//! The eigenstates are `u_n(z) = N_n Ai(z − z_n)` with `E_n = z_n`, where
//! `−z_n` is the `n`-th zero of Ai and `N_n = 1/|Ai'(−z_n)|`.

pub mod airy;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::simpson_fn;
use crate::spectral::{Eigenbasis, SystemKind, Timescales};

pub use airy::{airy, airy_ai, airy_ai_prime, airy_zero, Airy};

/// Panels used for each coefficient integral.
pub const COEFFICIENT_PANELS: usize = 1 << 13;

/// Eigenbasis with a precomputed table of zeros and normalisation constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Bouncer {
    zeros: Vec<f64>,
    norms: Vec<f64>,
}

impl Bouncer {
    /// Tabulates `z_n` and `N_n` for `n = 1 ..= max_index`.
    pub fn new(max_index: usize) -> Result<Self> {
        let mut zeros = Vec::with_capacity(max_index);
        let mut norms = Vec::with_capacity(max_index);
        for n in 1..=max_index {
            let z = airy_zero(n)?;
            zeros.push(z);
            norms.push(1.0 / airy_ai_prime(-z).abs());
        }
        Ok(Self { zeros, norms })
    }

    pub fn table_len(&self) -> usize {
        self.zeros.len()
    }

    /// `z_n`, from the table when available.
    pub fn zero(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        match self.zeros.get(n - 1) {
            Some(&z) => Ok(z),
            None => airy_zero(n),
        }
    }

    pub fn normalisation(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        match self.norms.get(n - 1) {
            Some(&v) => Ok(v),
            None => Ok(1.0 / airy_ai_prime(-airy_zero(n)?).abs()),
        }
    }

    /// Index whose eigenvalue `z_n` lies closest to `energy`.
    pub fn index_near(&self, energy: f64) -> Result<usize> {
        let guess = ((8.0 * energy.max(0.0).powf(1.5) / (3.0 * PI) + 1.0) / 4.0).round() as usize;
        let mut best = guess.max(1);
        let mut best_gap = (self.zero(best)? - energy).abs();
        for n in guess.saturating_sub(2).max(1)..=guess + 2 {
            let gap = (self.zero(n)? - energy).abs();
            if gap < best_gap {
                best = n;
                best_gap = gap;
            }
        }
        Ok(best)
    }
}

impl Eigenbasis for Bouncer {
    fn kind(&self) -> SystemKind {
        SystemKind::Bouncer
    }

    fn lowest_index(&self) -> usize {
        1
    }

    fn energy(&self, n: usize) -> Result<f64> {
        self.zero(n)
    }

    fn eigenfunction(&self, n: usize, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(Error::Domain(format!("bouncer height z = {z} below the floor")));
        }
        if z == 0.0 {
            self.check_index(n)?;
            return Ok(0.0);
        }
        Ok(self.normalisation(n)? * airy_ai(z - self.zero(n)?))
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// Gaussian launched from height `z0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BouncerParams {
    pub z0: f64,
    pub sigma: f64,
    pub p0: f64,
}

impl BouncerParams {
    pub fn new(z0: f64, sigma: f64, p0: f64) -> Result<Self> {
        if !(z0 > 0.0) {
            return Err(Error::Parameter(format!("z0 must be positive, got {z0}")));
        }
        if !(sigma > 0.0) {
            return Err(Error::Parameter(format!("sigma must be positive, got {sigma}")));
        }
        if z0 - 4.0 * sigma <= 0.0 {
            return Err(Error::Parameter(format!(
                "packet at z0 = {z0} with sigma = {sigma} touches the floor"
            )));
        }
        if !p0.is_finite() {
            return Err(Error::Parameter("p0 must be finite".into()));
        }
        Ok(Self { z0, sigma, p0 })
    }

    pub fn initial(&self, z: f64) -> Complex64 {
        let d = z - self.z0;
        let norm = 1.0 / (self.sigma * PI.sqrt()).sqrt();
        Complex64::from_polar(
            norm * (-d * d / (2.0 * self.sigma * self.sigma)).exp(),
            self.p0 * d,
        )
    }
}

/// `a_n = ∫₀^∞ u_n(z) ψ₀(z) dz` by composite Simpson over `z0 ± 10σ`.
///
/// Fails with [`Error::InsufficientRange`] when the captured norm falls
/// short of `1 − 10⁻⁴`.
pub fn bouncer_gaussian_coefficients(
    bouncer: &Bouncer,
    params: &BouncerParams,
    n_min: usize,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    if n_min < 1 || n_max < n_min {
        return Err(crate::error::index_error(
            n_min as i64,
            format!("invalid range {n_min}..={n_max}"),
        ));
    }
    let a = (params.z0 - 10.0 * params.sigma).max(0.0);
    let b = params.z0 + 10.0 * params.sigma;
    let coefficients = (n_min..=n_max)
        .map(|n| {
            let norm = bouncer.normalisation(n)?;
            let zn = bouncer.zero(n)?;
            let u = |z: f64| norm * airy_ai(z - zn);
            let re = simpson_fn(|z| u(z) * params.initial(z).re, a, b, COEFFICIENT_PANELS);
            let im = if params.p0 == 0.0 {
                0.0
            } else {
                simpson_fn(|z| u(z) * params.initial(z).im, a, b, COEFFICIENT_PANELS)
            };
            Ok(Complex64::new(re, im))
        })
        .collect::<Result<Vec<_>>>()?;
    let captured: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
    let deficit = 1.0 - captured;
    if deficit > crate::spectral::NORM_TOLERANCE {
        return Err(Error::InsufficientRange { captured, deficit });
    }
    Ok(coefficients)
}

/// `(T_cl, T_rev) = (2√z0, 4z0²/π)`.
pub fn bouncer_timescales(params: &BouncerParams) -> Timescales {
    Timescales {
        t_cl: 2.0 * params.z0.sqrt(),
        t_rev: 4.0 * params.z0 * params.z0 / PI,
    }
}
