//! Infinite square well on `[0, L]` in units `2m = ħ = 1`.
//!
//! Eigenstates `u_n(x) = √(2/L) sin(nπx/L)`, energies `E_n = n²π²/L²`,
//! `n = 1, 2, …`. Momentum eigenfunctions use the transform kernel
//! `(2π)^{-1/2} e^{−ipx}`, so a packet launched with `p0 > 0` has its
//! momentum density centred on `+p0`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{Eigenbasis, SystemKind, Timescales};

/// Eigenbasis of a well of length `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWell {
    length: f64,
}

impl SquareWell {
    pub fn new(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Parameter(format!("well length must be positive, got {length}")));
        }
        Ok(Self { length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    fn wavenumber(&self, n: usize) -> f64 {
        n as f64 * PI / self.length
    }
}

impl Eigenbasis for SquareWell {
    fn kind(&self) -> SystemKind {
        SystemKind::SquareWell
    }

    fn lowest_index(&self) -> usize {
        1
    }

    fn energy(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        let k = self.wavenumber(n);
        Ok(k * k)
    }

    fn eigenfunction(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        if !(0.0..=self.length).contains(&x) {
            return Err(Error::Domain(format!(
                "x = {x} outside the well [0, {}]",
                self.length
            )));
        }
        Ok((2.0 / self.length).sqrt() * (self.wavenumber(n) * x).sin())
    }

    fn domain(&self) -> (f64, f64) {
        (0.0, self.length)
    }

    fn momentum_eigenfunction(&self, n: usize, p: f64) -> Option<Complex64> {
        (n >= 1).then(|| sw_eval_phi_with(self.length, n, p))
    }
}

/// `E_n = n²π²` for the unit well.
pub fn sw_energy(n: usize) -> Result<f64> {
    SquareWell { length: 1.0 }.energy(n)
}

/// `u_n(x)` for the unit well.
pub fn sw_eval_u(n: usize, x: f64) -> Result<f64> {
    SquareWell { length: 1.0 }.eigenfunction(n, x)
}

/// Momentum eigenfunction `φ_n(p)` of the unit well.
pub fn sw_eval_phi(n: usize, p: f64) -> Complex64 {
    sw_eval_phi_with(1.0, n, p)
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        u.sin() / u
    }
}

// The bracket (−1)ⁿe^{−ipL} − 1 equals e^{−i(p∓k)L} − 1, which is factored
// around whichever of ±k is closer so that both poles cancel analytically.
fn sw_eval_phi_with(length: f64, n: usize, p: f64) -> Complex64 {
    let k = n as f64 * PI / length;
    let prefactor = 1.0 / (PI * length).sqrt();
    let (near, far) = if p >= 0.0 { (p - k, p + k) } else { (p + k, p - k) };
    let u = 0.5 * near * length;
    let (s, c) = u.sin_cos();
    let bracket = Complex64::new(0.0, -length * sinc(u)) * Complex64::new(c, -s);
    bracket * (prefactor * k / far)
}

/// Parameters of an initial Gaussian packet
/// `ψ(x,0) = exp[−(x−x0)²/2σ² + ip0(x−x0)] / √(σ√π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareWellParams {
    pub length: f64,
    pub x0: f64,
    pub p0: f64,
    pub sigma: f64,
}

impl SquareWellParams {
    pub fn new(length: f64, x0: f64, p0: f64, sigma: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(Error::Parameter(format!("L must be positive, got {length}")));
        }
        if !(x0 > 0.0 && x0 < length) {
            return Err(Error::Parameter(format!("x0 = {x0} must lie inside (0, {length})")));
        }
        if !(sigma > 0.0) {
            return Err(Error::Parameter(format!("sigma must be positive, got {sigma}")));
        }
        if !p0.is_finite() {
            return Err(Error::Parameter("p0 must be finite".into()));
        }
        Ok(Self {
            length,
            x0,
            p0,
            sigma,
        })
    }

    /// True when `x0 ± 3σ` leaves the well.
    pub fn near_wall(&self) -> bool {
        self.x0 - 3.0 * self.sigma < 0.0 || self.x0 + 3.0 * self.sigma > self.length
    }

    /// The unnormalised-in-the-box Gaussian at `x`.
    pub fn initial(&self, x: f64) -> Complex64 {
        let d = x - self.x0;
        let norm = 1.0 / (self.sigma * PI.sqrt()).sqrt();
        Complex64::from_polar(
            norm * (-d * d / (2.0 * self.sigma * self.sigma)).exp(),
            self.p0 * d,
        )
    }

    /// Quantum number closest to `p0 L/π`, at least 1.
    pub fn central_index(&self) -> usize {
        ((self.p0.abs() * self.length / PI).round() as usize).max(1)
    }
}

/// Expansion coefficients with a flag raised when the closed form is
/// being used outside its accuracy regime.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCoefficients {
    pub n_min: usize,
    pub coefficients: Vec<Complex64>,
    pub near_wall: bool,
}

/// Closed-form `a_n = ∫ u_n ψ₀ dx` with the integral extended over the real line.
pub fn sw_gaussian_coefficients(
    params: &SquareWellParams,
    n_min: usize,
    n_max: usize,
) -> Result<GaussianCoefficients> {
    if n_min < 1 || n_max < n_min {
        return Err(crate::error::index_error(
            n_min as i64,
            format!("invalid range {n_min}..={n_max}"),
        ));
    }
    let SquareWellParams {
        length,
        x0,
        p0,
        sigma,
    } = *params;
    let amp = 0.5 * (2.0 / length).sqrt() * (4.0 * PI * sigma * sigma).powf(0.25);
    let s2 = 0.5 * sigma * sigma;
    let coefficients = (n_min..=n_max)
        .map(|n| {
            let k = n as f64 * PI / length;
            let minus = Complex64::from_polar((-s2 * (k - p0).powi(2)).exp(), -k * x0);
            let plus = Complex64::from_polar((-s2 * (k + p0).powi(2)).exp(), k * x0);
            Complex64::new(0.0, amp) * (minus - plus)
        })
        .collect();
    Ok(GaussianCoefficients {
        n_min,
        coefficients,
        near_wall: params.near_wall(),
    })
}

/// `(T_cl, T_rev) = (L²/πn₀, 2L²/π)`.
pub fn sw_timescales(params: &SquareWellParams, n0: usize) -> Result<Timescales> {
    if n0 < 1 {
        return Err(crate::error::index_error(
            n0 as i64,
            "classical period needs n0 >= 1",
        ));
    }
    let l2 = params.length * params.length;
    Ok(Timescales {
        t_cl: l2 / (PI * n0 as f64),
        t_rev: 2.0 * l2 / PI,
    })
}
