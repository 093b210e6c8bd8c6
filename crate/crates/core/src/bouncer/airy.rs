//! Airy function of the first kind on the real line.
//!
//! | region            | method                                              |
//! |-------------------|-----------------------------------------------------|
//! | `x > 100`         | reported as underflow, value 0                      |
//! | `6 < x ≤ 100`     | exponentially decaying asymptotic series            |
//! | `−4 ≤ x ≤ 6`      | Maclaurin series                                    |
//! | `−10 ≤ x < −4`    | Taylor series about tabulated anchors every 0.5     |
//! | `x < −10`         | oscillatory (modulus/phase) asymptotic series       |
//!
//! The Maclaurin series loses about `e^{ζ}` ulps to cancellation
//! (`ζ = ⅔|x|^{3/2}`), which is why it stops at `x = −4`. The anchors on
//! `[−10, −4]` are built once by Taylor-stepping the Airy equation
//! `y'' = xy` from the origin in steps of 0.25; that direction is stable
//! because both solutions oscillate there.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{index_error, Result};

/// Ai(0) = 3^{-2/3}/Γ(2/3)
pub const AI_ZERO: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = −3^{-1/3}/Γ(1/3)
pub const AI_PRIME_ZERO: f64 = -0.258_819_403_792_806_8;

pub const SERIES_UPPER: f64 = 6.0;
pub const SERIES_LOWER: f64 = -4.0;
pub const OSCILLATORY_CROSSOVER: f64 = -10.0;
pub const UNDERFLOW_THRESHOLD: f64 = 100.0;

const ANCHOR_SPACING: f64 = 0.5;
const ANCHOR_SUBSTEPS: usize = 2;

/// `Ai(x)` and `Ai'(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Airy {
    pub ai: f64,
    pub ai_prime: f64,
    /// Set when `x` lies beyond [`UNDERFLOW_THRESHOLD`] and zeros were returned.
    pub underflow: bool,
}

pub fn airy(x: f64) -> Airy {
    let (ai, ai_prime) = if x.is_nan() {
        (f64::NAN, f64::NAN)
    } else if x > UNDERFLOW_THRESHOLD {
        return Airy {
            ai: 0.0,
            ai_prime: 0.0,
            underflow: true,
        };
    } else if x > SERIES_UPPER {
        asymptotic_decaying(x)
    } else if x >= SERIES_LOWER {
        maclaurin(x)
    } else if x >= OSCILLATORY_CROSSOVER {
        anchored(x)
    } else {
        asymptotic_oscillatory(-x)
    };
    Airy {
        ai,
        ai_prime,
        underflow: false,
    }
}

pub fn airy_ai(x: f64) -> f64 {
    airy(x).ai
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy(x).ai_prime
}

/// Power series of the solution through `(a, y, y')`, evaluated at `a + h`.
///
/// Coefficients follow `c_{k+2} = (a c_k + c_{k−1}) / ((k+1)(k+2))`.
pub(crate) fn taylor_step(a: f64, y: f64, yp: f64, h: f64) -> (f64, f64) {
    // c holds (c_{k-1}, c_k, c_{k+1}); hpow = h^{k+1}
    let mut c = [y, yp, 0.5 * a * y];
    let mut hpow = h * h;
    let mut value = y + h * yp + c[2] * hpow;
    let mut deriv = yp + 2.0 * c[2] * h;
    let mut quiet = 0;
    for k in 1..400usize {
        let idx = k + 2;
        let next = (a * c[1] + c[0]) / ((k + 1) * (k + 2)) as f64;
        let dterm = idx as f64 * next * hpow;
        hpow *= h;
        let term = next * hpow;
        value += term;
        deriv += dterm;
        c = [c[1], c[2], next];
        let scale = value.abs().max(deriv.abs()).max(1e-300);
        if term.abs().max(dterm.abs()) <= 1e-17 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (value, deriv)
}

fn maclaurin(x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (AI_ZERO, AI_PRIME_ZERO);
    }
    taylor_step(0.0, AI_ZERO, AI_PRIME_ZERO, x)
}

fn anchors() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = ((-OSCILLATORY_CROSSOVER) / ANCHOR_SPACING).round() as usize;
        let h = -ANCHOR_SPACING / ANCHOR_SUBSTEPS as f64;
        let mut table = Vec::with_capacity(count + 1);
        let (mut y, mut yp) = (AI_ZERO, AI_PRIME_ZERO);
        table.push((y, yp));
        for i in 0..count * ANCHOR_SUBSTEPS {
            let a = i as f64 * h;
            (y, yp) = taylor_step(a, y, yp, h);
            if (i + 1) % ANCHOR_SUBSTEPS == 0 {
                table.push((y, yp));
            }
        }
        table
    })
}

fn anchored(x: f64) -> (f64, f64) {
    let table = anchors();
    let i = ((-x) / ANCHOR_SPACING).round() as usize;
    let i = i.min(table.len() - 1);
    let a = -(i as f64) * ANCHOR_SPACING;
    let (y, yp) = table[i];
    taylor_step(a, y, yp, x - a)
}

/// `u_k` and `v_k` of the standard Airy asymptotic expansions.
fn asymptotic_coefficients() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0;
        for k in 1..60 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

// Sums Σ (−1)^k c_k ζ^{−k} until the terms stop shrinking (optimal truncation).
fn alternating_sum(zeta: f64, pick: impl Fn(&(f64, f64)) -> f64) -> f64 {
    let coeffs = asymptotic_coefficients();
    let mut sum = 0.0;
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for (k, c) in coeffs.iter().enumerate() {
        let term = pick(c) * zk;
        if term.abs() > last {
            break;
        }
        sum += if k % 2 == 0 { term } else { -term };
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
        last = term.abs();
        zk /= zeta;
    }
    sum
}

fn asymptotic_decaying(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let x4 = x.sqrt().sqrt();
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let ai = e / x4 * alternating_sum(zeta, |c| c.0);
    let aip = -e * x4 * alternating_sum(zeta, |c| c.1);
    (ai, aip)
}

// Ai(−z) and Ai'(−z) for z > 0 from the even/odd split of the u and v series.
fn asymptotic_oscillatory(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let coeffs = asymptotic_coefficients();
    let (mut pu, mut qu, mut pv, mut qv) = (0.0, 0.0, 0.0, 0.0);
    let mut zk = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in coeffs.iter().enumerate() {
        let size = u.abs().max(v.abs()) * zk;
        if size > last {
            break;
        }
        last = size;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            pu += sign * u * zk;
            pv += sign * v * zk;
        } else {
            qu += sign * u * zk;
            qv += sign * v * zk;
        }
        if size < 1e-17 {
            break;
        }
        zk /= zeta;
    }
    let theta = zeta - 0.25 * PI;
    let (s, c) = theta.sin_cos();
    let z4 = z.sqrt().sqrt();
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    let ai = inv_sqrt_pi / z4 * (c * pu + s * qu);
    let aip = inv_sqrt_pi * z4 * (s * pv - c * qv);
    (ai, aip)
}

/// Asymptotic estimate of the `n`-th zero magnitude `z_n` (`Ai(−z_n) = 0`).
pub fn airy_zero_estimate(n: usize) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = 1.0 / (t * t);
    t.powf(2.0 / 3.0) * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * 77125.0 / 82944.0)))
}

/// `z_n > 0` with `Ai(−z_n) = 0`, `n = 1, 2, …`.
///
/// The asymptotic estimate seeds a sign-change bracket that is then
/// tightened by Newton steps, falling back to bisection whenever a step
/// would leave the bracket.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(index_error(n as i64, "Airy zeros are numbered from 1"));
    }
    let seed = airy_zero_estimate(n);
    let half = 0.25 * PI / seed.sqrt();
    let f = |z: f64| airy_ai(-z);
    let (mut lo, mut hi) = (seed - half, seed + half);
    let mut widen = half;
    while f(lo).signum() == f(hi).signum() {
        widen *= 0.5;
        lo -= widen;
        hi += widen;
    }
    let mut z = seed.clamp(lo, hi);
    let flo = f(lo);
    for _ in 0..200 {
        let a = airy(-z);
        if a.ai == 0.0 {
            break;
        }
        if a.ai.signum() == flo.signum() {
            lo = z;
        } else {
            hi = z;
        }
        // d/dz Ai(−z) = −Ai'(−z)
        let newton = z + a.ai / a.ai_prime;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - z).abs() <= 4.0 * f64::EPSILON * z;
        z = next;
        if done || hi - lo <= 4.0 * f64::EPSILON * z {
            break;
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_origin() {
        assert!((airy_ai(0.0) - 0.355_028_053_887_817_2).abs() < 1e-15);
        assert!((airy_ai_prime(0.0) + 0.258_819_403_792_806_8).abs() < 1e-15);
    }

    #[test]
    fn decays_monotonically_beyond_one() {
        let mut last = airy_ai(1.0);
        for i in 1..=200 {
            let x = 1.0 + i as f64 * 0.1;
            let v = airy_ai(x);
            assert!(v < last && v > 0.0, "x={x}");
            last = v;
        }
        assert!(airy_ai(5.0) < 1e-3);
    }

    #[test]
    fn series_and_asymptotic_agree_at_the_crossovers() {
        for x in [SERIES_UPPER, SERIES_UPPER + 0.5] {
            let (s, sp) = taylor_step(0.0, AI_ZERO, AI_PRIME_ZERO, x);
            let (a, ap) = asymptotic_decaying(x);
            assert!((s - a).abs() < 1e-9, "{x}: {s} {a}");
            assert!((sp - ap).abs() < 1e-9);
        }
        for x in [OSCILLATORY_CROSSOVER, OSCILLATORY_CROSSOVER - 0.25, -9.0] {
            let (s, sp) = anchored(x);
            let (a, ap) = asymptotic_oscillatory(-x);
            assert!((s - a).abs() < 1e-10, "{x}: {s} {a}");
            assert!((sp - ap).abs() < 1e-9, "{x}: {sp} {ap}");
        }
        for x in [SERIES_LOWER, -5.0, -6.0] {
            let (s, sp) = maclaurin(x);
            let (a, ap) = anchored(x);
            assert!((s - a).abs() < 1e-11 && (sp - ap).abs() < 1e-11, "{x}");
        }
    }

    #[test]
    fn satisfies_airy_equation() {
        // central second difference of Ai against x·Ai
        let h = 1e-3;
        for i in 0..200 {
            let x = -30.0 + i as f64 * 0.2;
            let d2 = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            assert!((d2 - x * airy_ai(x)).abs() < 1e-5 * (1.0 + x.abs()), "x={x}");
        }
    }

    #[test]
    fn underflow_region() {
        let a = airy(150.0);
        assert!(a.underflow);
        assert_eq!(a.ai, 0.0);
        assert!(!airy(99.0).underflow);
    }

    #[test]
    fn first_zeros() {
        assert!((airy_zero(1).unwrap() - 2.338_107_410_459_767).abs() < 1e-10);
        assert!((airy_zero(2).unwrap() - 4.087_949_444_130_971).abs() < 1e-10);
        assert!(airy_zero(0).is_err());
    }

    #[test]
    fn zeros_increase_and_have_small_residuals() {
        let mut last = 0.0;
        for n in 1..=300 {
            let z = airy_zero(n).unwrap();
            assert!(z > last);
            assert!(airy_ai(-z).abs() < 1e-10, "n={n}");
            last = z;
        }
    }
}
