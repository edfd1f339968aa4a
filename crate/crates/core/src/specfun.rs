//! Associated Legendre functions, spherical harmonics and regular spherical
//! Bessel functions in double precision.
//!
//! Conventions: the Condon-Shortley phase `(-1)^m` is part of `P_n^m`, and
//! `Y_n^{-m} = (-1)^m conj(Y_n^m)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::ModeIndex;
use crate::error::{HqError, Result};

/// Value of a spherical harmonic at one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicValue {
    pub value: Complex64,
}

impl From<HarmonicValue> for Complex64 {
    fn from(h: HarmonicValue) -> Self {
        h.value
    }
}

/// `P_n^m(x)` with the Condon-Shortley phase, `0 <= m <= n`, `|x| <= 1`.
pub fn assoc_legendre(n: usize, m: usize, x: f64) -> Result<f64> {
    if m > n {
        return Err(HqError::domain("m", format!("m = {m} exceeds n = {n}")));
    }
    if !(x.abs() <= 1.0) {
        return Err(HqError::domain("x", format!("|x| must be <= 1, got {x}")));
    }
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    Ok(legendre_cs(n, m, x, s))
}

/// Forward recurrence in degree from the closed-form `P_m^m`.
/// `s` is `sqrt(1 - x^2)`, passed separately so callers holding `sin(theta)`
/// keep full accuracy near the poles.
pub(crate) fn legendre_cs(n: usize, m: usize, x: f64, s: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! s^m
    let mut pmm = 1.0;
    for i in 1..=m {
        pmm *= -((2 * i - 1) as f64) * s;
    }
    if n == m {
        return pmm;
    }
    let mut p_prev = pmm;
    let mut p = x * (2 * m + 1) as f64 * pmm;
    for l in (m + 2)..=n {
        let next = ((2 * l - 1) as f64 * x * p - (l + m - 1) as f64 * p_prev) / (l - m) as f64;
        p_prev = p;
        p = next;
    }
    p
}

/// `sqrt((2n+1)/(4 pi) * (n-m)!/(n+m)!)` with the factorial ratio formed as a
/// running product.
fn harmonic_norm(n: usize, m: usize) -> f64 {
    let mut ratio = 1.0;
    for j in (n - m + 1)..=(n + m) {
        ratio /= j as f64;
    }
    ((2 * n + 1) as f64 / (4.0 * PI) * ratio).sqrt()
}

/// Orthonormal spherical harmonic `Y_n^m(theta, phi)`.
pub fn sph_harmonic(idx: ModeIndex, theta: f64, phi: f64) -> HarmonicValue {
    let (st, ct) = theta.sin_cos();
    HarmonicValue {
        value: harmonic_cs(idx.n(), idx.m(), ct, st, phi),
    }
}

pub(crate) fn harmonic_cs(n: usize, m: i64, ct: f64, st: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    let p = legendre_cs(n, am, ct, st);
    let y = Complex64::from_polar(harmonic_norm(n, am) * p, am as f64 * phi);
    if m >= 0 {
        y
    } else if am % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

/// All `Y_n^m` for `m = -n..=n` at one direction, m ascending.
pub fn sph_harmonics_of_order(n: usize, theta: f64, phi: f64) -> Vec<Complex64> {
    let (st, ct) = theta.sin_cos();
    let n_i = n as i64;
    (-n_i..=n_i)
        .map(|m| harmonic_cs(n, m, ct, st, phi))
        .collect()
}

/// Regular spherical Bessel function `j_n(x)`, `x >= 0`.
pub fn sph_bessel_j(n: usize, x: f64) -> Result<f64> {
    if !(x >= 0.0) || x.is_infinite() {
        return Err(HqError::domain(
            "x",
            format!("argument must be finite and >= 0, got {x}"),
        ));
    }
    Ok(bessel_upto(n, x)[n])
}

/// `(j_{n-1}(x), j_n(x), j_{n+1}(x))` with `j_{-1}(x) = cos(x)/x`.
pub fn sph_bessel_j_pair(n: usize, x: f64) -> Result<(f64, f64, f64)> {
    if !(x > 0.0) || x.is_infinite() {
        return Err(HqError::domain(
            "x",
            format!("argument must be finite and > 0, got {x}"),
        ));
    }
    let j = bessel_upto(n + 1, x);
    let lower = if n == 0 { x.cos() / x } else { j[n - 1] };
    Ok((lower, j[n], j[n + 1]))
}

// Below this the two-term power series is exact to double precision and the
// downward recurrence would overflow its scaling.
const SERIES_LIMIT: f64 = 1e-6;
const RESCALE_AT: f64 = 1e150;

/// `j_0(x) ..= j_{n_max}(x)` for finite `x >= 0`.
pub(crate) fn bessel_upto(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SERIES_LIMIT {
        // j_l(x) = x^l/(2l+1)!! (1 - x^2/(2(2l+3)))
        let mut lead = 1.0;
        for (l, slot) in out.iter_mut().enumerate() {
            if l > 0 {
                lead *= x / (2 * l + 1) as f64;
            }
            *slot = lead * (1.0 - x * x / (2.0 * (2 * l + 3) as f64));
        }
        return out;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if x > (n_max as f64).max(1.0) {
        out[0] = j0;
        if n_max >= 1 {
            out[1] = j1;
        }
        for l in 1..n_max {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
        return out;
    }
    miller(n_max, x, j0, j1, &mut out);
    out
}

/// Downward recurrence from order `n_max + 16 + ceil(x)`, normalized on the
/// larger of the closed-form `j_0`, `j_1`.
fn miller(n_max: usize, x: f64, j0: f64, j1: f64, out: &mut [f64]) {
    let start = n_max + 16 + x.ceil() as usize;
    let mut f_hi = 0.0; // f_{l+1}
    let mut f = 1e-30; // f_l
    let mut f_at_1 = 0.0;
    for l in (1..=start).rev() {
        let lower = (2 * l + 1) as f64 / x * f - f_hi;
        f_hi = f;
        f = lower;
        // f now holds f_{l-1}, f_hi holds f_l
        if l <= n_max {
            out[l] = f_hi;
        }
        if l == 1 {
            f_at_1 = f_hi;
        }
        if f.abs() > RESCALE_AT {
            f *= 1.0 / RESCALE_AT;
            f_hi *= 1.0 / RESCALE_AT;
            for v in out.iter_mut() {
                *v *= 1.0 / RESCALE_AT;
            }
            f_at_1 *= 1.0 / RESCALE_AT;
        }
    }
    out[0] = f;
    let scale = if j0.abs() >= j1.abs() {
        j0 / f
    } else {
        j1 / f_at_1
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
}
