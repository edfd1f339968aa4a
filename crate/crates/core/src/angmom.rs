//! Intrinsic (spin) angular momentum `J_s = epsilon0 int E x A` of a single
//! multipole mode, its conservation over a cycle, the helicity structure of
//! its cycle average, and `beta` recovered from `|<J_s>|`.
//!
//! Phasor convention: the field at a point is `F(t) = E~ e^{-i omega t}` with
//! `E~ = E0 j_n(kr) sum_m Y_n^m(theta, phi) e`. The real fields are
//! `E(t) = Re F(t)` and `A(t) = Im F(t) / omega`, which gives
//! `E = -dA/dt` identically. The complex potential amplitude is
//! `A~ = -i E~ / omega`.
//!
//! The field is the scalar Helmholtz profile times a constant polarization
//! vector. For `n >= 1` that is not a transverse vector solution of Maxwell's
//! equations; it is evaluated as constructed.

use serde::Serialize;

use num_complex::Complex64;

use crate::angular::angular_profile;
use crate::domain::{
    validate_setup, FieldSpec, PhysicalSetup, Polarization, QuadratureSpec, Vec3, Vec3C,
};
use crate::energy::{mode_energy, mode_sum_energy, RadialMode};
use crate::error::{HqError, Result};
use crate::quad::{composite_rule, sphere_rule};
use crate::specfun::{bessel_upto, harmonic_cs};

/// Complex field `E~ e^{-i omega t}` at `(r, theta, phi)`, with `omega = c k`.
pub fn field_eval(
    fs: &FieldSpec,
    setup: &PhysicalSetup,
    r: f64,
    theta: f64,
    phi: f64,
    t: f64,
) -> Result<Vec3C> {
    let s = validate_setup(*setup)?;
    if !(r.is_finite() && r >= 0.0) {
        return Err(HqError::domain(
            "r",
            format!("radius must be >= 0, got {r}"),
        ));
    }
    let radial = bessel_upto(fs.n(), fs.k() * r)[fs.n()];
    let scalar = fs.e0() * radial * angular_profile(fs.n(), theta, phi);
    let phase = Complex64::from_polar(1.0, -fs.omega(s.c) * t);
    Ok(fs.polarization_vector() * (scalar * phase))
}

/// Tensor-product volume rule over the ball of radius `R` with the mode's
/// phasor amplitudes cached at every node.
struct ModeGrid {
    weights: Vec<f64>,
    amplitudes: Vec<Vec3C>,
}

impl ModeGrid {
    fn build(fs: &FieldSpec, radius: f64, spec: &QuadratureSpec) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(HqError::domain("R", format!("must be > 0, got {radius}")));
        }
        spec.require_sufficient(fs.n())?;
        let n = fs.n();
        let radial = composite_rule(0.0, radius, spec, Some(2.0 * fs.k()))?;
        let sphere = sphere_rule(spec)?;
        let n_i = n as i64;
        let profile: Vec<Complex64> = sphere
            .nodes
            .iter()
            .map(|node| {
                (-n_i..=n_i)
                    .map(|m| harmonic_cs(n, m, node.cos_theta, node.sin_theta, node.phi))
                    .sum()
            })
            .collect();
        let pol = fs.polarization_vector();
        let mut weights = Vec::with_capacity(radial.len() * sphere.nodes.len());
        let mut amplitudes = Vec::with_capacity(weights.capacity());
        for (&r, &wr) in radial.nodes.iter().zip(&radial.weights) {
            let j = bessel_upto(n, fs.k() * r)[n];
            for (node, a) in sphere.nodes.iter().zip(&profile) {
                weights.push(wr * r * r * node.weight);
                amplitudes.push(pol * (fs.e0() * j * a));
            }
        }
        Ok(ModeGrid {
            weights,
            amplitudes,
        })
    }

    fn nodes(&self) -> impl Iterator<Item = (f64, &Vec3C)> {
        self.weights.iter().copied().zip(&self.amplitudes)
    }

    /// `int |E~|^2 dV`.
    fn energy_integral(&self) -> f64 {
        self.nodes().map(|(w, e)| w * e.norm_sqr()).sum()
    }
}

fn sum_vec(it: impl Iterator<Item = Vec3>) -> Vec3 {
    it.fold(Vec3::default(), |a, b| a + b)
}

/// Cycle-averaged `<J_s> = -(epsilon0 / 2 omega) int Im[E~ x conj(E~)] dV`.
pub fn intrinsic_angular_momentum(
    fs: &FieldSpec,
    setup: &PhysicalSetup,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Vec3> {
    let s = validate_setup(*setup)?;
    let grid = ModeGrid::build(fs, radius, spec)?;
    let omega = fs.omega(s.c);
    let acc = sum_vec(grid.nodes().map(|(w, e)| e.cross(&e.conj()).im().scale(w)));
    Ok(acc.scale(-s.epsilon0 / (2.0 * omega)))
}

/// Cycle-averaged `<J_s> = (epsilon0 / 2) int Re[E~ x conj(A~)] dV` with
/// `A~ = -i E~ / omega`; the potential form of the same quantity.
pub fn intrinsic_angular_momentum_potential(
    fs: &FieldSpec,
    setup: &PhysicalSetup,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<Vec3> {
    let s = validate_setup(*setup)?;
    let grid = ModeGrid::build(fs, radius, spec)?;
    let to_potential = Complex64::new(0.0, -1.0 / fs.omega(s.c));
    let acc = sum_vec(grid.nodes().map(|(w, e)| {
        let a = *e * to_potential;
        e.cross(&a.conj()).re().scale(w)
    }));
    Ok(acc.scale(0.5 * s.epsilon0))
}

/// `J_s(t)` at one time sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinSample {
    pub t: f64,
    pub j: Vec3,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularMomentumReport {
    pub n: usize,
    pub k: f64,
    pub radius: f64,
    pub polarization: Polarization,
    pub helicity: i32,
    /// Mean of `J_s(t)` over the samples.
    pub j_mean: Vec3,
    /// Cycle average from the field form, for comparison with `j_mean`.
    pub j_cycle_average: Vec3,
    /// `(epsilon0 / 2 omega) int |E~|^2 dV`: `|<J_s>|` for a circular mode of
    /// the same amplitude. Drifts are measured in units of this.
    pub scale: f64,
    pub samples: Vec<SpinSample>,
    /// `max_t |J_s(t) - J_s(t0)| / scale`.
    pub max_drift: f64,
    /// `max_t ||J_s(t)| - |J_s(t0)|| / scale`.
    pub max_magnitude_drift: f64,
}

/// `samples + 1` equally spaced times covering one full period `[0, 2 pi/omega]`.
pub fn one_cycle_times(omega: f64, samples: usize) -> Vec<f64> {
    let period = 2.0 * std::f64::consts::PI / omega;
    (0..=samples)
        .map(|i| period * i as f64 / samples as f64)
        .collect()
}

/// Evaluates `J_s(t) = epsilon0 int E(t) x A(t) dV` with the real fields
/// `E = Re F`, `A = Im F / omega` at every time and measures the drift.
pub fn conservation_check(
    fs: &FieldSpec,
    setup: &PhysicalSetup,
    radius: f64,
    times: &[f64],
    spec: &QuadratureSpec,
) -> Result<AngularMomentumReport> {
    let s = validate_setup(*setup)?;
    let omega = fs.omega(s.c);
    let period = 2.0 * std::f64::consts::PI / omega;
    if times.len() < 2 || times.iter().any(|t| !t.is_finite()) {
        return Err(HqError::domain(
            "times",
            "need at least two finite sample times",
        ));
    }
    let (lo, hi) = times
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| {
            (a.min(t), b.max(t))
        });
    if hi - lo < period * (1.0 - 1e-12) {
        return Err(HqError::domain(
            "times",
            format!("samples span {} but one period is {period}", hi - lo),
        ));
    }
    let grid = ModeGrid::build(fs, radius, spec)?;
    let scale = s.epsilon0 / (2.0 * omega) * grid.energy_integral();

    let samples: Vec<SpinSample> = times
        .iter()
        .map(|&t| {
            let phase = Complex64::from_polar(1.0, -omega * t);
            let j = sum_vec(grid.nodes().map(|(w, e)| {
                let f = *e * phase;
                let e_real = f.re();
                let a_real = f.im().scale(1.0 / omega);
                e_real.cross(&a_real).scale(w)
            }))
            .scale(s.epsilon0);
            SpinSample {
                t,
                j,
                magnitude: j.norm(),
            }
        })
        .collect();

    let first = samples[0];
    let (mut drift, mut mag_drift) = (0.0f64, 0.0f64);
    for smp in &samples {
        drift = drift.max((smp.j - first.j).norm() / scale);
        mag_drift = mag_drift.max((smp.magnitude - first.magnitude).abs() / scale);
    }
    let j_mean = sum_vec(samples.iter().map(|x| x.j)).scale(1.0 / samples.len() as f64);
    let j_cycle_average = intrinsic_angular_momentum(fs, &s, radius, spec)?;
    Ok(AngularMomentumReport {
        n: fs.n(),
        k: fs.k(),
        radius,
        polarization: fs.polarization(),
        helicity: fs.polarization().helicity(),
        j_mean,
        j_cycle_average,
        scale,
        samples,
        max_drift: drift,
        max_magnitude_drift: mag_drift,
    })
}

/// `beta_hat = |<J_s>|_{lambda=+1} / (n + 1/2)`, where the mode-summed
/// `|<J_s>|` is the band energy over `[k0, k0 + omega/c]` divided by `omega`.
/// Order comes from `fs`, amplitude and constants from `setup`.
pub fn beta_from_angmom(
    fs: &FieldSpec,
    omega: f64,
    k0: f64,
    setup: &PhysicalSetup,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if fs.polarization() != Polarization::PLUS {
        return Err(HqError::domain(
            "polarization",
            format!(
                "beta from the spin needs circular(+1), got {}",
                fs.polarization().label()
            ),
        ));
    }
    let n = fs.n();
    let spin = mode_sum_energy(n, omega, k0, setup, mode, spec)? / omega;
    Ok(spin / (n as f64 + 0.5))
}

/// `<H> / |<J_s>|` for one circular mode: numeric single-mode energy over the
/// volume-quadrature spin. Equals `omega = c k`.
pub fn energy_to_spin_ratio(
    fs: &FieldSpec,
    setup: &PhysicalSetup,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = validate_setup(*setup)?.with_e0(fs.e0());
    let s = PhysicalSetup { radius, ..s };
    let h = mode_energy(fs.n(), fs.k(), &s, RadialMode::Numeric, spec)?.total;
    let j = intrinsic_angular_momentum(fs, &s, radius, spec)?;
    Ok(h / j.norm())
}
