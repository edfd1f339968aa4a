//! Cycle-averaged mode energy, the mode-sum integral over the band
//! `[k0, k0 + omega/c]`, and the action constant
//! `beta = epsilon0 R V |E0|^2 / (2 pi^2 c)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angular::degeneracy_sum;
use crate::domain::{validate_setup, PhysicalSetup, QuadratureSpec};
use crate::error::{HqError, Result};
use crate::quad::{composite_rule_from, integrate_radial};
use crate::radial::{radial_integral_asymptotic, radial_integral_closed, radial_integral_numeric};

/// How `R_n(k)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadialMode {
    Numeric,
    Closed,
    Asymptotic,
}

impl RadialMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            RadialMode::Numeric => "numeric",
            RadialMode::Closed => "closed",
            RadialMode::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for RadialMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RadialMode {
    type Err = HqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "numeric" => Ok(RadialMode::Numeric),
            "closed" => Ok(RadialMode::Closed),
            "asymptotic" => Ok(RadialMode::Asymptotic),
            other => Err(HqError::domain(
                "radial_mode",
                format!("unknown radial mode `{other}`"),
            )),
        }
    }
}

/// `R_n(k)` on [0, R] in the selected form.
pub fn radial_value(
    n: usize,
    k: f64,
    radius: f64,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match mode {
        RadialMode::Numeric => radial_integral_numeric(n, k, radius, spec),
        RadialMode::Closed => radial_integral_closed(n, k, radius),
        RadialMode::Asymptotic => radial_integral_asymptotic(k, radius),
    }
}

/// The cycle average of a squared sinusoid.
pub fn cycle_average_factor() -> f64 {
    0.5
}

/// `(1/T) int_0^T f(t)^2 dt` by composite Gauss-Legendre.
pub fn numeric_cycle_average(f: impl Fn(f64) -> f64, period: f64) -> Result<f64> {
    if !(period.is_finite() && period > 0.0) {
        return Err(HqError::domain(
            "period",
            format!("must be > 0, got {period}"),
        ));
    }
    let spec = QuadratureSpec::default();
    Ok(integrate_radial(|t| f(t).powi(2), 0.0, period, &spec, None)? / period)
}

/// Factors of the single-mode energy `epsilon0 |E0|^2 R_n (n + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeEnergyBreakdown {
    /// `n + 1/2`: degeneracy `2n + 1` times the cycle factor `1/2`.
    pub angular_factor: f64,
    /// `R_n`, m^3.
    pub radial_factor: f64,
    /// `epsilon0 |E0|^2`.
    pub prefactor: f64,
    /// J.
    pub total: f64,
}

impl ModeEnergyBreakdown {
    fn assemble(angular_factor: f64, radial_factor: f64, prefactor: f64) -> Self {
        ModeEnergyBreakdown {
            angular_factor,
            radial_factor,
            prefactor,
            total: prefactor * radial_factor * angular_factor,
        }
    }
}

fn check_k(param: &'static str, k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(HqError::domain(
            param,
            format!("must be finite and > 0, got {k}"),
        ))
    }
}

/// Single-mode energy with the angular factor taken analytically as `n + 1/2`.
pub fn mode_energy(
    n: usize,
    k: f64,
    setup: &PhysicalSetup,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<ModeEnergyBreakdown> {
    let setup = validate_setup(*setup)?;
    check_k("k", k)?;
    let radial = radial_value(n, k, setup.radius, mode, spec)?;
    Ok(ModeEnergyBreakdown::assemble(
        n as f64 + 0.5,
        radial,
        setup.epsilon0 * setup.e0 * setup.e0,
    ))
}

/// Single-mode energy with every factor produced by quadrature: the solid-angle
/// double sum, the numeric cycle average of `cos^2` and the selected radial
/// form. `spec` must be sufficient for order `n`.
pub fn mode_energy_verified(
    n: usize,
    k: f64,
    setup: &PhysicalSetup,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<ModeEnergyBreakdown> {
    let setup = validate_setup(*setup)?;
    check_k("k", k)?;
    let omega = setup.c * k;
    let cycle = numeric_cycle_average(|t| (omega * t).cos(), 2.0 * PI / omega)?;
    let angular = degeneracy_sum(n, spec)? * cycle;
    let radial = radial_value(n, k, setup.radius, mode, spec)?;
    Ok(ModeEnergyBreakdown::assemble(
        angular,
        radial,
        setup.epsilon0 * setup.e0 * setup.e0,
    ))
}

/// `epsilon0 R V |E0|^2 / (2 pi^2 c)`, J s.
pub fn beta(setup: &PhysicalSetup) -> Result<f64> {
    let s = validate_setup(*setup)?;
    Ok(s.epsilon0 * s.radius * s.volume * s.e0 * s.e0 / (2.0 * PI * PI * s.c))
}

/// Amplitude that makes `beta(setup)` equal `beta_target`.
pub fn calibrate_amplitude(setup: &PhysicalSetup, beta_target: f64) -> Result<f64> {
    if !(beta_target.is_finite() && beta_target > 0.0) {
        return Err(HqError::domain(
            "beta_target",
            format!("must be > 0, got {beta_target}"),
        ));
    }
    let s = validate_setup(*setup)?;
    Ok((2.0 * PI * PI * s.c * beta_target / (s.epsilon0 * s.radius * s.volume)).sqrt())
}

/// Band energy `(V/pi^2) int_{k0}^{k0+omega/c} k^2 epsilon0 |E0|^2 R_n(k) (n + 1/2) dk`.
///
/// The polarization factor 2 of the mode sum lives inside `V/pi^2`. `|E0|` is
/// held fixed across the band. In the asymptotic mode the integrand is the
/// constant `epsilon0 |E0|^2 (R/2)(n + 1/2)`; otherwise the panels are refined
/// for the `sin(2kR)` oscillation.
pub fn mode_sum_energy(
    n: usize,
    omega: f64,
    k0: f64,
    setup: &PhysicalSetup,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let s = validate_setup(*setup)?;
    check_k("omega", omega)?;
    check_k("k0", k0)?;
    let hint = match mode {
        RadialMode::Asymptotic => None,
        _ => Some(2.0 * s.radius),
    };
    let rule = composite_rule_from(k0, omega / s.c, spec, hint)?;
    let density = s.epsilon0 * s.e0 * s.e0 * (n as f64 + 0.5);
    let mut acc = 0.0;
    for (&k, &w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * k * k * density * radial_value(n, k, s.radius, mode, spec)?;
    }
    Ok(s.volume / (PI * PI) * acc)
}

/// Per-`k0` band energies and the recovered `beta_hat = <H>/((n + 1/2) omega)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaReport {
    pub n: usize,
    pub omega: f64,
    pub radial_mode: RadialMode,
    /// Analytic `beta(setup)`.
    pub beta: f64,
    pub k0_values: Vec<f64>,
    pub energies: Vec<f64>,
    pub beta_hat: Vec<f64>,
    /// `max_i |beta_hat_i - beta_hat_0| / |beta_hat_0|`.
    pub max_rel_variation: f64,
    pub assumptions: Vec<String>,
}

pub const ASSUMPTION_FIXED_AMPLITUDE: &str = "E0 held constant across [k0, k0 + omega/c]";
pub const ASSUMPTION_MODE_DENSITY: &str =
    "polarization factor 2 folded into the V/pi^2 mode density";

pub fn k0_independence_scan(
    n: usize,
    omega: f64,
    k0_list: &[f64],
    setup: &PhysicalSetup,
    mode: RadialMode,
    spec: &QuadratureSpec,
) -> Result<BetaReport> {
    if k0_list.is_empty() {
        return Err(HqError::domain("k0", "k0 list is empty"));
    }
    let mut energies = Vec::with_capacity(k0_list.len());
    for &k0 in k0_list {
        energies.push(mode_sum_energy(n, omega, k0, setup, mode, spec)?);
    }
    let scale = (n as f64 + 0.5) * omega;
    let beta_hat: Vec<f64> = energies.iter().map(|e| e / scale).collect();
    let first = beta_hat[0];
    let max_rel_variation = beta_hat
        .iter()
        .map(|b| ((b - first) / first).abs())
        .fold(0.0, f64::max);
    Ok(BetaReport {
        n,
        omega,
        radial_mode: mode,
        beta: beta(setup)?,
        k0_values: k0_list.to_vec(),
        energies,
        beta_hat,
        max_rel_variation,
        assumptions: vec![
            ASSUMPTION_FIXED_AMPLITUDE.into(),
            ASSUMPTION_MODE_DENSITY.into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::HBAR_SI;

    fn natural() -> PhysicalSetup {
        PhysicalSetup::natural(1.0, 1.0, 1.0)
    }

    #[test]
    fn cycle_average_values() {
        assert_eq!(cycle_average_factor(), 0.5);
        for omega in [1.0, 7.3, 2.0e6] {
            let v = numeric_cycle_average(|t| (omega * t).cos(), 2.0 * PI / omega).unwrap();
            assert!((v - 0.5).abs() < 1e-12);
            for phase in [0.3, 1.9, -2.2] {
                let v =
                    numeric_cycle_average(|t| (omega * t + phase).cos(), 2.0 * PI / omega).unwrap();
                assert!((v - 0.5).abs() < 1e-12);
            }
        }
        assert!(numeric_cycle_average(|t| t, 0.0).is_err());
    }

    #[test]
    fn mode_energy_examples() {
        let spec = QuadratureSpec::default();
        let e = mode_energy(0, 1.0, &natural(), RadialMode::Asymptotic, &spec).unwrap();
        assert!((e.total - 0.25).abs() < 1e-16);
        let fast = mode_energy(3, 2.0, &natural(), RadialMode::Closed, &spec).unwrap();
        let slow = mode_energy_verified(
            3,
            2.0,
            &natural(),
            RadialMode::Closed,
            &QuadratureSpec::sufficient_for(3),
        )
        .unwrap();
        assert_eq!(fast.angular_factor, 3.5);
        assert!((slow.angular_factor - 3.5).abs() < 1e-10);
        let doubled =
            mode_energy(3, 2.0, &natural().with_e0(2.0), RadialMode::Closed, &spec).unwrap();
        assert!((doubled.total / fast.total - 4.0).abs() < 1e-14);
    }

    #[test]
    fn breakdown_is_a_product() {
        let e = mode_energy(
            4,
            3.0,
            &PhysicalSetup::default(),
            RadialMode::Numeric,
            &QuadratureSpec::default(),
        )
        .unwrap();
        let p = e.prefactor * e.radial_factor * e.angular_factor;
        assert!(((e.total - p) / p).abs() <= 1e-14);
    }

    #[test]
    fn verified_path_needs_enough_quadrature() {
        let spec = QuadratureSpec {
            theta_order: 2,
            phi_points: 4,
            ..Default::default()
        };
        assert!(mode_energy_verified(3, 1.0, &natural(), RadialMode::Closed, &spec).is_err());
    }

    #[test]
    fn beta_examples() {
        assert!((beta(&natural()).unwrap() - 0.050660591821169).abs() < 1e-15);
        let si = beta(&PhysicalSetup::si(1.0, 1.0, 1.0)).unwrap();
        let want = 8.8541878128e-12 / (2.0 * PI * PI * 299_792_458.0);
        assert!(((si - want) / want).abs() < 1e-15);
        assert!((si - 1.4962e-21).abs() < 1e-25);
        assert_eq!(beta(&natural().with_e0(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn calibration_examples() {
        let e0 = calibrate_amplitude(&natural(), 1.0 / (2.0 * PI * PI)).unwrap();
        assert!((e0 - 1.0).abs() < 1e-15);
        let si = PhysicalSetup::si(1.0, 1.0, 0.0);
        let e0 = calibrate_amplitude(&si, HBAR_SI).unwrap();
        let back = beta(&si.with_e0(e0)).unwrap();
        assert!(((back - HBAR_SI) / HBAR_SI).abs() < 1e-12);
        assert!(calibrate_amplitude(&si, 0.0).is_err());
        assert!(calibrate_amplitude(&si, -1.0).is_err());
    }

    #[test]
    fn asymptotic_band_energy_is_the_quantization_rule() {
        let spec = QuadratureSpec::default();
        let s = natural();
        let b = beta(&s).unwrap();
        for k0 in [1e-2, 1.0, 1e2] {
            let h = mode_sum_energy(2, 3.0, k0, &s, RadialMode::Asymptotic, &spec).unwrap();
            assert!((h / (b * 2.5 * 3.0) - 1.0).abs() < 1e-13);
        }
        let h0 = mode_sum_energy(0, 3.0, 1.0, &s, RadialMode::Asymptotic, &spec).unwrap();
        let h4 = mode_sum_energy(4, 3.0, 1.0, &s, RadialMode::Asymptotic, &spec).unwrap();
        assert!((h0 / h4 - 0.5 / 4.5).abs() < 1e-13);
    }

    #[test]
    fn closed_band_energy_approaches_asymptote() {
        let spec = QuadratureSpec::default();
        let s = natural();
        let closed = mode_sum_energy(1, 1.0, 1e4, &s, RadialMode::Closed, &spec).unwrap();
        let asym = mode_sum_energy(1, 1.0, 1e4, &s, RadialMode::Asymptotic, &spec).unwrap();
        assert!((closed / asym - 1.0).abs() < 1e-3);
    }

    #[test]
    fn closed_band_matches_integrated_antiderivative() {
        // n = 0: k^2 R_0(k) = R/2 - sin(2kR)/(4k), summed by a fine Simpson rule
        let s = PhysicalSetup::natural(3.0, 2.0, 1.5);
        let (omega, k0) = (2.0, 5.0);
        let r = s.radius;
        let f = |k: f64| r / 2.0 - (2.0 * k * r).sin() / (4.0 * k);
        let m = 200_000;
        let (a, b) = (k0, k0 + omega / s.c);
        let h = (b - a) / m as f64;
        let mut simpson = f(a) + f(b);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * f(a + i as f64 * h);
        }
        simpson *= h / 3.0;
        let oracle = s.volume / (PI * PI) * s.epsilon0 * s.e0 * s.e0 * 0.5 * simpson;
        let got = mode_sum_energy(
            0,
            omega,
            k0,
            &s,
            RadialMode::Closed,
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-12, "{got} vs {oracle}");
    }

    #[test]
    fn k0_scan_examples() {
        let spec = QuadratureSpec::default();
        let s = natural();
        let omega = 1.0;
        let rep = k0_independence_scan(
            3,
            omega,
            &[1.0, 10.0, 100.0],
            &s,
            RadialMode::Asymptotic,
            &spec,
        )
        .unwrap();
        assert!(rep.max_rel_variation < 1e-13);
        assert_eq!(rep.energies.len(), 3);
        let single = k0_independence_scan(3, omega, &[4.0], &s, RadialMode::Closed, &spec).unwrap();
        assert_eq!(single.max_rel_variation, 0.0);
        assert!(k0_independence_scan(3, omega, &[], &s, RadialMode::Closed, &spec).is_err());
    }

    #[test]
    fn closed_variation_shrinks_as_k0r_grows() {
        let spec = QuadratureSpec::default();
        let omega = 1.0;
        let near = PhysicalSetup::natural(1e3, 1.0, 1.0);
        let far = PhysicalSetup::natural(1e4, 1.0, 1.0);
        let ks = [1.0, 10.0, 100.0];
        let a = k0_independence_scan(2, omega, &ks, &near, RadialMode::Closed, &spec).unwrap();
        let b = k0_independence_scan(2, omega, &ks, &far, RadialMode::Closed, &spec).unwrap();
        assert!(a.max_rel_variation < 1e-2);
        assert!(b.max_rel_variation < a.max_rel_variation);
    }

    #[test]
    fn domain_errors() {
        let spec = QuadratureSpec::default();
        let s = natural();
        assert!(mode_sum_energy(0, 0.0, 1.0, &s, RadialMode::Closed, &spec).is_err());
        assert!(mode_sum_energy(0, 1.0, -1.0, &s, RadialMode::Closed, &spec).is_err());
        assert!(mode_energy(0, -1.0, &s, RadialMode::Closed, &spec).is_err());
        assert!("bogus".parse::<RadialMode>().is_err());
        assert_eq!("Closed".parse::<RadialMode>().unwrap(), RadialMode::Closed);
    }
}
