//! The radial integral `R_n = int_0^R r^2 j_n(kr)^2 dr` by quadrature, by the
//! Lommel closed form and in the `kR >> 1` limit.

use serde::Serialize;

use crate::domain::QuadratureSpec;
use crate::error::{HqError, Result};
use crate::quad::integrate_radial;
use crate::specfun::{bessel_upto, sph_bessel_j_pair};

fn check_positive(param: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(HqError::domain(
            param,
            format!("must be finite and > 0, got {v}"),
        ))
    }
}

/// Composite Gauss-Legendre quadrature of `r^2 j_n(kr)^2` on [0, R], with the
/// panel count raised for oscillation wavenumber `2k`.
pub fn radial_integral_numeric(
    n: usize,
    k: f64,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("R", radius)?;
    integrate_radial(
        |r| {
            let j = bessel_upto(n, k * r)[n];
            r * r * j * j
        },
        0.0,
        radius,
        spec,
        Some(2.0 * k),
    )
}

/// `(R^3/2) [j_n(kR)^2 - j_{n-1}(kR) j_{n+1}(kR)]`, with `j_{-1}(x) = cos(x)/x`.
pub fn radial_integral_closed(n: usize, k: f64, radius: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("R", radius)?;
    let (lo, mid, hi) = sph_bessel_j_pair(n, k * radius)?;
    Ok(0.5 * radius.powi(3) * (mid * mid - lo * hi))
}

/// Large-`kR` value `R/(2k^2)`; the same for every order.
pub fn radial_integral_asymptotic(k: f64, radius: f64) -> Result<f64> {
    check_positive("k", k)?;
    check_positive("R", radius)?;
    Ok(radius / (2.0 * k * k))
}

/// All three forms of `R_n` for one `(n, k, R)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialResult {
    pub n: usize,
    pub numeric: f64,
    pub closed: f64,
    pub asymptotic: f64,
    #[serde(rename = "kR")]
    pub kr: f64,
}

impl RadialResult {
    pub fn compute(n: usize, k: f64, radius: f64, spec: &QuadratureSpec) -> Result<Self> {
        Ok(RadialResult {
            n,
            numeric: radial_integral_numeric(n, k, radius, spec)?,
            closed: radial_integral_closed(n, k, radius)?,
            asymptotic: radial_integral_asymptotic(k, radius)?,
            kr: k * radius,
        })
    }

    pub fn numeric_vs_closed(&self) -> f64 {
        ((self.numeric - self.closed) / self.closed).abs()
    }
}

/// One row of the asymptotic-deviation table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationRow {
    pub n: usize,
    #[serde(rename = "kR")]
    pub kr: f64,
    pub closed: f64,
    pub asymptotic: f64,
    pub rel_dev: f64,
}

/// `|closed/asymptotic - 1|` for every `n <= n_max` and every `kR`, at
/// `R = 1` and `k = kR`. Rows are ordered by `n`, then by `kR`.
pub fn asymptotic_deviation_scan(n_max: usize, kr_values: &[f64]) -> Result<Vec<DeviationRow>> {
    for &v in kr_values {
        check_positive("kR", v)?;
    }
    if kr_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HqError::domain("kR", "values must be strictly ascending"));
    }
    let mut rows = Vec::with_capacity((n_max + 1) * kr_values.len());
    for n in 0..=n_max {
        for &kr in kr_values {
            let closed = radial_integral_closed(n, kr, 1.0)?;
            let asymptotic = radial_integral_asymptotic(kr, 1.0)?;
            rows.push(DeviationRow {
                n,
                kr,
                closed,
                asymptotic,
                rel_dev: (closed / asymptotic - 1.0).abs(),
            });
        }
    }
    Ok(rows)
}

/// Largest deviation over all orders at each `kR` of a scan, in `kR` order.
pub fn max_deviation_by_kr(rows: &[DeviationRow]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        match out.iter_mut().find(|(kr, _)| *kr == row.kr) {
            Some((_, worst)) => *worst = worst.max(row.rel_dev),
            None => out.push((row.kr, row.rel_dev)),
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}
