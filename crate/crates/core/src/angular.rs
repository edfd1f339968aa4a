//! Solid-angle part of the mode energy: the Gram matrix of the order-`n`
//! harmonics and its full double sum, which collapses to `2n + 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::domain::QuadratureSpec;
use crate::error::Result;
use crate::quad::{sphere_rule, SphereRule};
use crate::specfun::{harmonic_cs, sph_harmonics_of_order};

/// `entries[m' + n][m + n] = int conj(Y_n^{m'}) Y_n^m dOmega`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramMatrix {
    pub n: usize,
    pub entries: Vec<Vec<Complex64>>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn get(&self, m_prime: i64, m: i64) -> Complex64 {
        let n = self.n as i64;
        self.entries[(m_prime + n) as usize][(m + n) as usize]
    }

    /// `max |G - I|` over all entries.
    pub fn max_identity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.entries.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    worst = worst.max(v.norm());
                }
            }
        }
        worst
    }

    /// Sum of every entry.
    pub fn total(&self) -> Complex64 {
        self.entries.iter().flatten().sum()
    }
}

/// Harmonic values of order `n` at every node of `rule`, node-major.
fn tabulate(n: usize, rule: &SphereRule) -> Vec<Vec<Complex64>> {
    let n_i = n as i64;
    rule.nodes
        .iter()
        .map(|node| {
            (-n_i..=n_i)
                .map(|m| harmonic_cs(n, m, node.cos_theta, node.sin_theta, node.phi))
                .collect()
        })
        .collect()
}

/// Gram matrix on an arbitrary sphere rule. The upper triangle is
/// accumulated and mirrored, so the result is exactly Hermitian.
pub fn gram_matrix_on(n: usize, rule: &SphereRule) -> GramMatrix {
    let dim = 2 * n + 1;
    let table = tabulate(n, rule);
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for j in i..dim {
            let s: Complex64 = table
                .iter()
                .zip(&rule.nodes)
                .map(|(row, node)| row[i].conj() * row[j] * node.weight)
                .sum();
            entries[i][j] = s;
        }
    }
    for i in 0..dim {
        entries[i][i].im = 0.0;
        for j in 0..i {
            entries[i][j] = entries[j][i].conj();
        }
    }
    GramMatrix { n, entries }
}

/// Gram matrix with the product rule of `spec`. Fails when the rule is not
/// exact for products of two order-`n` harmonics.
pub fn gram_matrix(n: usize, spec: &QuadratureSpec) -> Result<GramMatrix> {
    spec.require_sufficient(n)?;
    Ok(gram_matrix_on(n, &sphere_rule(spec)?))
}

/// `sum_{m, m'} int conj(Y_n^{m'}) Y_n^m dOmega` on an arbitrary rule.
pub fn degeneracy_sum_on(n: usize, rule: &SphereRule) -> f64 {
    gram_matrix_on(n, rule).total().re
}

/// Full double sum over `(m, m')`, off-diagonal terms included; equals `2n + 1`.
pub fn degeneracy_sum(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    Ok(gram_matrix(n, spec)?.total().re)
}

/// One row of the degeneracy table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegeneracyRow {
    pub n: usize,
    pub sum: f64,
    /// `|sum - (2n + 1)|`
    pub error: f64,
}

/// Degeneracy sums for `n = 0..=n_max`, each on its own minimal exact rule
/// (`QuadratureSpec::sufficient_for(n)`).
pub fn degeneracy_table(n_max: usize) -> Result<Vec<DegeneracyRow>> {
    (0..=n_max)
        .map(|n| {
            let sum = degeneracy_sum(n, &QuadratureSpec::sufficient_for(n))?;
            Ok(DegeneracyRow {
                n,
                sum,
                error: (sum - (2 * n + 1) as f64).abs(),
            })
        })
        .collect()
}

/// `sum_{m=-n}^{n} Y_n^m(theta, phi)`, the angular factor of one mode.
pub fn angular_profile(n: usize, theta: f64, phi: f64) -> Complex64 {
    sph_harmonics_of_order(n, theta, phi).into_iter().sum()
}

/// `int |angular_profile|^2 dOmega` on the product rule of `spec`.
pub fn profile_norm_sqr(n: usize, spec: &QuadratureSpec) -> Result<f64> {
    spec.require_sufficient(n)?;
    let rule = sphere_rule(spec)?;
    Ok(rule
        .nodes
        .iter()
        .map(|node| angular_profile(n, node.theta, node.phi).norm_sqr() * node.weight)
        .sum())
}
