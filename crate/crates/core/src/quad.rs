//! Gauss-Legendre rules, the product rule on the sphere and a composite rule
//! for radial integrals.

use std::f64::consts::PI;

use crate::domain::{QuadratureSpec, Vec3};
use crate::error::{HqError, Result};

/// One-dimensional rule: abscissae ascending, positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Maps a rule on [-1, 1] to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> Rule1D {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        Rule1D {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }
}

/// `(P_q(x), P_q'(x))` by the three-term recurrence.
fn legendre_with_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for l in 2..=q {
        let p2 = ((2 * l - 1) as f64 * x * p1 - (l - 1) as f64 * p0) / l as f64;
        p0 = p1;
        p1 = p2;
    }
    // valid for |x| < 1, which holds for every interior root
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule of the given order on [-1, 1]; exact through degree
/// `2 order - 1`.
pub fn gauss_legendre(order: usize) -> Result<Rule1D> {
    if order == 0 {
        return Err(HqError::domain(
            "order",
            "Gauss-Legendre order must be >= 1",
        ));
    }
    if order == 1 {
        return Ok(Rule1D {
            nodes: vec![0.0],
            weights: vec![2.0],
        });
    }
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    for i in 0..order.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th largest root
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    Ok(Rule1D { nodes, weights })
}

/// A quadrature node on the unit sphere. `cos_theta`/`sin_theta` are kept
/// alongside `theta` so integrands avoid re-deriving them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereNode {
    pub theta: f64,
    pub phi: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub weight: f64,
}

impl SphereNode {
    fn from_unit(v: Vec3, weight: f64) -> Self {
        let ct = v.z.clamp(-1.0, 1.0);
        let st = v.x.hypot(v.y);
        SphereNode {
            theta: st.atan2(ct),
            phi: v.y.atan2(v.x),
            cos_theta: ct,
            sin_theta: st,
            weight,
        }
    }

    pub fn unit_vector(&self) -> Vec3 {
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(self.sin_theta * cp, self.sin_theta * sp, self.cos_theta)
    }
}

/// Product rule on the sphere with weights summing to 4 pi.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    pub nodes: Vec<SphereNode>,
}

impl SphereRule {
    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Same weights at nodes moved by the rotation matrix `rot` (row-major).
    pub fn rotated(&self, rot: &[[f64; 3]; 3]) -> SphereRule {
        let apply = |v: Vec3| {
            Vec3::new(
                rot[0][0] * v.x + rot[0][1] * v.y + rot[0][2] * v.z,
                rot[1][0] * v.x + rot[1][1] * v.y + rot[1][2] * v.z,
                rot[2][0] * v.x + rot[2][1] * v.y + rot[2][2] * v.z,
            )
        };
        SphereRule {
            nodes: self
                .nodes
                .iter()
                .map(|n| SphereNode::from_unit(apply(n.unit_vector()), n.weight))
                .collect(),
        }
    }
}

/// Gauss-Legendre in cos(theta) times the uniform trapezoid in phi. Exact for
/// spherical polynomials up to degree `min(2 theta_order - 1, phi_points - 1)`.
pub fn sphere_rule(spec: &QuadratureSpec) -> Result<SphereRule> {
    spec.validate()?;
    let gl = gauss_legendre(spec.theta_order)?;
    let dphi = 2.0 * PI / spec.phi_points as f64;
    let mut nodes = Vec::with_capacity(gl.len() * spec.phi_points);
    for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
        let st = ((1.0 - x) * (1.0 + x)).sqrt();
        let theta = st.atan2(x);
        for j in 0..spec.phi_points {
            nodes.push(SphereNode {
                theta,
                phi: j as f64 * dphi,
                cos_theta: x,
                sin_theta: st,
                weight: w * dphi,
            });
        }
    }
    Ok(SphereRule { nodes })
}

/// Panel count for [a, b]: at least `spec.radial_panels`, raised so no panel
/// spans more than half a period of an oscillation with wavenumber `k_max`.
pub fn radial_panel_count(a: f64, b: f64, spec: &QuadratureSpec, k_max: Option<f64>) -> usize {
    let needed = match k_max {
        Some(k) if k > 0.0 => ((b - a) * k / PI).ceil() as usize,
        _ => 0,
    };
    spec.radial_panels.max(needed)
}

/// Composite Gauss-Legendre rule over [a, b].
pub fn composite_rule(a: f64, b: f64, spec: &QuadratureSpec, k_max: Option<f64>) -> Result<Rule1D> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(HqError::domain(
            "interval",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    composite_rule_from(a, b - a, spec, k_max)
}

/// Composite rule over `[start, start + width]` with panel widths taken from
/// `width` itself, so a narrow band far from the origin keeps its full
/// relative precision.
pub fn composite_rule_from(
    start: f64,
    width: f64,
    spec: &QuadratureSpec,
    k_max: Option<f64>,
) -> Result<Rule1D> {
    spec.validate()?;
    if !(start.is_finite() && width.is_finite() && width > 0.0) {
        return Err(HqError::domain(
            "interval",
            format!("need finite start and width > 0, got {start}, {width}"),
        ));
    }
    let panels = radial_panel_count(0.0, width, spec, k_max);
    let base = gauss_legendre(spec.radial_order)?;
    let h = width / panels as f64;
    let half = 0.5 * h;
    let mut nodes = Vec::with_capacity(panels * base.len());
    let mut weights = Vec::with_capacity(panels * base.len());
    for p in 0..panels {
        let mid = start + (p as f64 + 0.5) * h;
        for (&x, &w) in base.nodes.iter().zip(&base.weights) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    Ok(Rule1D { nodes, weights })
}

/// `int_a^b f(r) dr` by the composite rule; `k_max` is an optional
/// oscillation hint (pass `2k` for integrands in `j_n(kr)^2`).
pub fn integrate_radial(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
    k_max: Option<f64>,
) -> Result<f64> {
    Ok(composite_rule(a, b, spec, k_max)?.integrate(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    use crate::domain::ModeIndex;
    use crate::specfun::sph_harmonic;

    fn moment(d: usize) -> f64 {
        if d % 2 == 1 {
            0.0
        } else {
            2.0 / (d as f64 + 1.0)
        }
    }

    #[test]
    fn low_order_rules() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!((r.nodes.clone(), r.weights.clone()), (vec![0.0], vec![2.0]));
        let r = gauss_legendre(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + s).abs() < 1e-15 && (r.nodes[1] - s).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15 && (r.weights[1] - 1.0).abs() < 1e-15);
        assert!((r.nodes[1] - 0.577350269189626).abs() < 1e-14);
        assert!(gauss_legendre(0).is_err());
    }

    #[test]
    fn order_five_x8() {
        let r = gauss_legendre(5).unwrap();
        let v = r.integrate(|x| x.powi(8));
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn degree_exactness() {
        for q in 1..=20 {
            let r = gauss_legendre(q).unwrap();
            assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            assert!(r.weights.iter().all(|&w| w > 0.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            for d in 0..=(2 * q - 1) {
                let got = r.integrate(|x| x.powi(d as i32));
                let want = moment(d);
                let err = if want == 0.0 {
                    got.abs()
                } else {
                    ((got - want) / want).abs()
                };
                assert!(err <= 1e-13, "q={q} d={d}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn high_order_rule_is_well_formed() {
        let r = gauss_legendre(80).unwrap();
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!((r.integrate(|x| x.powi(100)) - 2.0 / 101.0).abs() < 1e-14);
    }

    fn spec(t: usize, p: usize) -> QuadratureSpec {
        QuadratureSpec {
            theta_order: t,
            phi_points: p,
            ..Default::default()
        }
    }

    fn sphere_integral(rule: &SphereRule, f: impl Fn(&SphereNode) -> Complex64) -> Complex64 {
        rule.nodes.iter().map(|n| f(n) * n.weight).sum()
    }

    #[test]
    fn sphere_weights_sum_to_four_pi() {
        for (t, p) in [(1, 1), (2, 3), (8, 16), (21, 42), (33, 7)] {
            let r = sphere_rule(&spec(t, p)).unwrap();
            assert!((r.weight_sum() - 4.0 * PI).abs() < 1e-12);
            assert!(r.nodes.iter().all(|n| n.weight > 0.0));
        }
    }

    #[test]
    fn sphere_orthonormality_examples() {
        let r = sphere_rule(&spec(8, 16)).unwrap();
        let y32 = ModeIndex::new(3, 2).unwrap();
        let v = sphere_integral(&r, |n| {
            sph_harmonic(y32, n.theta, n.phi).value.norm_sqr().into()
        });
        assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-15);
        let a = ModeIndex::new(2, 1).unwrap();
        let b = ModeIndex::new(2, 0).unwrap();
        let v = sphere_integral(&r, |n| {
            sph_harmonic(a, n.theta, n.phi).value * sph_harmonic(b, n.theta, n.phi).value.conj()
        });
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn rotation_preserves_weights_and_unit_vectors() {
        let r = sphere_rule(&spec(4, 8)).unwrap();
        let (s, c) = 0.7f64.sin_cos();
        let rot = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
        let rr = r.rotated(&rot);
        assert!((rr.weight_sum() - 4.0 * PI).abs() < 1e-12);
        for (a, b) in r.nodes.iter().zip(&rr.nodes) {
            assert!((a.cos_theta - b.cos_theta).abs() < 1e-15);
            assert!((b.unit_vector().norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn radial_examples() {
        let s = QuadratureSpec::default();
        assert!((integrate_radial(|_| 1.0, 0.0, 2.0, &s, None).unwrap() - 2.0).abs() < 1e-14);
        assert!(
            (integrate_radial(|r| r * r, 0.0, 1.0, &s, None).unwrap() - 1.0 / 3.0).abs() < 1e-14
        );
        // int_0^pi sin^2(10 r) dr = pi/2 - sin(20 pi)/40
        let oracle = PI / 2.0 - (20.0 * PI).sin() / 40.0;
        let v = integrate_radial(|r| (10.0 * r).sin().powi(2), 0.0, PI, &s, Some(20.0)).unwrap();
        assert!((v - oracle).abs() < 1e-10);
        assert!(integrate_radial(|_| 1.0, 1.0, 1.0, &s, None).is_err());
        assert!(integrate_radial(|_| 1.0, 2.0, 1.0, &s, None).is_err());
    }

    #[test]
    fn narrow_band_keeps_its_width() {
        let s = QuadratureSpec::default();
        let r = composite_rule_from(100.0, 1e-3, &s, None).unwrap();
        let total: f64 = r.weights.iter().sum();
        assert!((total / 1e-3 - 1.0).abs() < 1e-14);
        assert!(r.nodes.iter().all(|&k| k > 100.0 && k < 100.001));
    }

    #[test]
    fn oscillation_hint_raises_panels() {
        let s = QuadratureSpec::default();
        assert_eq!(radial_panel_count(0.0, PI, &s, Some(20.0)), 20);
        assert_eq!(radial_panel_count(0.0, PI, &s, Some(1.0)), s.radial_panels);
        assert_eq!(radial_panel_count(0.0, PI, &s, None), s.radial_panels);
    }

    #[test]
    fn refinement_gains_two_orders() {
        // [0, 1] is not a whole number of periods, so equispaced panels cannot alias
        let oracle = 0.5 - 20f64.sin() / 40.0;
        let f = |r: f64| (10.0 * r).sin().powi(2);
        let err = |panels| {
            let s = QuadratureSpec {
                radial_panels: panels,
                radial_order: 3,
                ..Default::default()
            };
            (integrate_radial(f, 0.0, 1.0, &s, None).unwrap() - oracle).abs()
        };
        for p in [8, 16, 24] {
            let (coarse, fine) = (err(p), err(4 * p));
            assert!(fine <= coarse / 100.0, "panels {p}: {coarse:e} -> {fine:e}");
        }
    }
}
