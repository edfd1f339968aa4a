//! Domain types shared by every module: physical constants and geometry,
//! mode indices, single-mode field descriptions, complex 3-vectors and
//! quadrature settings.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HqError, Result, Violation};

/// CODATA 2018 vacuum permittivity, F/m.
pub const EPSILON0_SI: f64 = 8.8541878128e-12;
/// Speed of light in vacuum, m/s (exact).
pub const C_SI: f64 = 299_792_458.0;
/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR_SI: f64 = 1.054571817e-34;

/// Physical constants and quantization geometry.
///
/// `radius` and `volume` are independent inputs; use [`spherical_volume`]
/// when the quantization volume is the ball of that radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup {
    pub epsilon0: f64,
    pub c: f64,
    pub radius: f64,
    pub volume: f64,
    pub e0: f64,
}

impl Default for PhysicalSetup {
    /// SI constants, unit radius, unit volume, unit amplitude.
    fn default() -> Self {
        PhysicalSetup {
            epsilon0: EPSILON0_SI,
            c: C_SI,
            radius: 1.0,
            volume: 1.0,
            e0: 1.0,
        }
    }
}

impl PhysicalSetup {
    pub fn si(radius: f64, volume: f64, e0: f64) -> Self {
        PhysicalSetup {
            radius,
            volume,
            e0,
            ..Default::default()
        }
    }

    /// Natural units: epsilon0 = c = 1.
    pub fn natural(radius: f64, volume: f64, e0: f64) -> Self {
        PhysicalSetup {
            epsilon0: 1.0,
            c: 1.0,
            radius,
            volume,
            e0,
        }
    }

    /// Vacuum permeability derived from `c = 1/sqrt(epsilon0 mu0)`.
    pub fn mu0(&self) -> f64 {
        1.0 / (self.epsilon0 * self.c * self.c)
    }

    pub fn with_e0(self, e0: f64) -> Self {
        PhysicalSetup { e0, ..self }
    }

    pub fn validate(self) -> Result<Self> {
        validate_setup(self)
    }
}

/// Checks every invariant of `setup` and reports all violations at once.
pub fn validate_setup(setup: PhysicalSetup) -> Result<PhysicalSetup> {
    let mut bad = Vec::new();
    let mut positive = |field: &'static str, v: f64| {
        if !(v.is_finite() && v > 0.0) {
            bad.push(Violation {
                field,
                message: format!("must be finite and > 0, got {v}"),
            });
        }
    };
    positive("epsilon0", setup.epsilon0);
    positive("c", setup.c);
    positive("R", setup.radius);
    positive("V", setup.volume);
    if !(setup.e0.is_finite() && setup.e0 >= 0.0) {
        bad.push(Violation {
            field: "E0",
            message: format!("must be finite and >= 0, got {}", setup.e0),
        });
    }
    if bad.is_empty() {
        Ok(setup)
    } else {
        Err(HqError::Validation(bad))
    }
}

/// Volume of the ball of radius `r`.
pub fn spherical_volume(r: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(HqError::domain("R", format!("radius must be > 0, got {r}")));
    }
    Ok(4.0 / 3.0 * PI * r * r * r)
}

/// Multipole order `n` and magnetic index `m`, `|m| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    n: usize,
    m: i64,
}

impl ModeIndex {
    pub fn new(n: usize, m: i64) -> Result<Self> {
        if m.unsigned_abs() as usize > n {
            return Err(HqError::domain(
                "m",
                format!("|m| = {} exceeds n = {n}", m.abs()),
            ));
        }
        Ok(ModeIndex { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    /// All valid indices of order `n`, m ascending from -n.
    pub fn all_of_order(n: usize) -> impl Iterator<Item = ModeIndex> {
        let n_i = n as i64;
        (-n_i..=n_i).map(move |m| ModeIndex { n, m })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Polarization {
    Linear1,
    Linear2,
    /// Circular with helicity +1 (`true`) or -1 (`false`).
    Circular {
        positive: bool,
    },
}

impl Polarization {
    pub const PLUS: Polarization = Polarization::Circular { positive: true };
    pub const MINUS: Polarization = Polarization::Circular { positive: false };

    pub fn helicity(&self) -> i32 {
        match self {
            Polarization::Circular { positive: true } => 1,
            Polarization::Circular { positive: false } => -1,
            _ => 0,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Polarization::Linear1 => "linear1",
            Polarization::Linear2 => "linear2",
            Polarization::Circular { positive: true } => "circular+",
            Polarization::Circular { positive: false } => "circular-",
        }
    }
}

impl std::str::FromStr for Polarization {
    type Err = HqError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear1" | "l1" => Ok(Polarization::Linear1),
            "linear2" | "l2" => Ok(Polarization::Linear2),
            "circular+" | "plus" | "+1" | "+" => Ok(Polarization::PLUS),
            "circular-" | "minus" | "-1" | "-" => Ok(Polarization::MINUS),
            other => Err(HqError::domain(
                "polarization",
                format!("unknown polarization `{other}`"),
            )),
        }
    }
}

impl From<Polarization> for String {
    fn from(p: Polarization) -> String {
        p.label().to_string()
    }
}

impl TryFrom<String> for Polarization {
    type Error = HqError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Real 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(&self) -> Vec3 {
        self.scale(1.0 / self.norm())
    }

    /// Angle between two nonzero vectors, robust near 0 and pi.
    pub fn angle_to(&self, o: &Vec3) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// 3-vector of complex scalars.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3C {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl Vec3C {
    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Vec3C { x, y, z }
    }

    pub fn from_real(v: Vec3) -> Self {
        Vec3C::new(v.x.into(), v.y.into(), v.z.into())
    }

    pub fn conj(&self) -> Vec3C {
        Vec3C::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    pub fn cross(&self, o: &Vec3C) -> Vec3C {
        Vec3C::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Hermitian dot `sum a_i^* b_i`.
    pub fn hdot(&self, o: &Vec3C) -> Complex64 {
        self.x.conj() * o.x + self.y.conj() * o.y + self.z.conj() * o.z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn re(&self) -> Vec3 {
        Vec3::new(self.x.re, self.y.re, self.z.re)
    }

    pub fn im(&self) -> Vec3 {
        Vec3::new(self.x.im, self.y.im, self.z.im)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Mul<Complex64> for Vec3C {
    type Output = Vec3C;
    fn mul(self, s: Complex64) -> Vec3C {
        Vec3C::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Add for Vec3C {
    type Output = Vec3C;
    fn add(self, o: Vec3C) -> Vec3C {
        Vec3C::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

/// A single multipole mode: order, wavenumber, amplitude, polarization and
/// the propagation direction that fixes the transverse polarization plane.
/// The angular frequency is always `c * k` for the setup in use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    n: usize,
    k: f64,
    e0: f64,
    polarization: Polarization,
    khat: Vec3,
}

impl FieldSpec {
    pub fn new(n: usize, k: f64, e0: f64, polarization: Polarization, khat: Vec3) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(HqError::domain(
                "k",
                format!("wavenumber must be > 0, got {k}"),
            ));
        }
        if !e0.is_finite() {
            return Err(HqError::domain("E0", "amplitude must be finite"));
        }
        if !((khat.norm() - 1.0).abs() <= 1e-12) {
            return Err(HqError::domain(
                "khat",
                format!(
                    "propagation direction must be a unit vector, |khat| = {}",
                    khat.norm()
                ),
            ));
        }
        Ok(FieldSpec {
            n,
            k,
            e0,
            polarization,
            khat,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn e0(&self) -> f64 {
        self.e0
    }
    pub fn polarization(&self) -> Polarization {
        self.polarization
    }
    pub fn khat(&self) -> Vec3 {
        self.khat
    }

    pub fn omega(&self, c: f64) -> f64 {
        c * self.k
    }

    pub fn with_polarization(self, polarization: Polarization) -> Self {
        FieldSpec {
            polarization,
            ..self
        }
    }

    /// Orthonormal pair (e1, e2) with e1 x e2 = khat. e1 comes from crossing
    /// khat with the coordinate axis of its smallest-magnitude component.
    pub fn transverse_basis(&self) -> (Vec3, Vec3) {
        let k = self.khat;
        let a = [k.x.abs(), k.y.abs(), k.z.abs()];
        let axis = if a[0] <= a[1] && a[0] <= a[2] {
            Vec3::new(1.0, 0.0, 0.0)
        } else if a[1] <= a[2] {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        let e1 = axis.cross(&k).normalized();
        let e2 = k.cross(&e1);
        (e1, e2)
    }

    /// Complex unit polarization vector. Circular uses `(e1 + i lambda e2)/sqrt 2`.
    pub fn polarization_vector(&self) -> Vec3C {
        let (e1, e2) = self.transverse_basis();
        match self.polarization {
            Polarization::Linear1 => Vec3C::from_real(e1),
            Polarization::Linear2 => Vec3C::from_real(e2),
            Polarization::Circular { positive } => {
                let lam = if positive { 1.0 } else { -1.0 };
                let s = std::f64::consts::FRAC_1_SQRT_2;
                Vec3C::new(
                    Complex64::new(e1.x * s, lam * e2.x * s),
                    Complex64::new(e1.y * s, lam * e2.y * s),
                    Complex64::new(e1.z * s, lam * e2.z * s),
                )
            }
        }
    }
}

/// Quadrature orders for the angular product rule and the composite radial rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss-Legendre order in cos(theta).
    pub theta_order: usize,
    /// Uniform points in phi on [0, 2 pi).
    pub phi_points: usize,
    pub radial_panels: usize,
    /// Gauss-Legendre order per radial panel.
    pub radial_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            theta_order: 8,
            phi_points: 16,
            radial_panels: 8,
            radial_order: 16,
        }
    }
}

impl QuadratureSpec {
    /// Smallest angular rule that integrates products of two order-`n`
    /// harmonics exactly, with default radial settings.
    pub fn sufficient_for(n: usize) -> Self {
        QuadratureSpec {
            theta_order: n + 1,
            phi_points: 2 * n + 2,
            ..Default::default()
        }
    }

    pub fn is_sufficient_for(&self, n: usize) -> bool {
        self.theta_order > n && self.phi_points >= 2 * n + 2
    }

    pub fn validate(self) -> Result<Self> {
        let fields = [
            ("theta_order", self.theta_order),
            ("phi_points", self.phi_points),
            ("radial_panels", self.radial_panels),
            ("radial_order", self.radial_order),
        ];
        let bad: Vec<Violation> = fields
            .iter()
            .filter(|(_, v)| *v == 0)
            .map(|(f, _)| Violation {
                field: f,
                message: "must be >= 1".into(),
            })
            .collect();
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(HqError::Validation(bad))
        }
    }

    pub(crate) fn require_sufficient(&self, n: usize) -> Result<()> {
        self.validate()?;
        if !self.is_sufficient_for(n) {
            return Err(HqError::InsufficientQuadrature {
                order: n,
                message: format!(
                    "need theta_order >= {} and phi_points >= {}, got {} and {}",
                    n + 1,
                    2 * n + 2,
                    self.theta_order,
                    self.phi_points
                ),
            });
        }
        Ok(())
    }
}
