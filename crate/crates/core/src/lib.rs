//! Classical multipole quantization of the free radiation field, checked
//! numerically.
//!
//! The crate evaluates the building blocks of a single multipole mode
//! (spherical harmonics, spherical Bessel functions), integrates them with
//! rules of known polynomial exactness, and assembles the identities that
//! lead from the cycle-averaged field energy to `<H> = beta (n + 1/2) omega`
//! and to the constancy of the intrinsic angular momentum.
//!
//! Module map:
//!
//! - [`domain`]: constants, geometry and value types
//! - [`specfun`]: Legendre, spherical harmonics, spherical Bessel
//! - [`quad`]: Gauss-Legendre, sphere product rule, composite radial rule
//! - [`angular`]: Gram matrix and the `2n + 1` degeneracy sum
//! - [`radial`]: `R_n` by quadrature, closed form and asymptote
//! - [`energy`]: mode energy, mode-sum integral and `beta`
//! - [`angmom`]: intrinsic angular momentum and its conservation
//! - [`verify`]: the acceptance checks as a reusable suite
//! - [`output`]: CSV/JSON emitters

pub mod angmom;
pub mod angular;
pub mod domain;
pub mod energy;
pub mod error;
pub mod output;
pub mod quad;
pub mod radial;
pub mod specfun;
pub mod verify;

pub use domain::{
    spherical_volume, validate_setup, FieldSpec, ModeIndex, PhysicalSetup, Polarization,
    QuadratureSpec, Vec3, Vec3C,
};
pub use error::{HqError, Result};
