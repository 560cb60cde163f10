//! Hyperbolic densities, harmonic Bloch seminorms, coefficient bounds and Bohr-type radii
//! for harmonic mappings on the shifted disks
//! `Omega_gamma = { z : |z + gamma/(1-gamma)| < 1/(1-gamma) }`, `0 <= gamma < 1`.

pub mod blochnorm;
pub mod coeffs;
pub mod domains;
pub mod error;
pub mod radii;
pub mod series;

pub use error::{Error, Result};

/// A point of the complex plane.
pub type ComplexValue = num_complex::Complex64;
