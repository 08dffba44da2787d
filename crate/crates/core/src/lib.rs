//! Algebraic Riccati equations and inequalities with semidefinite
//! quadratic and constant terms: solvers, Hamiltonian eigenstructure,
//! passivity certificates and a perturbation laboratory.
//!
//! Everything is generic over the real field `T: Real` (`f32`, `f64`) and
//! works in complex arithmetic; the `f64` aliases below cover the common case.

pub mod error;
pub mod linalg;
pub mod perturbation;
pub mod reference;
pub mod riccati;
pub mod scalar;
pub mod structured;
pub mod tolerance;

pub use error::{Error, Result};
pub use scalar::Real;
pub use tolerance::Tolerances;

/// Complex double-precision scalar.
pub type C64 = num_complex::Complex<f64>;
/// Complex double-precision matrix.
pub type Matrix = linalg::ComplexMatrix<f64>;
/// Double-precision Riccati triple.
pub type Data = structured::RiccatiData<f64>;
/// Double-precision state-space system.
pub type System = structured::StateSpace<f64>;
