//! Long-time asymptotics for the derivative nonlinear Schrödinger equation
//! and its gauge-equivalent Gerjikov–Ivanov form.
//!
//! The crate is a pipeline: [`scattering`] turns an initial datum into a
//! reflection coefficient, [`cauchy`] builds the scalar Riemann–Hilbert
//! objects from it, [`model_rhp`] evaluates the parabolic-cylinder model
//! problem, [`asymptotics`] assembles the predicted profiles, and [`pde`]
//! evolves the equation directly so the predictions can be checked.
//! [`harness`] ties these together into reproducible experiments.

pub mod asymptotics;
pub mod cauchy;
pub mod error;
pub mod harness;
pub mod interp;
pub mod model_rhp;
pub mod pde;
pub mod quad;
pub mod scattering;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
