//! Exact spectra of one-dimensional non-reciprocal tight-binding chains
//! (Hatano–Nelson and two-band SSH) under generalized boundary conditions,
//! an independent dense eigensolver used to certify them, localization
//! observables, and parameter-scan drivers, including two 2D skin models.
//!
//! The analytic path reduces each chain to a characteristic equation in the
//! complex angle `θ` (with Bloch factors `z = r e^{±iθ}`), solves it as a
//! palindromic polynomial, and rebuilds eigenvectors from the 2×2 boundary
//! matrix. The [`oracle`] module diagonalizes the same Hamiltonians densely.

pub mod analytic;
pub mod error;
pub mod exec;
pub mod io;
pub mod matrix;
pub mod models;
pub mod observables;
pub mod oracle;
pub mod scans;

pub use error::{Error, Result};
pub use matrix::DenseMatrix;

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
