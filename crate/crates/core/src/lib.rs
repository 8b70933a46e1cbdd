//! Numerical library for relativistic field-theory machinery at desk scale:
//! Lorentz/spinor representation algebra, Dirac matrices, a 12-component
//! electrodynamics two-point model, Wick pairings, constructed and Feynman
//! scattering amplitudes, elastic cross sections, and equivalent potentials.
//!
//! The crate is `no_std`-compatible (requires `alloc`); all numerics are
//! `f64` with `num_complex::Complex64`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cmatrix;
pub mod dirac;
pub mod fields;
pub mod fmath;
pub mod kinematics;
pub mod potentials;
pub mod quad;
pub mod scattering;
pub mod wick;
pub mod xsection;

pub use num_complex::Complex64;

/// Default relative tolerance for matrix-identity checks.
pub const DEFAULT_TOL: f64 = 1e-10;
