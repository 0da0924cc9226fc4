//! Simulation toolkit for nuclear-spin-preserving sideband cooling of ⁸⁷Sr.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only computation:
//! angular-momentum algebra, hyperfine/Zeeman matrix elements, the 13-level
//! atom–laser model, a Lindblad integrator, dressed-state analysis and the
//! laser unit-conversion chain. File formats and the command line live in the
//! `nscool-cli` crate.
//!
//! Units: every frequency handed to or returned from the public API is a
//! cyclic frequency in MHz (the "ω/2π" value). Matrices that enter the master
//! equation are in rad/μs and time is in μs.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod analysis;
pub mod angmom;
pub mod constants;
mod error;
pub mod hyperfine;
pub mod lasercalc;
pub mod lindblad;
mod roots;
pub mod srmodel;

pub use error::{Error, IntegrationFailure};

pub use num_complex::Complex64;

/// Dense complex matrix used for density matrices and Hamiltonians.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector used for state vectors.
pub type CVector = nalgebra::DVector<Complex64>;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Converts a cyclic frequency in MHz into an angular frequency in rad/μs.
#[inline]
pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    core::f64::consts::TAU * f_mhz
}

/// Converts an angular frequency in rad/μs into a cyclic frequency in MHz.
#[inline]
pub fn angular_to_mhz(w: f64) -> f64 {
    w / core::f64::consts::TAU
}
