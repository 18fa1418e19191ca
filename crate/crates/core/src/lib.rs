//! Bound states of the Dirac equation in a Coulomb field.
//!
//! The crate builds the general two-parameter family of eigenbispinors of the
//! hydrogen-like Dirac problem, together with everything needed to check them
//! numerically: special functions and Gauss rules, spherical spinors, the
//! closed-form radial problem, finite-difference operators for the Dirac,
//! Johnson–Lippman and BEL invariants, observable fields, and an independent
//! shooting solver for the radial system.
//!
//! Units: `ħ = m = c = 1`, so energies are in `mc²`. Radial positions are in
//! units of `r_B / Z` and amplitudes in `(Z / r_B)^{3/2}`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod angular;
pub mod bispinor;
mod error;
pub mod fd;
pub mod observables;
pub mod odeoracle;
pub mod operators;
pub mod radial;
pub mod specfun;

pub use error::{DiracError, Result};

/// CODATA 2018 fine-structure constant.
pub const FINE_STRUCTURE: f64 = 7.2973525693e-3;
