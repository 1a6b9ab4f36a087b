//! Effective two-, three- and four-body interactions of bosons in a
//! spherically symmetric harmonic trap, from perturbation theory in the
//! scattering length up to third order.
//!
//! Energies are in units of ħω and lengths in units of the oscillator
//! length σ(ω) = sqrt(ħ/(mω)) unless a function says otherwise.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod coeffs;
pub mod energies;
pub mod error;
pub mod extrapolate;
pub mod hobasis;
pub mod numeric;
pub mod scatter;
pub mod wick;

pub use error::{Error, Result};
