//! Signal detection for massive spatial-modulation (SM) MIMO links.
//!
//! An SM transmitter activates `N_a` out of `N_t` antennas. The active
//! pattern (the *spatial symbol*) carries bits, and each active antenna
//! sends one point of an ordinary PSK/QAM constellation. Detection is a
//! sparse recovery problem whenever `N_r < N_t`.
//!
//! This crate provides:
//!
//! - [`constellation`]: signal and spatial constellations, bit mapping and
//!   spectral-efficiency accounting.
//! - [`channel`]: Kronecker-correlated Rayleigh channels and AWGN.
//! - [`interleave`]: grouped transmission (one spatial symbol shared by `G`
//!   consecutive slots) and per-slot antenna permutations.
//! - [`detect`]: the structured subspace pursuit detector together with
//!   exhaustive ML, LMMSE, normalized OMP and classical SP baselines.
//! - [`analysis`]: closed-form moments of the correlation metric, gridded
//!   chi-square/order-statistic densities and the resulting detection
//!   probabilities.
//!
//! The crate is `no_std` and only needs `alloc`. Randomness is always taken
//! from a caller-provided [`rand::Rng`], so results are reproducible from a
//! seed.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod channel;
pub mod constellation;
pub mod detect;
mod error;
pub mod interleave;
pub mod linalg;
pub mod seed;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Complex sample type used throughout the crate.
pub type C64 = Complex64;
