//! Deterministic inter-satellite link channel simulation.
//!
//! The crate models a line-of-sight link between two satellites in
//! formation flight and measures its error rate, outage, and capacity by
//! Monte Carlo simulation. The channel combines four effects:
//!
//! - relative-motion Doppler and the Jakes spectrum ([`geometry`]),
//! - Sun-angle-driven scintillation mapped to a Rician K-factor, plus the
//!   free-space and thermal terms of the link budget ([`solar`]),
//! - time-correlated Rician fading by sum of sinusoids ([`fading`]),
//! - a K-state Markov channel binding a Rician parameter set to each
//!   state ([`markov`]), with state-based power allocation ([`power`]).
//!
//! [`sim`] assembles these into an end-to-end 4QAM link harness. All
//! randomness is derived from a single root seed through labeled
//! substreams ([`rng`]), so every result is reproducible bit for bit and
//! independent of worker scheduling.
//!
//! The crate is `no_std`-compatible (with `alloc`); the `std` feature
//! (default) only switches the float backend and error-trait integration.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fading;
pub mod geometry;
pub mod markov;
pub mod math;
pub mod power;
pub mod rng;
pub mod sim;
pub mod solar;

pub use error::{Error, Result};
pub use num_complex::Complex64;
