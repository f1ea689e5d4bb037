//! Wavelet-tree statistical complexity.
//!
//! Signals are decomposed with a periodized dyadic wavelet transform
//! ([`dwt`]); the detail coefficients are modelled by a hidden Markov tree
//! with two-state Gaussian mixtures tied per scale ([`hmt`]); the fitted
//! hidden layer yields global and local complexity and the conditional
//! (differential) entropy of the coefficients ([`complexity`]); the same fit
//! drives a state-dependent shrinkage denoiser ([`denoise`]). [`orchestrate`]
//! ties these together into wavelet selection and logistic-map sweeps.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complexity;
pub mod denoise;
pub mod dwt;
pub mod error;
pub mod hmt;
pub mod orchestrate;
pub mod signalgen;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use signalgen::Signal;
