//! Simulation and p-variation analysis of fractional Brownian motion (fBm)
//! and generalized grey Brownian motion (ggBm).
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs and an explicit [`RngSpec`]; batch work is routed
//! through the [`Executor`] trait so a std front end can parallelize it
//! without changing results.
//!
//! Layout:
//! - [`special`]: Gamma, Mittag-Leffler `E_β(−s)`, the M-Wright density and
//!   the moment formulas that give the critical variation limits.
//! - [`sampling`]: exact fBm samplers (Cholesky and circulant embedding),
//!   one-sided stable and M-Wright draws, and ggBm paths as `√Y · B_H`.
//! - [`variation`]: dyadic and uniform p-variation sums and the regime
//!   classification of `V_{p,n}`.
//! - [`inference`]: estimators for `α` and `β` and the two-candidate
//!   discriminator.
//! - [`validation`]: Monte Carlo checks of the distributional laws.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod exec;
pub mod fft;
pub mod inference;
pub mod params;
pub mod rng;
pub mod sampling;
pub mod special;
pub mod stats;
pub mod validation;
pub mod variation;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use params::GreyParams;
pub use rng::RngSpec;
pub use sampling::{GridSpec, SamplePath};
