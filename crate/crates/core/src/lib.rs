//! Exact harmonic analysis of K-invariant Whittaker functions on SL(2) over a
//! p-adic field with residue field of size q: spherical Whittaker values and
//! c-functions from shell-wise integration, the Fourier–Whittaker transform,
//! its Paley–Wiener gate, and wave-packet inversion.

pub mod cli;
pub mod error;
pub mod exactfun;
pub mod fourier;
pub mod inversion;
pub mod jacquet;
pub mod padic;
pub mod sqint;

pub use error::{Error, Result};
