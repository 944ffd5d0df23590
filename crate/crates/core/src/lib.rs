//! Deciding how close a quantum channel, given as a mixed-state circuit, is
//! to a linear isometry.
//!
//! The crate is `no_std` (with `alloc`). It provides the dense linear algebra
//! and purity functionals ([`linalg`]), an executable circuit representation
//! of channels ([`circuit`]), Choi/Kraus conversions and the isometry
//! analysis ([`channel`]), the two-swap-test verification protocol
//! ([`protocol`]) and the verifier-to-channel reduction ([`reduction`]).
//! Text formats and the command-line front end live in the `isolab` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod channel;
pub mod circuit;
pub mod error;
pub mod linalg;
pub mod protocol;
pub mod reduction;
pub mod rng;
pub mod tol;

pub use error::{Error, Result};
pub use num_complex::Complex64;
