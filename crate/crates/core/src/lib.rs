//! Exact arithmetic toolkit for backward orbits of the power maps z ↦ z^d over Q:
//! places and heights, radical points, Galois orbits of binomials, p-adic
//! distance profiles, local heights, S-integrality and verification suites.

pub mod arith;
pub mod error;
pub mod galois;
pub mod harness;
pub mod integrality;
pub mod local;
pub mod mp;
pub mod padic;
pub mod poly;
pub mod radical;

pub use error::{Error, Result};
