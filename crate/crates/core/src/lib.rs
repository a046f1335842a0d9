//! Invariant rings, Hilbert ideals and relative Hilbert ideals of finite
//! p-groups acting linearly in characteristic p, together with decision
//! procedures and instance verifiers for the structural results about them.

pub mod error;
pub mod gf;
pub mod linalg;
pub mod grobner;
pub mod harness;
pub mod group;
pub mod checks;
pub mod cli;
pub mod instance;
pub mod invariants;
pub mod poly;
pub mod samples;

pub use error::{Error, Result};
