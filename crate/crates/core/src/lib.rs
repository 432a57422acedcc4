//! Galois orbits of torsion points, Mahler measures and the lattice machinery that links
//! them.

pub mod arith;
pub mod equidist;
pub mod error;
pub mod experiments;
pub mod galois;
pub mod lattice;
pub mod mahler;
pub mod laurent;
pub mod roots;
pub mod separation;

pub use error::{Error, Result};
