//! Compiles braid-word computations on Fibonacci anyons into weaves, where a
//! single warp strand moves around stationary weft strands.
//!
//! The numerical layer ([`anyon`]) is generic over the scalar type; the
//! aliases below fix it to `f64`, which the search and compiler use.

pub mod anyon;
pub mod braid;
pub mod compiler;
pub mod injection;
pub mod random;
pub mod scaling;
pub mod scalar;

pub use braid::{BraidError, BraidWord, Generator, Permutation, Sign, WarpTrace};
pub use scalar::Real;

pub type Unitary64 = anyon::Unitary<f64>;
pub type Unitary32 = anyon::Unitary<f32>;
pub type Model64 = anyon::ModelConstants<f64>;
pub type Model32 = anyon::ModelConstants<f32>;
pub type Representation64 = anyon::Representation<f64>;
pub type SectorBlocks64 = anyon::SectorBlocks<f64>;
