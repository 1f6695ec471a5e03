//! Exact computations for symmetric functions, Steenrod powers,
//! cohomological periodicity, torus weight sets and projective
//! configurations.

pub mod arith;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod periodicity;
pub mod projcomb;
pub mod steenrod;
pub mod symmfunc;
pub mod weightsets;

pub use error::{Error, Result};
