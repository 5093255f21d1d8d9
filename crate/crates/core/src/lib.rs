//! Causal orders from noncommutative geometry and isocones on finite-dimensional algebras.

pub mod causal_cone;
pub mod error;
pub mod experiment;
pub mod figure;
pub mod hermitian;
pub mod isocone;
pub mod minkowski;
pub mod poset;
pub mod sampling;

pub use error::{Error, Result};
