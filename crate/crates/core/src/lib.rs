//! Exact combinatorics of reflexive polytope pairs: polar duality, toric
//! divisor class groups, the monomial-divisor mirror correspondence, cones
//! of convex piecewise-linear functions and secondary-fan chambers.

pub mod divisor;
pub mod error;
pub mod fan;
pub mod io;
pub mod linalg;
pub mod mirror;
pub mod polytope;
pub mod secondary;

pub use error::{Error, Result};
