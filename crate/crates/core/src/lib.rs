//! Transform stochastic orders, inequality functionals, shape-constrained
//! minorants and goodness-of-fit tests for the generalized hazard.

pub mod dist;
pub mod error;
pub mod gof;
pub mod ineq;
pub mod mc;
pub mod orders;
pub mod shape;
pub mod special;

pub use dist::{Distribution, EmpiricalDist, ParametricModel, SeedSpec};
pub use error::{Error, Result};
