//! Trace sets of thin continued-fraction semigroups in SL₂(ℤ).
//!
//! The crate enumerates the semigroups Γ_A generated by `(a 1; 1 0)`,
//! `a ∈ A`, counts traces with multiplicity, estimates Hausdorff dimensions,
//! and runs the local-density, level-of-distribution, exponential-sum and
//! geodesic experiments built on top of them.

pub mod analytic;
pub mod arith;
pub mod dimension;
pub mod distribution;
pub mod error;
pub mod fit;
pub mod geodesics;
pub mod local;
pub mod semigroup;

pub use error::{Error, Result};
