//! Exact computations with proper polyhedral divisors.

pub mod algebra;
pub mod base;
pub mod convex;
pub mod doc;
pub mod downgrade;
pub mod exactnum;
pub mod galois;
pub mod lattice;
pub mod ppdiv;
