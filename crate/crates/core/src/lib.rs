//! Exact computational geometry for tame subsets of spheres.
//!
//! A subset of the sphere `S^{n-1}` is *m-tame* when none of its subsets of
//! at most `m` points has the origin in its convex hull. This crate works
//! with open polyhedral regions (finite unions of open polyhedral cones) and
//! decides tameness, computes hulls and addable sets, certifies maximality,
//! and runs the completion procedure on the 2-sphere. Everything is exact:
//! coordinates are rationals and every verdict carries a witness that can be
//! checked by substitution.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod completion;
pub mod cone;
mod error;
pub mod exact;
pub mod families;
mod lp;
pub mod oracle;
pub mod region;
pub mod tameness;

pub use cone::{Cell, Cone, SphericalHull};
pub use error::Error;
pub use exact::{LinearSystem, Ray, Rational};
pub use region::Region;
pub use tameness::{BalancedWitness, TamenessVerdict};
