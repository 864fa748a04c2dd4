//! Distributions of linear probing statistics for hash tables whose buckets
//! hold `b` keys each.
//!
//! The crate has four layers:
//!
//! * [`specialfn`]: the tree function `T(z)`, the root family `ζ_ℓ(q; α)`,
//!   Ramanujan's Q-function and tree polynomials.
//! * [`poisson`]: closed-form probability generating functions and moments
//!   in the infinite Poisson model, plus numeric coefficient extraction.
//! * [`exact`]: big-integer counts and exact expectations for finite tables
//!   with `m` buckets and `n` keys.
//! * [`table`]: a reference implementation of the insertion algorithm
//!   (FCFS, Robin Hood, LCFS; cyclic or parking), the profile recurrence and
//!   an exhaustive enumeration oracle.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature; enable `libm` in that case for floating-point math.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod exact;
pub mod pmf;
pub mod poisson;
pub mod quadrature;
pub mod series;
pub mod specialfn;
pub mod table;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use pmf::{Pmf, Provenance};
