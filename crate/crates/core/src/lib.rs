//! Exact combinatorial invariants of multiprojective Seshadri stratifications.
//!
//! The library works with the discrete data of a stratification: a finite
//! graded poset with bonds, index sets and extremal-function degrees. From
//! that data it computes quasi-valuations of regular functions through
//! monomial chain charts, the fan of monoids and its lattices, Newton-Okounkov
//! polytopes with their face lattices and exact volumes, multidegrees, and the
//! standard monomial theory of type-A flag varieties in Pluecker coordinates.
//! All arithmetic is exact (arbitrary-precision rationals).

pub mod error;
pub mod rational;
pub mod linalg;
pub mod poset;
pub mod weyl;
pub mod tableaux;
pub mod qvec;
pub mod strat;
pub mod fan;
pub mod newton;
pub mod valuation;
pub mod pluecker;
pub mod builtins;

pub use error::{Error, Result};
pub use rational::Rat;
