//! Numerical toolkit for inner functions on the unit disc and the operator
//! constructions built from them.
//!
//! The crate is organised by subject:
//!
//! - [`disc`]: horodiscs, boundary arcs and the regions cut out of the disc by them.
//! - [`inner`]: Blaschke factors and products, atomic singular inner functions,
//!   and sampled lower-bound certificates.
//! - [`construction`]: greedy disjoint horodiscs with a summable singular measure
//!   and a ray-structured interpolating zero set.
//! - [`shift`]: bilateral weighted shifts given by closed-form weight families.
//! - [`riesz`]: resolvent level sets, contour curves and weighted Riesz
//!   projections on matrix operators.

pub mod audit;
pub mod complex;
pub mod construction;
pub mod disc;
pub mod inner;
pub mod riesz;
pub mod shift;

pub use complex::{Complex64, DomainError};
