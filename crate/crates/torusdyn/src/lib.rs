//! Exact geometry of split-torus weight systems and the experiments built
//! on top of it.
//!
//! The crate has three layers:
//!
//! * exact rational kernels: weight-system algebra ([`weights`]), the
//!   positive-zero-sum cone decomposition ([`cones`]), H-polytope geometry
//!   ([`polytopes`]), and certified shortest lattice vectors ([`lattice`]);
//! * counting machinery for the symplectic Lie-algebra variety
//!   ([`sp`]): isotropic index sets, normalization constants, exact
//!   integer-point counts at N = 1, and Monte-Carlo volume checks;
//! * numerical dynamics ([`dynamics`]): oscillatory integrals, wrapping
//!   curves, and hyperbolic shearing identities.
//!
//! All Monte-Carlo entry points take an explicit seed and produce results
//! independent of worker count.

// index loops mirror the matrix algebra; negated comparisons deliberately
// trap NaN inputs; the quadrature and gamma constants are published values
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod cones;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod lattice;
pub mod mc;
pub mod polytopes;
pub mod quad;
pub mod rat;
pub mod simplex;
pub mod sp;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
