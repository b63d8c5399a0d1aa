//! Biquantization workbench for symmetric pairs.
//!
//! The crate combines two kinds of machinery that normally live in different
//! worlds:
//!
//! * exact computer algebra over the rationals — Lie algebras with validated
//!   structure constants, PBW-ordered enveloping algebras, Duflo-type series
//!   operators, truncated Baker–Campbell–Hausdorff series, Chevalley–Eilenberg
//!   kernels;
//! * numerical geometry on configuration spaces — colored propagator 1-forms
//!   on the upper half-plane, the first quadrant and the half-strip, and
//!   reproducible Monte-Carlo estimates of graph weights.
//!
//! Everything algebraic is exact (`num_rational::BigRational`); floating
//! point enters only through the geometry and Monte-Carlo layers.

// Index-based loops over small dense tables are the house style in the
// numeric modules; iterator rewrites obscure the matrix arithmetic.
#![allow(clippy::needless_range_loop)]

pub mod bch;
pub mod checks;
pub mod confspace;
pub mod error;
pub mod graphs;
pub mod liealg;
pub mod numeric;
pub mod propagators;
pub mod ratlin;
pub mod reduction;
pub mod starprod;
pub mod uea;
pub mod weights;

pub use error::Error;
pub use liealg::{Character, LieAlgebra, Subalgebra, SymmetricPair};
pub use uea::{ConstCoeffOperator, PolyElement, UEAElement};
pub use weights::WeightEstimate;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
