//! Singular integral operators `S f = alpha P f + beta Q f` on the circle,
//! where `P` and `Q` are the Riesz projections onto the analytic and
//! co-analytic halves of `L^2`.
//!
//! Symbols are finite Laurent series ([`symbol::Symbol`]), vectors are
//! truncated mode windows ([`vector::CoeffVector`]), and the operator is
//! realized both exactly on coefficients ([`operator::apply`]) and as
//! truncated matrices ([`operator::build_matrix`]). On top of this sit:
//!
//! - [`norm`]: singular-value norm oracle, the sup-norm objective whose
//!   infimum over analytic functions recovers the squared norm, and the
//!   exactly solvable cases;
//! - [`algebra`]: products, zero products, commutativity, and the shift
//!   commutant characterizations;
//! - [`spectral`]: winding-number spectra for band-limited symbols, the
//!   resolvent oracle, indices via polynomial roots, and the shifted
//!   adjoint solver;
//! - [`subspace`]: Blaschke-product invariant subspaces, reducing
//!   subspaces, compactness obstructions, kernels and injectivity;
//! - [`selftest`]: the executable acceptance checks behind the `selftest`
//!   CLI subcommand.

pub mod algebra;
pub mod error;
pub mod linalg;
pub mod norm;
pub mod operator;
pub mod parallel;
pub mod selftest;
pub mod spectral;
pub mod subspace;
pub mod symbol;
pub mod vector;

pub use error::{CircleopError, Result};
pub use symbol::{GridSampling, Symbol};
pub use vector::CoeffVector;
