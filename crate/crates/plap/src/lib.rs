//! Discrete potential theory toolkit for the p-Laplace operator on
//! weighted graphs.
//!
//! The crate provides, bottom to top:
//!
//! * [`ineq`] — the pointwise vector inequalities (Lindqvist, the p-flux
//!   monotonicity inequality with its explicit constant, and the classical
//!   mean-curvature kernel), exposed as signed gaps.
//! * [`model`] — rotationally symmetric model manifolds and the
//!   volume-growth sufficient test for p-parabolicity.
//! * [`graph`] — weighted graphs, node/edge fields, gradient, divergence,
//!   p-Laplacian, p-energy, and the summation-by-parts identity.
//! * [`solver`] — convex minimization for prescribed p-Laplacian problems
//!   with Dirichlet data or a gauge pin.
//! * [`families`] — exhaustion families (half-line, lattice balls, custom)
//!   indexed by a truncation radius.
//! * [`knr`] — the Kelvin–Nevanlinna–Royden vector-field auditor, discrete
//!   capacity, and the comparison-proof field constructions.
//! * [`harness`] — end-to-end comparison experiments on exhaustion
//!   families with trend-based conclusions.

pub mod error;
pub mod families;
pub mod graph;
pub mod harness;
pub mod ineq;
pub mod knr;
pub mod model;
pub mod solver;

pub use error::{Error, Result};
pub use ineq::PExponent;
