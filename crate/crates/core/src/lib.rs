//! Values and bounds for unique and group-based nonlocal games.
//!
//! Exact classical values by exhaustive search, the vect semidefinite
//! relaxation with rounding, quantum lower bounds from explicit strategies,
//! and cost-matrix eigenvalue upper bounds on the synchronous qc-value.

pub mod algebra;
pub mod classical;
pub mod digraph;
pub mod error;
pub mod game;
pub mod io;
pub mod quantum;
pub mod reproduce;
pub mod scalar;
pub mod tolerance;
pub mod vect;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact scalar used for classical values.
pub type Rational = num_rational::Rational64;
/// Input density with exact entries.
pub type ExactDensity = game::InputDensity<Rational>;
/// Input density in floating point, as taken by the numerical solvers.
pub type Density = game::InputDensity<f64>;
pub type ExactCorrelation = game::Correlation<Rational>;
pub type FloatCorrelation = game::Correlation<f64>;
