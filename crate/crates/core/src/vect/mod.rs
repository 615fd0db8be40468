//! The vect value as a semidefinite program over Gram matrices, explicit
//! constructions, and rounding of near-perfect solutions.

mod admm;
mod construction;
mod program;
mod rounding;
mod vectors;

pub use admm::{solve_vect, GramSolution, VectOptions, MAX_VECT_DIM};
pub use construction::{c4_certified_construction, c4_certified_vectors, c4_vect_value};
pub use program::{build_program, residuals, LinearConstraint, Residuals, VectMode, VectProgram};
pub use rounding::{round_to_deterministic, rounding_threshold, RoundingOutcome, RoundingStatus};
pub use vectors::{extract_vectors, solution_from_vectors, VectorFamily};

/// Builds and solves the program in one step.
pub fn vect_value(
    g: &crate::game::UniqueGame,
    pi: &crate::game::InputDensity<f64>,
    mode: VectMode,
    opts: &VectOptions,
) -> crate::error::Result<GramSolution> {
    solve_vect(&build_program(g, pi, mode)?, opts)
}
