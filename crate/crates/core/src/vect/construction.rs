use std::f64::consts::PI;

use super::admm::GramSolution;
use super::program::{build_program, VectMode};
use super::vectors::{solution_from_vectors, VectorFamily};
use crate::digraph::{directed_cycle, game_from_digraph};
use crate::error::Result;

/// `2(1 − 1/√3)`.
pub fn c4_vect_value() -> f64 {
    2.0 * (1.0 - 1.0 / 3f64.sqrt())
}

/// Explicit synchronous vectors in `ℝ⁵` for the directed 4-cycle game:
/// `v_{x,a} = (1/3)(1, α s_{x,a}, β t_{x,a})` with `s`, `t` unit vectors in
/// the plane at angles `π/6·x + 2π/3·(a−x)` and `π/3·x + 4π/3·(a−x)`.
pub fn c4_certified_vectors() -> VectorFamily {
    let alpha = (2.0 * (3f64.sqrt() - 1.0)).sqrt();
    let beta = (2.0 * (2.0 - 3f64.sqrt())).sqrt();
    let k = 3;
    let mut alice = Vec::with_capacity(12);
    for x in 0..4 {
        for a in 0..k {
            let d = a as f64 - x as f64;
            let s = PI / 6.0 * x as f64 + 2.0 * PI / 3.0 * d;
            let t = PI / 3.0 * x as f64 + 4.0 * PI / 3.0 * d;
            alice.push(
                [1.0, alpha * s.cos(), alpha * s.sin(), beta * t.cos(), beta * t.sin()]
                    .iter()
                    .map(|c| c / 3.0)
                    .collect(),
            );
        }
    }
    VectorFamily {
        mode: VectMode::Synchronous,
        nx: 4,
        ny: 4,
        k,
        eta: vec![1.0, 0.0, 0.0, 0.0, 0.0],
        alice,
        bob: Vec::new(),
    }
}

/// The certified construction as a solution of the synchronous program for
/// the directed 4-cycle, with measured residuals.
pub fn c4_certified_construction() -> Result<GramSolution> {
    let (g, pi) = game_from_digraph::<f64>(&directed_cycle(4)?)?;
    let prog = build_program(g.unique(), &pi, VectMode::Synchronous)?;
    solution_from_vectors(&prog, &c4_certified_vectors())
}
