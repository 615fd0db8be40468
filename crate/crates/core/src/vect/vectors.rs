use super::admm::GramSolution;
use super::program::{residuals, VectMode, VectProgram};
use crate::algebra::{dot, eig_sym, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::game::DeterministicStrategy;

/// Real vectors `η`, `v_{x,a}` and `w_{y,b}`; in synchronous mode `w = v`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFamily {
    pub mode: VectMode,
    pub nx: usize,
    pub ny: usize,
    pub k: usize,
    pub eta: Vec<f64>,
    /// `v_{x,a}` at `x·k + a`.
    pub alice: Vec<Vec<f64>>,
    /// `w_{y,b}` at `y·k + b`; empty in synchronous mode.
    pub bob: Vec<Vec<f64>>,
}

impl VectorFamily {
    pub fn v(&self, x: usize, a: usize) -> &[f64] {
        &self.alice[x * self.k + a]
    }

    pub fn w(&self, y: usize, b: usize) -> &[f64] {
        match self.mode {
            VectMode::Bipartite => &self.bob[y * self.k + b],
            VectMode::Synchronous => self.v(y, b),
        }
    }

    /// `p(a,b|x,y) = ⟨v_{x,a}|w_{y,b}⟩`.
    pub fn density(&self, x: usize, y: usize, a: usize, b: usize) -> f64 {
        dot(self.v(x, a), self.w(y, b))
    }

    fn all(&self) -> impl Iterator<Item = &Vec<f64>> {
        std::iter::once(&self.eta).chain(&self.alice).chain(&self.bob)
    }

    /// Gram matrix over the program index layout.
    pub fn gram(&self) -> SymmetricMatrix<f64> {
        let vs: Vec<&Vec<f64>> = self.all().collect();
        SymmetricMatrix::from_fn(vs.len(), |i, j| dot(vs[i], vs[j]))
    }

    /// Rank-one family of a deterministic strategy: `v_{x,a} = η` when
    /// `a = h_A(x)`, zero otherwise.
    pub fn deterministic(s: &DeterministicStrategy, k: usize, mode: VectMode) -> Self {
        let pick = |h: &[usize]| -> Vec<Vec<f64>> {
            h.iter()
                .flat_map(|&c| (0..k).map(move |a| vec![if a == c { 1.0 } else { 0.0 }]))
                .collect()
        };
        VectorFamily {
            mode,
            nx: s.h_a.len(),
            ny: s.h_b.len(),
            k,
            eta: vec![1.0],
            alice: pick(&s.h_a),
            bob: match mode {
                VectMode::Bipartite => pick(&s.h_b),
                VectMode::Synchronous => Vec::new(),
            },
        }
    }

    /// Convex combination of families realized as a weighted direct sum:
    /// the Gram matrix of the result is `Σ λᵢ Gᵢ`.
    pub fn direct_sum(parts: &[(f64, VectorFamily)]) -> Result<Self> {
        let first = &parts
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty direct sum".into()))?
            .1;
        if parts.iter().any(|(w, f)| {
            *w < 0.0 || f.mode != first.mode || (f.nx, f.ny, f.k) != (first.nx, first.ny, first.k)
        }) {
            return Err(Error::ShapeMismatch("incompatible families in direct sum".into()));
        }
        let join = |get: &dyn Fn(&VectorFamily) -> &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            (0..get(first).len())
                .map(|i| {
                    parts
                        .iter()
                        .flat_map(|(w, f)| get(f)[i].iter().map(move |c| c * w.sqrt()))
                        .collect()
                })
                .collect()
        };
        Ok(VectorFamily {
            mode: first.mode,
            nx: first.nx,
            ny: first.ny,
            k: first.k,
            eta: parts
                .iter()
                .flat_map(|(w, f)| f.eta.iter().map(move |c| c * w.sqrt()))
                .collect(),
            alice: join(&|f| &f.alice),
            bob: join(&|f| &f.bob),
        })
    }

    /// Whether every `‖v_{x,a}‖²` and `‖w_{y,b}‖²` equals `1/k` within `tol`.
    pub fn has_uniform_norms(&self, tol: f64) -> bool {
        let target = 1.0 / self.k as f64;
        self.alice
            .iter()
            .chain(&self.bob)
            .all(|v| (dot(v, v) - target).abs() <= tol)
    }
}

/// Factors `gram = Fᵀ F` spectrally, clamping negative eigenvalues, and
/// reads the vectors off the rows of `F`.
pub fn extract_vectors(sol: &GramSolution) -> Result<VectorFamily> {
    let eig = eig_sym(&sol.gram)?;
    let n = sol.gram.dim();
    let top = eig.max_value().max(0.0);
    let keep: Vec<usize> = (0..n).filter(|&c| eig.values[c] > 1e-14 * top.max(1.0)).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            keep.iter()
                .map(|&c| eig.values[c].sqrt() * eig.vectors[(i, c)])
                .collect()
        })
        .collect();
    let k = sol.k;
    let split = 1 + sol.nx * k;
    Ok(VectorFamily {
        mode: sol.mode,
        nx: sol.nx,
        ny: sol.ny,
        k,
        eta: rows[0].clone(),
        alice: rows[1..split].to_vec(),
        bob: rows[split..].to_vec(),
    })
}

/// Wraps a vector family as a solution of `prog`, with measured residuals.
pub fn solution_from_vectors(prog: &VectProgram, family: &VectorFamily) -> Result<GramSolution> {
    if family.mode != prog.mode || (family.nx, family.ny, family.k) != (prog.nx, prog.ny, prog.k) {
        return Err(Error::ShapeMismatch("vector family does not fit the program".into()));
    }
    let gram = family.gram();
    let residuals = residuals(prog, &gram)?;
    Ok(GramSolution {
        mode: prog.mode,
        nx: prog.nx,
        ny: prog.ny,
        k: prog.k,
        value: prog.objective.dot(&gram),
        gram,
        residuals,
        iterations: 0,
        converged: true,
    })
}
