use crate::algebra::SymmetricMatrix;
use crate::error::{Error, Result};
use crate::game::{InputDensity, UniqueGame};

/// Whether Bob has his own vector family or shares Alice's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VectMode {
    Bipartite,
    Synchronous,
}

/// `Σ coef·G[i][j] = rhs`, with each `(i, j)` taken as `i ≤ j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, usize, f64)>,
    pub rhs: f64,
}

/// Gram-matrix program for the vect value.
///
/// Index layout: `0` is `η`, `1 + x·k + a` is `v_{x,a}`, and in bipartite
/// mode `1 + nx·k + y·k + b` is `w_{y,b}`.
#[derive(Clone, Debug)]
pub struct VectProgram {
    pub mode: VectMode,
    pub nx: usize,
    pub ny: usize,
    pub k: usize,
    pub objective: SymmetricMatrix<f64>,
    pub constraints: Vec<LinearConstraint>,
    /// Entries `(i, j)`, `i < j`, constrained to be nonnegative.
    pub nonneg: Vec<(usize, usize)>,
}

impl VectProgram {
    pub fn dim(&self) -> usize {
        match self.mode {
            VectMode::Bipartite => 1 + (self.nx + self.ny) * self.k,
            VectMode::Synchronous => 1 + self.nx * self.k,
        }
    }

    pub fn alice(&self, x: usize, a: usize) -> usize {
        1 + x * self.k + a
    }

    /// Index of `w_{y,b}`, which is `v_{y,b}` in synchronous mode.
    pub fn bob(&self, y: usize, b: usize) -> usize {
        match self.mode {
            VectMode::Bipartite => 1 + self.nx * self.k + y * self.k + b,
            VectMode::Synchronous => self.alice(y, b),
        }
    }

    /// `(p(a,b|x,y))` read off a Gram matrix over this program's index set.
    pub fn density(&self, gram: &SymmetricMatrix<f64>, x: usize, y: usize, a: usize, b: usize) -> f64 {
        gram[(self.alice(x, a), self.bob(y, b))]
    }
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

fn block_constraints(
    dim: usize,
    groups: usize,
    k: usize,
    index: impl Fn(usize, usize) -> usize,
    out: &mut Vec<LinearConstraint>,
) {
    for x in 0..groups {
        for a in 0..k {
            for a2 in a + 1..k {
                let (i, j) = ordered(index(x, a), index(x, a2));
                out.push(LinearConstraint {
                    terms: vec![(i, j, 1.0)],
                    rhs: 0.0,
                });
            }
        }
        // Σ_a v_{x,a} = η, tested against every column
        for col in 0..dim {
            let mut terms: Vec<(usize, usize, f64)> = Vec::with_capacity(k + 1);
            let mut push = |i: usize, j: usize, c: f64| {
                let (i, j) = ordered(i, j);
                match terms.iter_mut().find(|t| t.0 == i && t.1 == j) {
                    Some(t) => t.2 += c,
                    None => terms.push((i, j, c)),
                }
            };
            for a in 0..k {
                push(index(x, a), col, 1.0);
            }
            push(0, col, -1.0);
            terms.retain(|t| t.2 != 0.0);
            if !terms.is_empty() {
                out.push(LinearConstraint { terms, rhs: 0.0 });
            }
        }
    }
}

/// Builds the program whose optimum is `ω_vect(G, π)` (bipartite) or
/// `ω^s_vect(G, π)` (synchronous).
pub fn build_program(g: &UniqueGame, pi: &InputDensity<f64>, mode: VectMode) -> Result<VectProgram> {
    if (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch("density shape differs from game".into()));
    }
    if mode == VectMode::Synchronous && !g.is_square() {
        return Err(Error::NotSquare {
            nx: g.nx(),
            ny: g.ny(),
        });
    }
    let (nx, ny, k) = (g.nx(), g.ny(), g.k());
    let mut prog = VectProgram {
        mode,
        nx,
        ny,
        k,
        objective: SymmetricMatrix::zeros(1),
        constraints: Vec::new(),
        nonneg: Vec::new(),
    };
    let dim = prog.dim();

    let mut c = SymmetricMatrix::zeros(dim);
    for (x, y, a, b) in g.winning() {
        let w = *pi.get(x, y);
        if w == 0.0 {
            continue;
        }
        let (i, j) = (prog.alice(x, a), prog.bob(y, b));
        if i == j {
            c.add_sym(i, i, w);
        } else {
            c.add_sym(i, j, w / 2.0);
        }
    }
    prog.objective = c;

    let mut cons = vec![LinearConstraint {
        terms: vec![(0, 0, 1.0)],
        rhs: 1.0,
    }];
    block_constraints(dim, nx, k, |x, a| 1 + x * k + a, &mut cons);
    if mode == VectMode::Bipartite {
        block_constraints(dim, ny, k, |y, b| 1 + nx * k + y * k + b, &mut cons);
    }
    prog.constraints = cons;

    let mut nonneg = Vec::new();
    match mode {
        VectMode::Bipartite => {
            for x in 0..nx {
                for a in 0..k {
                    for y in 0..ny {
                        for b in 0..k {
                            nonneg.push(ordered(prog.alice(x, a), prog.bob(y, b)));
                        }
                    }
                }
            }
        }
        VectMode::Synchronous => {
            for x in 0..nx {
                for y in x + 1..nx {
                    for a in 0..k {
                        for b in 0..k {
                            nonneg.push(ordered(prog.alice(x, a), prog.alice(y, b)));
                        }
                    }
                }
            }
        }
    }
    prog.nonneg = nonneg;
    Ok(prog)
}

/// Infeasibility of a Gram matrix against a program.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Residuals {
    /// Largest violation of a linear equality.
    pub affine: f64,
    /// `max(0, −λ_min)`.
    pub cone: f64,
    /// Largest negative part of a sign-constrained entry.
    pub nonneg: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.affine.max(self.cone).max(self.nonneg)
    }
}

/// Measures every constraint of `prog` on `gram` directly.
pub fn residuals(prog: &VectProgram, gram: &SymmetricMatrix<f64>) -> Result<Residuals> {
    if gram.dim() != prog.dim() {
        return Err(Error::ShapeMismatch(format!(
            "gram has dimension {}, program needs {}",
            gram.dim(),
            prog.dim()
        )));
    }
    let affine = prog
        .constraints
        .iter()
        .map(|c| (c.terms.iter().map(|&(i, j, w)| w * gram[(i, j)]).sum::<f64>() - c.rhs).abs())
        .fold(0.0, f64::max);
    let nonneg = prog
        .nonneg
        .iter()
        .map(|&(i, j)| (-gram[(i, j)]).max(0.0))
        .fold(0.0, f64::max);
    let cone = (-crate::algebra::eig_sym(gram)?.min_value()).max(0.0);
    Ok(Residuals { affine, cone, nonneg })
}
