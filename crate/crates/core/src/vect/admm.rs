use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::program::{residuals, Residuals, VectMode, VectProgram};
use crate::algebra::{eig_sym, eig_sym_with_guess, Matrix, SymmetricMatrix};
use crate::error::{Error, Result};

/// Largest Gram dimension the solver accepts.
pub const MAX_VECT_DIM: usize = 200;

const OVER_RELAXATION: f64 = 1.6;

/// Solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Seeds the random starting point.
    pub seed: u64,
}

impl Default for VectOptions {
    fn default() -> Self {
        VectOptions {
            tol: 1e-7,
            max_iters: 50_000,
            seed: 0,
        }
    }
}

/// Solver output: a PSD Gram matrix, its objective and measured infeasibility.
#[derive(Clone, Debug)]
pub struct GramSolution {
    pub mode: VectMode,
    pub nx: usize,
    pub ny: usize,
    pub k: usize,
    pub gram: SymmetricMatrix<f64>,
    pub value: f64,
    pub residuals: Residuals,
    pub iterations: usize,
    pub converged: bool,
}

// Upper-triangle vectorization with off-diagonals scaled by √2, so that the
// Euclidean inner product equals the Frobenius one.
struct Svec {
    n: usize,
    index: Vec<(usize, usize)>,
}

impl Svec {
    fn new(n: usize) -> Self {
        let mut index = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                index.push((i, j));
            }
        }
        Svec { n, index }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    fn pos(&self, i: usize, j: usize) -> usize {
        let (i, j) = (i.min(j), i.max(j));
        i * self.n - i * (i + 1) / 2 + j
    }

    fn pack(&self, m: &Matrix<f64>) -> Vec<f64> {
        self.index
            .iter()
            .map(|&(i, j)| if i == j { m[(i, i)] } else { m[(i, j)] * std::f64::consts::SQRT_2 })
            .collect()
    }

    fn unpack(&self, v: &[f64]) -> Matrix<f64> {
        let mut m = Matrix::zeros(self.n, self.n);
        for (&(i, j), &x) in self.index.iter().zip(v) {
            if i == j {
                m[(i, i)] = x;
            } else {
                let y = x / std::f64::consts::SQRT_2;
                m[(i, j)] = y;
                m[(j, i)] = y;
            }
        }
        m
    }
}

// Projection of (x, σ) onto {A x = b, x_S = σ}. Eliminating σ leaves a
// projection of x̃ = (x + σ on S)/w onto {A x = b} in the metric
// diag(w), w = 2 on S and 1 elsewhere:
// x = x̃ − W⁻¹Aᵀ(AW⁻¹Aᵀ)⁻¹(A x̃ − b).
// Dependent rows of A are dropped during the Cholesky factorization.
struct AffineProjector {
    m: usize,
    slack: Vec<usize>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
    // W⁻¹Aᵀ(AW⁻¹Aᵀ)⁻¹, m × r row-major
    gain: Vec<f64>,
}

impl AffineProjector {
    fn new(m: usize, slack: Vec<usize>, raw: Vec<(Vec<(usize, f64)>, f64)>) -> Result<Self> {
        let mut weight = vec![1.0; m];
        for &t in &slack {
            weight[t] = 2.0;
        }
        let inner = |a: &[(usize, f64)], b: &[(usize, f64)]| -> f64 {
            let mut s = 0.0;
            for &(i, x) in a {
                for &(j, y) in b {
                    if i == j {
                        s += x * y / weight[i];
                    }
                }
            }
            s
        };
        // incremental Cholesky of the row Gram matrix
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut rhs = Vec::new();
        let mut chol: Vec<Vec<f64>> = Vec::new();
        let mut reduced_rhs: Vec<f64> = Vec::new();
        for (row, b) in raw {
            let diag = inner(&row, &row);
            if diag == 0.0 {
                continue;
            }
            let mut l: Vec<f64> = rows.iter().map(|r| inner(r, &row)).collect();
            for i in 0..l.len() {
                let s: f64 = (0..i).map(|j| chol[i][j] * l[j]).sum();
                l[i] = (l[i] - s) / chol[i][i];
            }
            let pivot = diag - l.iter().map(|v| v * v).sum::<f64>();
            let rb = b - l.iter().zip(&reduced_rhs).map(|(a, c)| a * c).sum::<f64>();
            if pivot <= 1e-10 * diag {
                if rb.abs() > 1e-8 * diag.sqrt() {
                    return Err(Error::InvalidGame("inconsistent vect constraints".into()));
                }
                continue;
            }
            let d = pivot.sqrt();
            reduced_rhs.push(rb / d);
            l.push(d);
            chol.push(l);
            rows.push(row);
            rhs.push(b);
        }
        let r = rows.len();
        let mut gain = vec![0.0; m * r];
        let mut col = vec![0.0; r];
        for t in 0..m {
            col.iter_mut().for_each(|v| *v = 0.0);
            let mut any = false;
            for (i, row) in rows.iter().enumerate() {
                for &(j, x) in row {
                    if j == t {
                        col[i] += x;
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            // solve L Lᵀ y = col
            for i in 0..r {
                let s: f64 = (0..i).map(|j| chol[i][j] * col[j]).sum();
                col[i] = (col[i] - s) / chol[i][i];
            }
            for i in (0..r).rev() {
                let s: f64 = (i + 1..r).map(|j| chol[j][i] * col[j]).sum();
                col[i] = (col[i] - s) / chol[i][i];
            }
            for i in 0..r {
                gain[t * r + i] = col[i] / weight[t];
            }
        }
        Ok(AffineProjector {
            m,
            slack,
            rows,
            rhs,
            gain,
        })
    }

    fn project(&self, v: &mut [f64]) {
        let m = self.m;
        for (s, &t) in self.slack.iter().enumerate() {
            v[t] = 0.5 * (v[t] + v[m + s]);
        }
        let res: Vec<f64> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().map(|&(j, x)| x * v[j]).sum::<f64>() - b)
            .collect();
        let r = res.len();
        for t in 0..m {
            let g = &self.gain[t * r..(t + 1) * r];
            v[t] -= g.iter().zip(&res).map(|(a, b)| a * b).sum::<f64>();
        }
        for (s, &t) in self.slack.iter().enumerate() {
            v[m + s] = v[t];
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Maximizes `⟨C, G⟩` over the program's feasible set by two-block ADMM.
///
/// Sign constraints become slacks `σ = G_S ≥ 0`, so the feasible set is an
/// affine subspace of `(G, σ)` intersected with the product cone
/// `PSD × ℝ₊`. One block projects onto the affine set (and carries the
/// objective), the other projects onto the cone: a spectral clamp for `G`
/// and an entrywise clamp for `σ`. Over-relaxation 1.6, scaled duals, and
/// residual balancing of the step size during the first iterations.
///
/// The returned Gram is the PSD iterate, with residuals measured on it
/// directly. When the iteration cap is hit the last iterate is returned with
/// `converged = false`.
pub fn solve_vect(prog: &VectProgram, opts: &VectOptions) -> Result<GramSolution> {
    let n = prog.dim();
    if n > MAX_VECT_DIM {
        return Err(Error::OutOfRange {
            what: "vect program dimension",
            value: n,
            allowed: format!("1..={MAX_VECT_DIM}"),
        });
    }
    let sv = Svec::new(n);
    let m = sv.len();
    let slack: Vec<usize> = prog.nonneg.iter().map(|&(i, j)| sv.pos(i, j)).collect();
    let total = m + slack.len();

    let raw = prog
        .constraints
        .iter()
        .map(|c| {
            let terms = c
                .terms
                .iter()
                .map(|&(i, j, w)| {
                    let scale = if i == j { 1.0 } else { std::f64::consts::FRAC_1_SQRT_2 };
                    (sv.pos(i, j), w * scale)
                })
                .collect();
            (terms, c.rhs)
        })
        .collect();
    let affine = AffineProjector::new(m, slack, raw)?;
    let mut c = sv.pack(prog.objective.matrix());
    c.resize(total, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut z: Vec<f64> = (0..total).map(|_| rng.gen_range(-0.01..0.01)).collect();
    let mut u = vec![0.0; total];
    let mut x = vec![0.0; total];
    let mut rho = 1.0;
    let mut basis: Option<Matrix<f64>> = None;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < opts.max_iters {
        iterations += 1;
        for t in 0..total {
            x[t] = z[t] - u[t] + c[t] / rho;
        }
        affine.project(&mut x);

        let z_old = z.clone();
        let relaxed: Vec<f64> = x
            .iter()
            .zip(&z_old)
            .map(|(a, b)| OVER_RELAXATION * a + (1.0 - OVER_RELAXATION) * b)
            .collect();
        let v: Vec<f64> = relaxed.iter().zip(&u).map(|(a, b)| a + b).collect();
        let target = SymmetricMatrix::symmetrize(&sv.unpack(&v[..m]));
        let eig = match &basis {
            Some(q) => eig_sym_with_guess(&target, q)?,
            None => eig_sym(&target)?,
        };
        z[..m].copy_from_slice(&sv.pack(eig.recompose(|l| l.max(0.0)).matrix()));
        basis = Some(eig.vectors);
        for t in m..total {
            z[t] = v[t].max(0.0);
        }
        for t in 0..total {
            u[t] += relaxed[t] - z[t];
        }

        if iterations % 10 == 0 || iterations == opts.max_iters {
            let primal = norm(&x.iter().zip(&z).map(|(a, b)| a - b).collect::<Vec<_>>());
            let dual = rho * norm(&z.iter().zip(&z_old).map(|(a, b)| a - b).collect::<Vec<_>>());
            let scale_p = norm(&x).max(norm(&z)).max(1.0);
            let scale_d = (rho * norm(&u)).max(1.0);
            if primal <= opts.tol * scale_p && dual <= opts.tol * scale_d {
                converged = true;
                break;
            }
            let adapt = iterations % 100 == 0 && iterations <= 5_000;
            let rescale = if !adapt {
                1.0
            } else if primal > 10.0 * dual {
                2.0
            } else if dual > 10.0 * primal {
                0.5
            } else {
                1.0
            };
            if rescale != 1.0 {
                rho *= rescale;
                u.iter_mut().for_each(|v| *v /= rescale);
            }
        }
    }

    let gram = SymmetricMatrix::symmetrize(&sv.unpack(&z[..m]));
    let value = prog.objective.dot(&gram);
    let residuals = residuals(prog, &gram)?;
    Ok(GramSolution {
        mode: prog.mode,
        nx: prog.nx,
        ny: prog.ny,
        k: prog.k,
        gram,
        value,
        residuals,
        iterations,
        converged,
    })
}
