use serde::Serialize;

use crate::algebra::{eig_sym, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::game::{InputDensity, UniqueGame};

/// `c_{(x,a),(y,b)} = ½(π(x,y)V(x,y,a,b) + π(y,x)V(y,x,b,a))`, indexed by
/// `x·k + a`.
pub fn cost_matrix(g: &UniqueGame, pi: &InputDensity<f64>) -> Result<SymmetricMatrix<f64>> {
    if !g.is_square() {
        return Err(Error::NotSquare { nx: g.nx(), ny: g.ny() });
    }
    if (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch("density does not match the game".into()));
    }
    let k = g.k();
    let mut c = SymmetricMatrix::zeros(g.nx() * k);
    for (x, y, a, b) in g.winning() {
        let (i, j) = (x * k + a, y * k + b);
        let w = *pi.get(x, y);
        if w > 0.0 {
            // half at (i, j) and half at (j, i); both halves land on i = j
            c.add_sym(i, j, if i == j { w } else { 0.5 * w });
        }
    }
    Ok(c)
}

/// One generator of the cost-free subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum CostFreeElement {
    /// `|x,a⟩⟨x,b| + |x,b⟩⟨x,a|`, `a < b`.
    Unit { x: usize, a: usize, b: usize },
    /// `Σ_a |x,a⟩⟨x,a| − |x+1,a⟩⟨x+1,a|`.
    DiagDiff { x: usize },
}

/// Basis of the cost-free matrices: symmetric same-question off-diagonal
/// units and differences of consecutive diagonal blocks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CostFreeBasis {
    pub n: usize,
    pub k: usize,
    pub elements: Vec<CostFreeElement>,
}

impl CostFreeBasis {
    pub fn new(n: usize, k: usize) -> Self {
        let mut elements = Vec::with_capacity(n * k * (k - 1) / 2 + n.saturating_sub(1));
        for x in 0..n {
            for a in 0..k {
                for b in a + 1..k {
                    elements.push(CostFreeElement::Unit { x, a, b });
                }
            }
        }
        elements.extend((0..n.saturating_sub(1)).map(|x| CostFreeElement::DiagDiff { x }));
        CostFreeBasis { n, k, elements }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.n * self.k
    }

    pub fn element(&self, i: usize) -> SymmetricMatrix<f64> {
        self.combine_one(i, 1.0)
    }

    fn combine_one(&self, i: usize, s: f64) -> SymmetricMatrix<f64> {
        let mut z = SymmetricMatrix::zeros(self.dim());
        self.add_element(&mut z, self.elements[i], s);
        z
    }

    fn add_element(&self, z: &mut SymmetricMatrix<f64>, e: CostFreeElement, s: f64) {
        let k = self.k;
        match e {
            CostFreeElement::Unit { x, a, b } => z.add_sym(x * k + a, x * k + b, s),
            CostFreeElement::DiagDiff { x } => {
                for a in 0..k {
                    z.add_sym(x * k + a, x * k + a, s);
                    z.add_sym((x + 1) * k + a, (x + 1) * k + a, -s);
                }
            }
        }
    }

    /// `Σ zᵢ Bᵢ`.
    pub fn combine(&self, coords: &[f64]) -> SymmetricMatrix<f64> {
        let mut z = SymmetricMatrix::zeros(self.dim());
        for (&e, &s) in self.elements.iter().zip(coords) {
            if s != 0.0 {
                self.add_element(&mut z, e, s);
            }
        }
        z
    }

    /// `⟨P, Bᵢ⟩` for every basis element.
    pub fn pair(&self, p: &SymmetricMatrix<f64>) -> Vec<f64> {
        let k = self.k;
        self.elements
            .iter()
            .map(|&e| match e {
                CostFreeElement::Unit { x, a, b } => 2.0 * p[(x * k + a, x * k + b)],
                CostFreeElement::DiagDiff { x } => (0..k)
                    .map(|a| p[(x * k + a, x * k + a)] - p[((x + 1) * k + a, (x + 1) * k + a)])
                    .sum(),
            })
            .collect()
    }

    /// Distance-like measure of how far `z` is from the cost-free subspace:
    /// the largest cross-question entry, diagonal spread within a block, or
    /// block-diagonal sum. Zero exactly on the span.
    pub fn violation(&self, z: &SymmetricMatrix<f64>) -> f64 {
        let (n, k) = (self.n, self.k);
        if z.dim() != n * k {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        let mut total = 0.0;
        for i in 0..n * k {
            for j in 0..n * k {
                if i / k != j / k {
                    worst = worst.max(z[(i, j)].abs());
                }
            }
        }
        for x in 0..n {
            let d = z[(x * k, x * k)];
            total += d;
            for a in 1..k {
                worst = worst.max((z[(x * k + a, x * k + a)] - d).abs());
            }
        }
        worst.max(total.abs())
    }

    /// Coordinates of `z` in this basis, or an error naming the first entry
    /// that keeps it outside the span (tolerance `tol`, absolute).
    pub fn coordinates(&self, z: &SymmetricMatrix<f64>, tol: f64) -> Result<Vec<f64>> {
        let (n, k) = (self.n, self.k);
        if z.dim() != n * k {
            return Err(Error::ShapeMismatch(format!("matrix of size {} for {n} questions and {k} answers", z.dim())));
        }
        for i in 0..n * k {
            for j in 0..n * k {
                if i / k != j / k && z[(i, j)].abs() > tol {
                    return Err(Error::NotCostFree(format!("entry ({i}, {j}) couples different questions")));
                }
            }
        }
        let mut diag = Vec::with_capacity(n);
        for x in 0..n {
            let d = z[(x * k, x * k)];
            if let Some(a) = (1..k).find(|&a| (z[(x * k + a, x * k + a)] - d).abs() > tol) {
                return Err(Error::NotCostFree(format!("diagonal of block {x} is not constant at answer {a}")));
            }
            diag.push(d);
        }
        let total: f64 = diag.iter().sum();
        if total.abs() > tol * n as f64 {
            return Err(Error::NotCostFree(format!("block diagonals sum to {total:e}, not 0")));
        }
        let mut prefix = 0.0;
        Ok(self
            .elements
            .iter()
            .map(|&e| match e {
                CostFreeElement::Unit { x, a, b } => z[(x * k + a, x * k + b)],
                CostFreeElement::DiagDiff { x } => {
                    prefix += diag[x];
                    prefix
                }
            })
            .collect())
    }
}

pub fn cost_free_basis(g: &UniqueGame) -> Result<CostFreeBasis> {
    if !g.is_square() {
        return Err(Error::NotSquare { nx: g.nx(), ny: g.ny() });
    }
    Ok(CostFreeBasis::new(g.nx(), g.k()))
}

#[derive(Clone, Debug)]
pub struct QcOptions {
    /// Subgradient iterations.
    pub iters: usize,
    /// Step scale `c` in `c/√t`.
    pub step: f64,
    /// Smoothed refinement after the subgradient phase.
    pub smooth: bool,
    pub z_init: Option<SymmetricMatrix<f64>>,
}

impl Default for QcOptions {
    fn default() -> Self {
        QcOptions {
            iters: 2000,
            step: 0.05,
            smooth: true,
            z_init: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QcReport {
    /// `|X| · λ_max(C + Z)` at the best `Z`.
    pub bound: f64,
    pub z: SymmetricMatrix<f64>,
    pub coords: Vec<f64>,
    /// Best bound so far, after each iteration (nonincreasing).
    pub history: Vec<f64>,
}

/// `|X| · λ_max(C + Z)` for a cost-free `Z`: an upper bound on the
/// synchronous qc-value for any such `Z`.
pub fn qc_bound_for(g: &UniqueGame, pi: &InputDensity<f64>, z: &SymmetricMatrix<f64>) -> Result<f64> {
    let c = cost_matrix(g, pi)?;
    cost_free_basis(g)?.coordinates(z, 1e-9)?;
    Ok(g.nx() as f64 * eig_sym(&c.add(z))?.max_value())
}

struct Objective<'a> {
    c: &'a SymmetricMatrix<f64>,
    basis: &'a CostFreeBasis,
}

impl Objective<'_> {
    fn lambda_max(&self, z: &[f64]) -> Result<(f64, Vec<f64>)> {
        let e = eig_sym(&self.c.add(&self.basis.combine(z)))?;
        let u = e.top_vector();
        let p = SymmetricMatrix::from_fn(u.len(), |i, j| u[i] * u[j]);
        Ok((e.max_value(), self.basis.pair(&p)))
    }

    // μ log Σ exp(λᵢ/μ) and its gradient; returns λ_max too.
    fn smoothed(&self, z: &[f64], mu: f64) -> Result<(f64, f64, Vec<f64>)> {
        let e = eig_sym(&self.c.add(&self.basis.combine(z)))?;
        let top = e.max_value();
        let w: Vec<f64> = e.values.iter().map(|&l| ((l - top) / mu).exp()).collect();
        let total: f64 = w.iter().sum();
        let n = e.values.len();
        let vecs = &e.vectors;
        let p = SymmetricMatrix::from_fn(n, |i, j| {
            (0..n).filter(|&m| w[m] > 1e-18).map(|m| w[m] * vecs[(i, m)] * vecs[(j, m)]).sum::<f64>() / total
        });
        Ok((top + mu * total.ln(), top, self.basis.pair(&p)))
    }
}

// Accelerated gradient with backtracking and function-value restarts on the
// smoothed objective at temperature `mu`, started from the best point so far.
fn smooth_phase(
    obj: &Objective<'_>,
    mu: f64,
    best: &mut (f64, Vec<f64>),
    history: &mut Vec<f64>,
    record: &impl Fn(f64, &[f64], &mut (f64, Vec<f64>), &mut Vec<f64>),
) -> Result<()> {
    const ITERS: usize = 600;
    let mut z = best.1.clone();
    let (mut fz, _, _) = obj.smoothed(&z, mu)?;
    let mut y = z.clone();
    let mut t = 1.0f64;
    let mut lip = 1.0 / mu;
    for _ in 0..ITERS {
        let (fy, ly, gy) = obj.smoothed(&y, mu)?;
        record(ly, &y, best, history);
        let g2: f64 = gy.iter().map(|g| g * g).sum();
        if g2 < 1e-26 {
            break;
        }
        let mut next = None;
        for _ in 0..60 {
            let trial: Vec<f64> = y.iter().zip(&gy).map(|(yi, gi)| yi - gi / lip).collect();
            let (ft, lt, _) = obj.smoothed(&trial, mu)?;
            if ft <= fy - 0.5 * g2 / lip {
                record(lt, &trial, best, history);
                next = Some((trial, ft));
                break;
            }
            lip *= 2.0;
        }
        let Some((zn, fzn)) = next else { break };
        if fzn > fz {
            // restart momentum
            t = 1.0;
            y = z.clone();
            continue;
        }
        let tn = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / tn;
        y = zn.iter().zip(&z).map(|(a, b)| a + beta * (a - b)).collect();
        z = zn;
        fz = fzn;
        t = tn;
        lip *= 0.9;
    }
    Ok(())
}

/// Minimizes `λ_max(C + Z)` over the cost-free subspace: a subgradient phase
/// with step `c/√t`, then (optionally) gradient descent on a log-sum-exp
/// smoothing with decreasing temperature. The best iterate is kept, so the
/// returned bound is valid however far the optimization gets.
pub fn qc_sync_upper_bound(g: &UniqueGame, pi: &InputDensity<f64>, opts: &QcOptions) -> Result<QcReport> {
    let c = cost_matrix(g, pi)?;
    let basis = cost_free_basis(g)?;
    let obj = Objective { c: &c, basis: &basis };
    let n = g.nx() as f64;
    let mut z = match &opts.z_init {
        Some(z0) => basis.coordinates(z0, 1e-9)?,
        None => vec![0.0; basis.len()],
    };
    let (l0, mut sub) = obj.lambda_max(&z)?;
    let mut best = (l0, z.clone());
    let mut history = vec![n * l0];
    let record = |l: f64, z: &[f64], best: &mut (f64, Vec<f64>), history: &mut Vec<f64>| {
        if l < best.0 {
            *best = (l, z.to_vec());
        }
        history.push(n * best.0);
    };

    for t in 1..=opts.iters {
        let norm = sub.iter().map(|s| s * s).sum::<f64>().sqrt();
        if norm < 1e-15 {
            break;
        }
        let step = opts.step / (t as f64).sqrt() / norm;
        z.iter_mut().zip(&sub).for_each(|(zi, si)| *zi -= step * si);
        let (l, s) = obj.lambda_max(&z)?;
        sub = s;
        record(l, &z, &mut best, &mut history);
    }

    if opts.smooth {
        let mut mu = 1e-3;
        while mu >= 1e-7 {
            smooth_phase(&obj, mu, &mut best, &mut history, &record)?;
            mu *= 0.1;
        }
    }

    let (lambda, coords) = best;
    Ok(QcReport {
        bound: n * lambda,
        z: basis.combine(&coords),
        coords,
        history,
    })
}
