use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// A conditional density `p(a,b|x,y)` on a game with common output size `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Correlation<S> {
    nx: usize,
    ny: usize,
    k: usize,
    p: Vec<S>,
}

impl<S: Scalar> Correlation<S> {
    /// Validates non-negativity and that every `(x, y)` block sums to one.
    pub fn new(nx: usize, ny: usize, k: usize, p: Vec<S>) -> Result<Self> {
        if p.len() != nx * ny * k * k {
            return Err(Error::InvalidCorrelation(format!(
                "expected {} entries, got {}",
                nx * ny * k * k,
                p.len()
            )));
        }
        if p.iter().any(|v| *v < S::zero()) {
            return Err(Error::InvalidCorrelation("negative probability".into()));
        }
        for (block, chunk) in p.chunks(k * k).enumerate() {
            let total = crate::scalar::sum(chunk);
            let ok = if S::is_exact() {
                total == S::one()
            } else {
                (total.as_f64() - 1.0).abs() <= Tolerances::DEFAULT.correlation_sum
            };
            if !ok {
                return Err(Error::InvalidCorrelation(format!(
                    "block ({}, {}) sums to {}",
                    block / ny,
                    block % ny,
                    total.as_f64()
                )));
            }
        }
        Ok(Correlation { nx, ny, k, p })
    }

    /// Builds from `f(x, y, a, b)`, then validates.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        k: usize,
        f: impl Fn(usize, usize, usize, usize) -> S,
    ) -> Result<Self> {
        let mut p = Vec::with_capacity(nx * ny * k * k);
        for x in 0..nx {
            for y in 0..ny {
                for a in 0..k {
                    for b in 0..k {
                        p.push(f(x, y, a, b));
                    }
                }
            }
        }
        Self::new(nx, ny, k, p)
    }

    /// The point mass on `(h_a(x), h_b(y))`.
    pub fn deterministic(h_a: &[usize], h_b: &[usize], k: usize) -> Self {
        let (nx, ny) = (h_a.len(), h_b.len());
        let mut p = vec![S::zero(); nx * ny * k * k];
        for x in 0..nx {
            for y in 0..ny {
                p[((x * ny + y) * k + h_a[x]) * k + h_b[y]] = S::one();
            }
        }
        Correlation { nx, ny, k, p }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, a: usize, b: usize) -> &S {
        &self.p[((x * self.ny + y) * self.k + a) * self.k + b]
    }

    pub fn entries(&self) -> &[S] {
        &self.p
    }

    /// Alice's marginal `p_A(a|x)` computed from the `(x, y)` block.
    pub fn marginal_a(&self, x: usize, y: usize, a: usize) -> S {
        (0..self.k).fold(S::zero(), |s, b| s + self.get(x, y, a, b).clone())
    }

    /// Bob's marginal `p_B(b|y)` computed from the `(x, y)` block.
    pub fn marginal_b(&self, x: usize, y: usize, b: usize) -> S {
        (0..self.k).fold(S::zero(), |s, a| s + self.get(x, y, a, b).clone())
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Correlation<S>, lambda: S) -> Result<Self> {
        if (self.nx, self.ny, self.k) != (other.nx, other.ny, other.k) {
            return Err(Error::ShapeMismatch("correlations of different shapes".into()));
        }
        let rest = S::one() - lambda.clone();
        let p = self
            .p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| lambda.clone() * a.clone() + rest.clone() * b.clone())
            .collect();
        Correlation::new(self.nx, self.ny, self.k, p)
    }

    /// `p(a,b|x,x) = 0` whenever `a ≠ b`.
    pub fn is_synchronous(&self) -> bool {
        self.nx == self.ny
            && (0..self.nx).all(|x| {
                (0..self.k).all(|a| (0..self.k).all(|b| a == b || *self.get(x, x, a, b) == S::zero()))
            })
    }
}
