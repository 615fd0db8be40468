use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::algebra::{cdot, polar_unitary, Matrix};
use crate::error::{Error, Result};
use crate::game::DeterministicStrategy;

const FRAME_TOL: f64 = 1e-9;

/// Rank-one projective measurements: for each question `x`, `k` vectors in
/// `ℂᵈ` of which `d` form an orthonormal basis and the other `k − d` are zero.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FrameData", into = "FrameData")]
pub struct Frame {
    d: usize,
    k: usize,
    n: usize,
    // v_{x,a} at x·k + a
    vectors: Vec<Vec<Complex64>>,
}

/// Unvalidated JSON form of a frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameData {
    pub d: usize,
    pub k: usize,
    /// `vectors[x][a][i] = [re, im]`
    pub vectors: Vec<Vec<Vec<[f64; 2]>>>,
}

impl FrameData {
    /// Largest deviation of any question's nonzero vectors from an
    /// orthonormal `d`-set; infinite when the shape or zero count is wrong.
    pub fn defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for row in &self.vectors {
            if row.len() != self.k || row.iter().any(|v| v.len() != self.d) {
                return f64::INFINITY;
            }
            let vs: Vec<Vec<Complex64>> = row
                .iter()
                .map(|v| v.iter().map(|c| Complex64::new(c[0], c[1])).collect())
                .collect();
            let nonzero: Vec<&Vec<Complex64>> = vs.iter().filter(|v| cdot(v, v).re > 0.25).collect();
            if nonzero.len() != self.d {
                return f64::INFINITY;
            }
            for v in vs.iter().filter(|v| cdot(v, v).re <= 0.25) {
                worst = worst.max(cdot(v, v).re.sqrt());
            }
            for (i, u) in nonzero.iter().enumerate() {
                for (j, v) in nonzero.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((cdot(u, v) - target).norm());
                }
            }
        }
        worst
    }
}

impl TryFrom<FrameData> for Frame {
    type Error = Error;

    fn try_from(j: FrameData) -> Result<Self> {
        let n = j.vectors.len();
        let mut flat = Vec::with_capacity(n * j.k);
        for (x, row) in j.vectors.into_iter().enumerate() {
            if row.len() != j.k {
                return Err(Error::InvalidFrame(format!("question {x} has {} vectors, expected {}", row.len(), j.k)));
            }
            for v in row {
                flat.push(v.iter().map(|c| Complex64::new(c[0], c[1])).collect());
            }
        }
        Frame::new(j.d, j.k, flat)
    }
}

impl From<Frame> for FrameData {
    fn from(f: Frame) -> Self {
        FrameData {
            d: f.d,
            k: f.k,
            vectors: f
                .vectors
                .chunks(f.k)
                .map(|row| row.iter().map(|v| v.iter().map(|c| [c.re, c.im]).collect()).collect())
                .collect(),
        }
    }
}

impl Frame {
    /// Validates shape, the zero-vector count and per-question orthonormality
    /// (within `1e-9`). `vectors` is indexed by `x·k + a`.
    pub fn new(d: usize, k: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        if d == 0 || d > k {
            return Err(Error::InvalidFrame(format!("dimension d = {d} outside 1..={k}")));
        }
        if vectors.len() % k != 0 || vectors.is_empty() {
            return Err(Error::InvalidFrame(format!("{} vectors is not a positive multiple of k = {k}", vectors.len())));
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != d) {
            return Err(Error::InvalidFrame(format!("vector of length {} in dimension {d}", v.len())));
        }
        let n = vectors.len() / k;
        for x in 0..n {
            let row = &vectors[x * k..(x + 1) * k];
            let nonzero: Vec<&Vec<Complex64>> = row
                .iter()
                .filter(|v| cdot(v, v).re.sqrt() > FRAME_TOL)
                .collect();
            if nonzero.len() != d {
                return Err(Error::InvalidFrame(format!(
                    "question {x}: {} nonzero vectors, expected {d}",
                    nonzero.len()
                )));
            }
            for (i, u) in nonzero.iter().enumerate() {
                for (j, v) in nonzero.iter().enumerate() {
                    let target = if i == j { 1.0 } else { 0.0 };
                    if (cdot(u, v) - target).norm() > FRAME_TOL {
                        return Err(Error::InvalidFrame(format!("question {x}: vectors are not orthonormal")));
                    }
                }
            }
        }
        Ok(Frame { d, k, n, vectors })
    }

    /// Places the columns of each unitary `U_x` in the slots `masks[x]`.
    pub fn from_unitaries(k: usize, masks: &[Vec<usize>], unitaries: &[Matrix<Complex64>]) -> Result<Self> {
        if masks.len() != unitaries.len() || masks.is_empty() {
            return Err(Error::InvalidFrame("one mask per unitary required".into()));
        }
        let d = unitaries[0].rows();
        let zero = vec![Complex64::new(0.0, 0.0); d];
        let mut vectors = Vec::with_capacity(masks.len() * k);
        for (mask, u) in masks.iter().zip(unitaries) {
            if mask.len() != d || u.rows() != d || u.cols() != d {
                return Err(Error::InvalidFrame("mask size must match unitary dimension".into()));
            }
            let mut row = vec![zero.clone(); k];
            for (c, &slot) in mask.iter().enumerate() {
                if slot >= k {
                    return Err(Error::InvalidFrame(format!("slot {slot} outside 0..{k}")));
                }
                row[slot] = u.column(c);
            }
            vectors.extend(row);
        }
        Frame::new(d, k, vectors)
    }

    /// The `d = 1` frame of a synchronous deterministic strategy.
    pub fn deterministic(h: &[usize], k: usize) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let vectors = h
            .iter()
            .flat_map(|&c| (0..k).map(move |a| vec![if a == c { one } else { zero }]))
            .collect();
        Frame::new(1, k, vectors)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of questions.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn v(&self, x: usize, a: usize) -> &[Complex64] {
        &self.vectors[x * self.k + a]
    }

    /// Slots holding nonzero vectors, ascending.
    pub fn mask(&self, x: usize) -> Vec<usize> {
        (0..self.k)
            .filter(|&a| cdot(self.v(x, a), self.v(x, a)).re > 0.5)
            .collect()
    }

    /// The `d × d` unitary whose columns are the nonzero vectors of `x`.
    pub fn unitary(&self, x: usize) -> Matrix<Complex64> {
        let mask = self.mask(x);
        Matrix::from_fn(self.d, self.d, |i, c| self.v(x, mask[c])[i])
    }

    pub(crate) fn set_unitary(&mut self, x: usize, mask: &[usize], u: &Matrix<Complex64>) {
        for (c, &slot) in mask.iter().enumerate() {
            self.vectors[x * self.k + slot] = u.column(c);
        }
    }

    /// Moves the vector in slot `from` of question `x` to the empty slot `to`.
    pub(crate) fn move_slot(&mut self, x: usize, from: usize, to: usize) {
        let zero = vec![Complex64::new(0.0, 0.0); self.d];
        let v = std::mem::replace(&mut self.vectors[x * self.k + from], zero);
        self.vectors[x * self.k + to] = v;
    }

    /// A deterministic strategy that answers `x` with the slot of its first
    /// nonzero vector. Exact for `d = 1`.
    pub fn to_strategy(&self) -> DeterministicStrategy {
        DeterministicStrategy::synchronous((0..self.n).map(|x| self.mask(x)[0]).collect())
    }
}

/// Haar-like random unitary: polar factor of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> Matrix<Complex64> {
    loop {
        let g = Matrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        if let Ok(u) = polar_unitary(&g) {
            return u;
        }
    }
}

/// `d` distinct slots out of `k`, ascending.
pub fn random_mask(rng: &mut impl Rng, k: usize, d: usize) -> Vec<usize> {
    let mut slots = rand::seq::index::sample(rng, k, d).into_vec();
    slots.sort_unstable();
    slots
}
