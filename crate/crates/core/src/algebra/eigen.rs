//! Cyclic Jacobi eigensolver for real symmetric matrices, the Hermitian case
//! through the real `2n × 2n` embedding, and the spectral helpers built on it
//! (PSD projection, polar factor).

use num_complex::Complex;

use super::matrix::{cdot, HermitianMatrix, Matrix, Real, SymmetricMatrix};
use crate::error::{Error, Result};

/// Largest dimension the dense eigensolver accepts.
pub const MAX_EIG_DIM: usize = 400;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `M = Q Λ Qᵀ` with eigenvalues ascending and
/// eigenvectors in the columns of `vectors`.
#[derive(Debug, Clone)]
pub struct SymEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Real> SymEigen<T> {
    pub fn max_value(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn min_value(&self) -> T {
        self.values[0]
    }

    /// Eigenvector for the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<T> {
        self.vectors.column(self.values.len() - 1)
    }

    /// `Q f(Λ) Qᵀ`.
    pub fn recompose(&self, f: impl Fn(T) -> T) -> SymmetricMatrix<T> {
        let n = self.values.len();
        let q = &self.vectors;
        let mut out = Matrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.values[k]);
            if fk == T::zero() {
                continue;
            }
            let col = q.column(k);
            for i in 0..n {
                let s = fk * col[i];
                for j in 0..=i {
                    out[(i, j)] = out[(i, j)] + s * col[j];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(j, i)] = out[(i, j)];
            }
        }
        SymmetricMatrix::new(out).expect("mirrored")
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
pub fn eig_sym<T: Real>(m: &SymmetricMatrix<T>) -> Result<SymEigen<T>> {
    jacobi(m.matrix().clone(), Matrix::identity(m.dim()))
}

/// Jacobi started from an approximate eigenbasis `guess` (orthogonal columns).
///
/// The matrix is first rotated into the guessed basis; when the guess is good
/// the rotated matrix is nearly diagonal and a sweep or two suffices.
pub fn eig_sym_with_guess<T: Real>(m: &SymmetricMatrix<T>, guess: &Matrix<T>) -> Result<SymEigen<T>> {
    if guess.rows() != m.dim() || guess.cols() != m.dim() {
        return eig_sym(m);
    }
    let rotated = guess.transpose().matmul(m.matrix()).matmul(guess);
    let rotated = SymmetricMatrix::symmetrize(&rotated).into_matrix();
    jacobi(rotated, guess.clone())
}

fn off_diagonal_norm<T: Real>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

fn jacobi<T: Real>(mut a: Matrix<T>, v: Matrix<T>) -> Result<SymEigen<T>> {
    let n = a.rows();
    if n == 0 {
        return Err(Error::ShapeMismatch("empty matrix".into()));
    }
    if n > MAX_EIG_DIM {
        return Err(Error::OutOfRange {
            what: "eigensolver dimension",
            value: n,
            allowed: format!("1..={MAX_EIG_DIM}"),
        });
    }
    if a.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence {
            sweeps: 0,
            residual: f64::NAN,
        });
    }
    // eigenvectors are kept as rows of vt so that rotations touch contiguous memory
    let mut vt = v.transpose();
    let scale = a.frobenius();
    let eps = T::epsilon();
    let mut converged = false;
    let mut sweeps = 0;
    let mut rp = vec![T::zero(); n];
    let mut rq = vec![T::zero(); n];
    while sweeps < MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= eps * scale || off == T::zero() {
            converged = true;
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // Skip rotations below rounding level of both diagonal entries.
                let tiny = T::lit(100.0) * apq.abs();
                if sweeps > 4 && app.abs() + tiny == app.abs() && aqq.abs() + tiny == aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                let theta = (aqq - app) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                rp.copy_from_slice(a.row(p));
                rq.copy_from_slice(a.row(q));
                {
                    let data = a.as_mut_slice();
                    for r in 0..n {
                        data[p * n + r] = c * rp[r] - s * rq[r];
                        data[q * n + r] = s * rp[r] + c * rq[r];
                    }
                    for r in 0..n {
                        data[r * n + p] = data[p * n + r];
                        data[r * n + q] = data[q * n + r];
                    }
                    data[p * n + p] = app - t * apq;
                    data[q * n + q] = aqq + t * apq;
                    data[p * n + q] = T::zero();
                    data[q * n + p] = T::zero();
                }
                let data = vt.as_mut_slice();
                for r in 0..n {
                    let vp = data[p * n + r];
                    let vq = data[q * n + r];
                    data[p * n + r] = c * vp - s * vq;
                    data[q * n + r] = s * vp + c * vq;
                }
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > T::lit(1e3) * eps * scale {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |r, c| vt[(order[c], r)]);
    Ok(SymEigen { values, vectors })
}

/// Eigen-decomposition of a Hermitian matrix: ascending real eigenvalues
/// and a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct HermEigen<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<Complex<T>>,
}

impl<T: Real> HermEigen<T> {
    pub fn max_value(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn top_vector(&self) -> Vec<Complex<T>> {
        self.vectors.column(self.values.len() - 1)
    }
}

/// Hermitian eigen-decomposition through the real embedding
/// `[[Re H, −Im H], [Im H, Re H]]`.
///
/// Every eigenvalue of `H` appears twice in the embedding; each embedded
/// eigenvector `(u; w)` maps to the complex eigenvector `u + i w`. Within a
/// cluster of equal eigenvalues the complex images are selected by pivoted
/// Gram–Schmidt so the returned basis is unitary.
pub fn eig_herm<T: Real>(h: &HermitianMatrix<T>) -> Result<HermEigen<T>> {
    let n = h.dim();
    let emb = eig_sym(&h.real_embedding())?;
    let scale = emb
        .values
        .iter()
        .fold(T::one(), |m, &l| m.max(l.abs()));
    let cluster_tol = T::lit(1e-9) * scale;

    let complex_of = |col: usize| -> Vec<Complex<T>> {
        (0..n)
            .map(|i| Complex::new(emb.vectors[(i, col)], emb.vectors[(i + n, col)]))
            .collect()
    };

    let mut chosen: Vec<(T, Vec<Complex<T>>)> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && emb.values[end] - emb.values[end - 1] <= cluster_tol {
            end += 1;
        }
        let want = (end - start) / 2;
        let mut candidates: Vec<(T, Vec<Complex<T>>)> = (start..end)
            .map(|c| (emb.values[c], complex_of(c)))
            .collect();
        for _ in 0..want {
            if chosen.len() == n {
                break;
            }
            // pick the candidate with the largest component orthogonal to `chosen`
            let mut best: Option<(T, usize, Vec<Complex<T>>)> = None;
            for (idx, (_, cand)) in candidates.iter().enumerate() {
                let r = orthogonalize(cand, &chosen);
                let norm = cnorm(&r);
                if best.as_ref().map_or(true, |(bn, _, _)| norm > *bn) {
                    best = Some((norm, idx, r));
                }
            }
            let (norm, idx, r) = best.expect("non-empty cluster");
            if norm <= T::lit(1e-6) {
                break;
            }
            let lambda = candidates[idx].0;
            candidates.remove(idx);
            chosen.push((lambda, r.iter().map(|z| z / norm).collect()));
        }
        start = end;
    }
    if chosen.len() < n {
        // Odd cluster split; complete from all embedded vectors.
        for c in 0..2 * n {
            if chosen.len() == n {
                break;
            }
            let r = orthogonalize(&complex_of(c), &chosen);
            let norm = cnorm(&r);
            if norm > T::lit(0.5) {
                chosen.push((emb.values[c], r.iter().map(|z| z / norm).collect()));
            }
        }
    }
    if chosen.len() < n {
        return Err(Error::NoConvergence {
            sweeps: 0,
            residual: f64::NAN,
        });
    }
    // Rayleigh quotients give the eigenvalue attached to each final vector.
    let hm = h.matrix();
    let mut pairs: Vec<(T, Vec<Complex<T>>)> = chosen
        .into_iter()
        .map(|(_, vec)| {
            let hv = hm.matvec(&vec);
            (cdot(&vec, &hv).re, vec)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| pairs[j].1[i]);
    Ok(HermEigen { values, vectors })
}

fn orthogonalize<T: Real>(v: &[Complex<T>], basis: &[(T, Vec<Complex<T>>)]) -> Vec<Complex<T>> {
    let mut r = v.to_vec();
    for _ in 0..2 {
        for (_, b) in basis {
            let c = cdot(b, &r);
            for (ri, bi) in r.iter_mut().zip(b) {
                *ri = *ri - bi * c;
            }
        }
    }
    r
}

fn cnorm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt()
}

/// Nearest positive semidefinite matrix in Frobenius norm: `Q max(Λ, 0) Qᵀ`.
pub fn psd_project<T: Real>(m: &SymmetricMatrix<T>) -> Result<SymmetricMatrix<T>> {
    Ok(eig_sym(m)?.recompose(|l| l.max(T::zero())))
}

/// Unitary factor `U` of the polar decomposition `M = U P`, `P ≥ 0`.
pub fn polar_unitary<T: Real>(m: &Matrix<Complex<T>>) -> Result<Matrix<Complex<T>>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("polar decomposition needs a square matrix".into()));
    }
    let n = m.rows();
    let gram = HermitianMatrix::hermitize(&m.adjoint().matmul(m));
    let eig = eig_herm(&gram)?;
    let smallest = eig.values[0].max(T::zero()).sqrt();
    if smallest < T::lit(1e-12) {
        return Err(Error::Singular(smallest.to_f64().unwrap_or(f64::NAN)));
    }
    // P⁻¹ = V diag(1/σ) Vᴴ
    let v = &eig.vectors;
    let inv_sigma: Vec<T> = eig.values.iter().map(|&l| T::one() / l.sqrt()).collect();
    let p_inv = Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(Complex::new(T::zero(), T::zero()), |s, k| {
            s + v[(i, k)] * v[(j, k)].conj() * inv_sigma[k]
        })
    });
    Ok(m.matmul(&p_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn reconstruction_error(m: &SymmetricMatrix<f64>, e: &SymEigen<f64>) -> f64 {
        e.recompose(|l| l).matrix().sub(m.matrix()).max_abs()
    }

    #[test]
    fn identity_and_diagonal() {
        let e = eig_sym(&SymmetricMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        let d = SymmetricMatrix::new(Matrix::from_diag(&[2.0, -1.0])).unwrap();
        let e = eig_sym(&d).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0]);
    }

    #[test]
    fn random_reconstruction_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for seed in 0..100 {
            let n = 1 + seed % 30;
            let m = SymmetricMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let e = eig_sym(&m).unwrap();
            let trace: f64 = e.values.iter().sum();
            assert!((trace - m.matrix().trace()).abs() < 1e-8);
            let frob = e.recompose(|l| l).matrix().sub(m.matrix()).frobenius();
            assert!(frob < 1e-8, "frobenius residual {frob}");
            let qtq = e.vectors.transpose().matmul(&e.vectors);
            assert!(qtq.sub(&Matrix::identity(n)).max_abs() < 1e-10);
            assert!(reconstruction_error(&m, &e) <= 1e-10 * (1.0 + m.matrix().max_abs()));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn warm_start_agrees_with_cold_start() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = SymmetricMatrix::from_fn(12, |_, _| rng.gen_range(-1.0..1.0));
        let cold = eig_sym(&m).unwrap();
        let nudged = SymmetricMatrix::from_fn(12, |i, j| m[(i, j)] + if i == j { 1e-6 } else { 0.0 });
        let warm = eig_sym_with_guess(&nudged, &cold.vectors).unwrap();
        for (a, b) in cold.values.iter().zip(&warm.values) {
            let (a, b): (f64, f64) = (*a, *b);
            assert!((a + 1e-6 - b).abs() < 1e-12);
        }
        assert!(reconstruction_error(&nudged, &warm) < 1e-12);
    }

    #[test]
    fn hermitian_spectrum_with_degeneracy() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 5, 8] {
            let m = Matrix::from_fn(n, n, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let h = HermitianMatrix::hermitize(&m);
            let e = eig_herm(&h).unwrap();
            assert!(e.vectors.unitarity_defect() < 1e-10);
            let lam = Matrix::from_diag(&e.values.iter().map(|&l| Complex::new(l, 0.0)).collect::<Vec<_>>());
            let rebuilt = e.vectors.matmul(&lam).matmul(&e.vectors.adjoint());
            assert!(rebuilt.sub(h.matrix()).max_modulus() < 1e-10);
        }
        let id = HermitianMatrix::hermitize(&Matrix::<Complex<f64>>::identity(4));
        let e = eig_herm(&id).unwrap();
        assert!(e.vectors.unitarity_defect() < 1e-12);
        assert!(e.values.iter().all(|&l| (l - 1.0).abs() < 1e-14));
    }

    #[test]
    fn psd_projection_cases() {
        let d = SymmetricMatrix::new(Matrix::from_diag(&[1.0, -2.0])).unwrap();
        let p = psd_project(&d).unwrap();
        assert!(p.matrix().sub(&Matrix::from_diag(&[1.0, 0.0])).max_abs() < 1e-15);
        let neg = SymmetricMatrix::new(Matrix::from_diag(&[-1.0, -1.0])).unwrap();
        assert!(psd_project(&neg).unwrap().matrix().max_abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = Matrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
        let psd = SymmetricMatrix::symmetrize(&b.transpose().matmul(&b));
        assert!(psd_project(&psd).unwrap().matrix().sub(psd.matrix()).max_abs() < 1e-9);
        let m = SymmetricMatrix::from_fn(6, |_, _| rng.gen_range(-1.0..1.0));
        let once = psd_project(&m).unwrap();
        let twice = psd_project(&once).unwrap();
        assert!(once.matrix().sub(twice.matrix()).max_abs() < 1e-9);
    }

    #[test]
    fn polar_cases() {
        let two = Matrix::<Complex<f64>>::identity(3).scale(Complex::new(2.0, 0.0));
        let u = polar_unitary(&two).unwrap();
        assert!(u.sub(&Matrix::identity(3)).max_modulus() < 1e-12);
        let d = Matrix::from_diag(&[Complex::new(3.0, 0.0), Complex::new(1.0, 0.0)]);
        assert!(polar_unitary(&d).unwrap().sub(&Matrix::identity(2)).max_modulus() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = Matrix::from_fn(4, 4, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let u = polar_unitary(&m).unwrap();
        assert!(u.unitarity_defect() < 1e-9);
        let fixed = polar_unitary(&u).unwrap();
        assert!(fixed.sub(&u).max_modulus() < 1e-9);
        let singular = Matrix::from_diag(&[Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)]);
        assert!(matches!(polar_unitary(&singular), Err(Error::Singular(_))));
    }
}
