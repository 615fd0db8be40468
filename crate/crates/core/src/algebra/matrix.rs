use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{Float, Num, Zero};

use crate::error::{Error, Result};

/// Floating-point scalars the spectral routines run on (`f32`, `f64`).
pub trait Real: Float + std::fmt::Debug + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal representable")
    }
}

impl<T: Float + std::fmt::Debug + Send + Sync + 'static> Real for T {}

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy + Num> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                let orow = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(orow) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Matrix<T> {
        self.map(|a| a * s)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    fn zip_with(&self, other: &Matrix<T>, f: impl Fn(T, T) -> T) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }
}

impl<T: Real> Matrix<T> {
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &a| m.max(a.abs()))
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().fold(T::zero(), |s, &a| s + a * a).sqrt()
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Cyclic forward shift `e_j ↦ e_{j+1 mod n}`.
    pub fn cyclic_shift(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == (j + 1) % n {
                T::one()
            } else {
                T::zero()
            }
        })
    }
}

impl<T: Real> Matrix<Complex<T>> {
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn max_modulus(&self) -> T {
        self.data.iter().fold(T::zero(), |m, a| m.max(a.norm()))
    }

    pub fn from_real(m: &Matrix<T>) -> Self {
        Matrix::from_fn(m.rows(), m.cols(), |i, j| Complex::new(m[(i, j)], T::zero()))
    }

    pub fn real_part(&self) -> Matrix<T> {
        Matrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].re)
    }

    /// `max |(UᴴU − I)_ij|`.
    pub fn unitarity_defect(&self) -> T {
        let g = self.adjoint().matmul(self);
        g.sub(&Matrix::identity(g.rows())).max_modulus()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// A real matrix that is symmetric exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix<T>(Matrix<T>);

impl<T: Real> SymmetricMatrix<T> {
    /// Accepts `m` only if it is square and `m[i][j] == m[j][i]` bit for bit.
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix is not square",
                m.rows(),
                m.cols()
            )));
        }
        let asym = m.asymmetry();
        if asym != T::zero() {
            return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(SymmetricMatrix(m))
    }

    /// Replaces `m` by `(m + mᵀ)/2`, which is symmetric exactly.
    pub fn symmetrize(m: &Matrix<T>) -> Self {
        assert!(m.is_square());
        let half = T::lit(0.5);
        let n = m.rows();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = m[(i, i)];
            for j in 0..i {
                let v = (m[(i, j)] + m[(j, i)]) * half;
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymmetricMatrix(out)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        SymmetricMatrix(out)
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymmetricMatrix(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn add(&self, other: &SymmetricMatrix<T>) -> SymmetricMatrix<T> {
        SymmetricMatrix(self.0.add(&other.0))
    }

    pub fn scale(&self, s: T) -> SymmetricMatrix<T> {
        SymmetricMatrix(self.0.scale(s))
    }

    /// Adds `s` to entries `(i, j)` and `(j, i)` (once on the diagonal).
    pub fn add_sym(&mut self, i: usize, j: usize, s: T) {
        self.0[(i, j)] = self.0[(i, j)] + s;
        if i != j {
            self.0[(j, i)] = self.0[(j, i)] + s;
        }
    }

    /// Frobenius inner product `Σ aᵢⱼ bᵢⱼ`.
    pub fn dot(&self, other: &SymmetricMatrix<T>) -> T {
        self.0
            .as_slice()
            .iter()
            .zip(other.0.as_slice())
            .fold(T::zero(), |s, (&a, &b)| s + a * b)
    }

    /// Quadratic form `vᵀ M v`.
    pub fn quad(&self, v: &[T]) -> T {
        let mv = self.0.matvec(v);
        mv.iter().zip(v).fold(T::zero(), |s, (&a, &b)| s + a * b)
    }
}

impl<T> Index<(usize, usize)> for SymmetricMatrix<T> {
    type Output = T;

    fn index(&self, idx: (usize, usize)) -> &T {
        &self.0[idx]
    }
}

/// A complex matrix that is conjugate-symmetric exactly as stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T>(Matrix<Complex<T>>);

impl<T: Real> HermitianMatrix<T> {
    pub fn new(m: Matrix<Complex<T>>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch("hermitian matrix must be square".into()));
        }
        let n = m.rows();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if worst != T::zero() {
            return Err(Error::NotSymmetric(worst.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(HermitianMatrix(m))
    }

    /// `(m + mᴴ)/2`.
    pub fn hermitize(m: &Matrix<Complex<T>>) -> Self {
        let n = m.rows();
        let half = T::lit(0.5);
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            out[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
            for j in 0..i {
                let v = (m[(i, j)] + m[(j, i)].conj()) * half;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        HermitianMatrix(out)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.0
    }

    /// The real symmetric `2n × 2n` embedding `[[Re, −Im], [Im, Re]]`.
    pub fn real_embedding(&self) -> SymmetricMatrix<T> {
        let n = self.dim();
        SymmetricMatrix::from_fn(2 * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            let z = self.0[(ri, rj)];
            match (bi, bj) {
                (0, 0) | (1, 1) => z.re,
                (0, 1) => -z.im,
                _ => z.im,
            }
        })
    }
}

/// Complex inner product `⟨u|v⟩ = Σ conj(uᵢ) vᵢ`.
pub fn cdot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    u.iter()
        .zip(v)
        .fold(Complex::zero(), |s, (a, b)| s + a.conj() * b)
}

/// Real inner product.
pub fn dot<T: Real>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |s, (&a, &b)| s + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_constructor_is_exact() {
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert!(SymmetricMatrix::new(m).is_ok());
        let m = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0 + 1e-15, 3.0]]).unwrap();
        assert!(matches!(SymmetricMatrix::new(m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn kron_and_shift() {
        let s3 = Matrix::<f64>::cyclic_shift(3);
        assert_eq!(s3[(1, 0)], 1.0);
        assert_eq!(s3[(0, 2)], 1.0);
        let k = Matrix::<f64>::identity(2).kron(&s3);
        assert_eq!(k.rows(), 6);
        assert_eq!(k[(4, 3)], 1.0);
        assert_eq!(k[(1, 3)], 0.0);
    }

    #[test]
    fn real_embedding_is_symmetric() {
        let m = Matrix::from_rows(&[
            vec![Complex::new(1.0, 0.0), Complex::new(0.0, 2.0)],
            vec![Complex::new(0.0, -2.0), Complex::new(-1.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        let e = h.real_embedding();
        assert_eq!(e.dim(), 4);
        assert_eq!(e[(0, 3)], -2.0);
        assert_eq!(e[(3, 0)], -2.0);
    }
}
