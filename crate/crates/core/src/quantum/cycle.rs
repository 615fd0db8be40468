use num_complex::Complex64;
use serde::Serialize;

use super::bipartite::{q1_bipartite_value, BipartiteStrategy};
use super::cost::cost_matrix;
use super::frame::Frame;
use crate::algebra::{eig_sym, Matrix, SymmetricMatrix};
use crate::digraph::{directed_cycle, game_from_digraph};
use crate::error::{Error, Result};

/// `θ_k = 2π/(3k)`.
pub fn cycle_angle(k: usize) -> f64 {
    2.0 * std::f64::consts::PI / (3.0 * k as f64)
}

/// `c_k = cos θ_k`.
pub fn cycle_cos(k: usize) -> f64 {
    cycle_angle(k).cos()
}

fn require(k: usize, min: usize, coprime: bool) -> Result<()> {
    if k < min || (coprime && k % 3 == 0) {
        let allowed = if coprime {
            format!(">= {min} and not divisible by 3")
        } else {
            format!(">= {min}")
        };
        return Err(Error::OutOfRange { what: "cycle length", value: k, allowed });
    }
    Ok(())
}

/// Rotation of ℝ³ by `θ_k` about `(1,1,1)/√3` (Rodrigues).
pub fn cycle_rotation(k: usize) -> Matrix<f64> {
    let th = cycle_angle(k);
    let (s, c) = th.sin_cos();
    let n = 1.0 / 3f64.sqrt();
    // K = [n]ₓ for n = (1,1,1)/√3
    let kx = Matrix::from_rows(&[vec![0.0, -n, n], vec![n, 0.0, -n], vec![-n, n, 0.0]]).expect("3x3");
    Matrix::identity(3)
        .add(&kx.scale(s))
        .add(&kx.matmul(&kx).scale(1.0 - c))
}

/// The real `d = 3` frame for the directed `k`-cycle:
/// `v_{x,a} = R^{x + σk(a−x)} e₁` with `R` the rotation by `σθ_k` and
/// `σ = ±1 ≡ k (mod 3)`, so that `v_{x+1,a+1} = R v_{x,a}` holds around the
/// whole cycle, wrap-around arc included. For `k ≡ 0 (mod 3)` it takes `σ = 1`
/// and the wrap-around arc is not matched.
pub fn cycle_rotation_frame(k: usize) -> Result<Frame> {
    require(k, 3, false)?;
    let sigma: i64 = if k % 3 == 2 { -1 } else { 1 };
    let u = if sigma == 1 { cycle_rotation(k) } else { cycle_rotation(k).transpose() };
    let mut powers = Vec::with_capacity(3 * k);
    let mut v = vec![1.0, 0.0, 0.0];
    for _ in 0..3 * k {
        powers.push(v.clone());
        v = u.matvec(&v);
    }
    let (m, kk) = (3 * k as i64, k as i64);
    let mut vectors = Vec::with_capacity(3 * k);
    for x in 0..kk {
        for a in 0..3i64 {
            let e = (x + sigma * kk * (a - x)).rem_euclid(m) as usize;
            vectors.push(powers[e].iter().map(|&r| Complex64::new(r, 0.0)).collect());
        }
    }
    Frame::new(3, 3, vectors)
}

/// `((1 + 2c_k)/3)²`.
pub fn cycle_q1_closed_form(k: usize) -> f64 {
    ((1.0 + 2.0 * cycle_cos(k)) / 3.0).powi(2)
}

/// `η = a Σᵢ eᵢ⊗eᵢ + b Σ_{i,j} eᵢ⊗eⱼ` with `a = c/√(1+2c²)` and
/// `b = (1−c)/(3√(1+2c²))`, which has unit norm.
pub fn cycle_entangled_state(k: usize) -> Vec<Complex64> {
    let c = cycle_cos(k);
    let r = (1.0 + 2.0 * c * c).sqrt();
    let (a, b) = (c / r, (1.0 - c) / (3.0 * r));
    (0..9)
        .map(|ij| Complex64::new(if ij / 3 == ij % 3 { a + b } else { b }, 0.0))
        .collect()
}

/// Value of the rotation frame on both sides with [`cycle_entangled_state`]:
/// `(1 + 2c_k²)/3`. Errors if the explicit sum over the winning set
/// disagrees with the closed form by more than `1e-9`.
pub fn cycle_q1_bipartite_value(k: usize) -> Result<f64> {
    require(k, 4, true)?;
    let c = cycle_cos(k);
    let closed = (1.0 + 2.0 * c * c) / 3.0;
    let frame = cycle_rotation_frame(k)?;
    let (game, pi) = game_from_digraph::<f64>(&directed_cycle(k)?)?;
    let strategy = BipartiteStrategy {
        alice: frame.clone(),
        bob: frame,
        state: cycle_entangled_state(k),
    };
    let summed = q1_bipartite_value(&strategy, game.unique(), &pi)?;
    if (summed - closed).abs() > 1e-9 {
        return Err(Error::CertificateCheck { what: "explicit-state sum".into(), residual: (summed - closed).abs() });
    }
    Ok(closed)
}

#[derive(Clone, Debug, Serialize)]
pub struct CycleQcCertificate {
    pub k: usize,
    /// `t* = (1 + 2c_k)/3`.
    pub bound: f64,
    /// `α* = 2(1 − c_k)/3`.
    pub alpha: f64,
    /// `λ_j = t + α cos(2πj/3) − cos(jθ_k)`, `j ∈ ℤ_{3k}`, ascending.
    pub eigenvalues: Vec<f64>,
    /// Spectrum of the explicit `3k × 3k` matrix `X`, ascending.
    pub numerical: Vec<f64>,
    /// `|X| · λ_max(C + Z)` for the cost-free `Z = −(α/k)(I_k ⊗ A)`.
    pub cost_bound: f64,
}

/// `A = (S₃ + S₃ᵀ)/2` placed on each diagonal block, as a cost-free matrix.
fn block_shift_sum(k: usize, scale: f64) -> SymmetricMatrix<f64> {
    let mut z = SymmetricMatrix::zeros(3 * k);
    for x in 0..k {
        for a in 0..3 {
            // each unordered pair in the block gets ½
            z.add_sym(3 * x + a, 3 * x + (a + 1) % 3, 0.5 * scale);
        }
    }
    z
}

/// The eigenvalue certificate for `ω^s_qc(C_k) ≤ (1 + 2c_k)/3`.
///
/// Builds `X = t·I + α(I_k ⊗ A) − k·C` from the game's own cost matrix at
/// `α*`, `t*`, checks its spectrum against the closed form (within `1e-9`),
/// that it is nonnegative (to `−1e-10`) with minimum `0`, and that the
/// cost-matrix bound for the matching `Z` reproduces `t*`.
pub fn cycle_qc_closed_form(k: usize) -> Result<CycleQcCertificate> {
    require(k, 4, true)?;
    let c = cycle_cos(k);
    let th = cycle_angle(k);
    let alpha = 2.0 * (1.0 - c) / 3.0;
    let t = (1.0 + 2.0 * c) / 3.0;
    let mut eigenvalues: Vec<f64> = (0..3 * k)
        .map(|j| {
            let j = j as f64;
            t + alpha * (2.0 * std::f64::consts::PI * j / 3.0).cos() - (j * th).cos()
        })
        .collect();
    eigenvalues.sort_by(f64::total_cmp);

    let (game, pi) = game_from_digraph::<f64>(&directed_cycle(k)?)?;
    let cost = cost_matrix(game.unique(), &pi)?;
    let kf = k as f64;
    let x = SymmetricMatrix::identity(3 * k)
        .scale(t)
        .add(&block_shift_sum(k, alpha))
        .add(&cost.scale(-kf));
    let numerical = eig_sym(&x)?.values;

    let mismatch = numerical
        .iter()
        .zip(&eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if mismatch > 1e-9 {
        return Err(Error::CertificateCheck { what: "spectrum of X".into(), residual: mismatch });
    }
    if numerical[0] < -1e-10 || numerical[0].abs() > 1e-9 {
        return Err(Error::CertificateCheck { what: "smallest eigenvalue of X".into(), residual: numerical[0].abs() });
    }
    let z = block_shift_sum(k, -alpha / kf);
    let cost_bound = kf * eig_sym(&cost.add(&z))?.max_value();
    Ok(CycleQcCertificate {
        k,
        bound: t,
        alpha,
        eigenvalues,
        numerical,
        cost_bound,
    })
}
