use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::frame::{random_mask, random_unitary, Frame};
use super::q1::{ascent_step, Q1Options};
use crate::algebra::{eig_herm, HermitianMatrix, Matrix};
use crate::error::{Error, Result};
use crate::game::{InputDensity, UniqueGame};

/// A bipartite rank-one strategy: Alice and Bob frames of equal dimension `d`
/// and a unit state `η ∈ ℂᵈ ⊗ ℂᵈ` (index `i·d + j`).
#[derive(Clone, Debug)]
pub struct BipartiteStrategy {
    pub alice: Frame,
    pub bob: Frame,
    pub state: Vec<Complex64>,
}

// ⟨η|v ⊗ w⟩
fn amplitude(state: &[Complex64], v: &[Complex64], w: &[Complex64]) -> Complex64 {
    let d = v.len();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            s += state[i * d + j].conj() * v[i] * w[j];
        }
    }
    s
}

fn check_shapes(s: &BipartiteStrategy, g: &UniqueGame, pi: &InputDensity<f64>) -> Result<()> {
    let d = s.alice.d();
    if s.bob.d() != d || s.state.len() != d * d {
        return Err(Error::ShapeMismatch("frames and state dimensions disagree".into()));
    }
    if s.alice.n() != g.nx() || s.bob.n() != g.ny() || s.alice.k() != g.k() || s.bob.k() != g.k() {
        return Err(Error::ShapeMismatch("frames do not match the game".into()));
    }
    if (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch("density does not match the game".into()));
    }
    let norm: f64 = s.state.iter().map(|c| c.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidFrame(format!("state has squared norm {norm}, not 1")));
    }
    Ok(())
}

/// `Σ π(x,y) Σ_{(a,b) winning} |⟨η|v_{x,a} ⊗ w_{y,b}⟩|²`, the value of a
/// bipartite strategy with rank-one projective measurements.
pub fn q1_bipartite_value(s: &BipartiteStrategy, g: &UniqueGame, pi: &InputDensity<f64>) -> Result<f64> {
    check_shapes(s, g, pi)?;
    Ok(g.winning()
        .filter(|&(x, y, _, _)| pi.is_supported(x, y))
        .map(|(x, y, a, b)| pi.get(x, y) * amplitude(&s.state, s.alice.v(x, a), s.bob.v(y, b)).norm_sqr())
        .sum())
}

#[derive(Clone, Debug)]
pub struct BipartiteReport {
    pub value: f64,
    pub strategy: BipartiteStrategy,
    pub restart: usize,
    pub trace: Vec<f64>,
}

// Best state for fixed frames: top eigenvector of Σ π |v⊗w⟩⟨v⊗w|.
fn best_state(alice: &Frame, bob: &Frame, g: &UniqueGame, pi: &InputDensity<f64>) -> Result<Vec<Complex64>> {
    let d = alice.d();
    let mut h = Matrix::zeros(d * d, d * d);
    for (x, y, a, b) in g.winning() {
        let w = *pi.get(x, y);
        if w == 0.0 {
            continue;
        }
        let (v, u) = (alice.v(x, a), bob.v(y, b));
        let prod: Vec<Complex64> = (0..d * d).map(|ij| v[ij / d] * u[ij % d]).collect();
        for p in 0..d * d {
            for q in 0..d * d {
                h[(p, q)] += prod[p] * prod[q].conj() * w;
            }
        }
    }
    Ok(eig_herm(&HermitianMatrix::hermitize(&h))?.top_vector())
}

// With η fixed, the amplitude is ⟨c̄|v⟩ for c_i = Σ_j conj(η_ij) w_j, so the
// terms touching Alice's question x form Σ_a v_aᴴ M_a v_a with
// M_a = Σ π c̄ c̄ᴴ. Bob's side is the mirror image.
fn side_gradient(
    s: &BipartiteStrategy,
    g: &UniqueGame,
    pi: &InputDensity<f64>,
    alice_side: bool,
    q: usize,
    mask: &[usize],
) -> Matrix<Complex64> {
    let d = s.alice.d();
    let frame = if alice_side { &s.alice } else { &s.bob };
    let others = if alice_side { g.ny() } else { g.nx() };
    let mut grad = Matrix::zeros(d, d);
    for (col, &a) in mask.iter().enumerate() {
        let va = frame.v(q, a);
        let mut acc = vec![Complex64::new(0.0, 0.0); d];
        for o in 0..others {
            let (x, y) = if alice_side { (q, o) } else { (o, q) };
            let w = *pi.get(x, y);
            if w == 0.0 {
                continue;
            }
            let pv = if alice_side {
                s.bob.v(y, g.apply_inv(x, y, a))
            } else {
                s.alice.v(x, g.apply(x, y, a))
            };
            // conj(c)
            let cbar: Vec<Complex64> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            let e = if alice_side { s.state[i * d + j] } else { s.state[j * d + i] };
                            e * pv[j].conj()
                        })
                        .sum()
                })
                .collect();
            let proj: Complex64 = cbar.iter().zip(va).map(|(c, v)| c.conj() * v).sum::<Complex64>() * w;
            acc.iter_mut().zip(&cbar).for_each(|(o, c)| *o += c * proj);
        }
        for i in 0..d {
            grad[(i, col)] = acc[i];
        }
    }
    grad
}

fn run_restart(
    g: &UniqueGame,
    pi: &InputDensity<f64>,
    mut s: BipartiteStrategy,
    opts: &Q1Options,
) -> Result<(f64, BipartiteStrategy, Vec<f64>)> {
    s.state = best_state(&s.alice, &s.bob, g, pi)?;
    let mut value = q1_bipartite_value(&s, g, pi)?;
    let mut trace = vec![value];
    let alice_masks: Vec<Vec<usize>> = (0..g.nx()).map(|x| s.alice.mask(x)).collect();
    let bob_masks: Vec<Vec<usize>> = (0..g.ny()).map(|y| s.bob.mask(y)).collect();
    for _ in 0..opts.max_sweeps {
        for alice_side in [true, false] {
            let masks = if alice_side { &alice_masks } else { &bob_masks };
            for (q, mask) in masks.iter().enumerate() {
                let grad = side_gradient(&s, g, pi, alice_side, q, mask);
                let frame = if alice_side { &mut s.alice } else { &mut s.bob };
                let u = frame.unitary(q);
                if let Some(next) = ascent_step(&u, &grad) {
                    let before = frame.clone();
                    frame.set_unitary(q, mask, &next);
                    let v = q1_bipartite_value(&s, g, pi)?;
                    if v < value - 1e-13 {
                        if alice_side { s.alice = before } else { s.bob = before }
                    } else {
                        value = v;
                    }
                }
            }
        }
        let state = best_state(&s.alice, &s.bob, g, pi)?;
        let candidate = BipartiteStrategy { state, ..s.clone() };
        let v = q1_bipartite_value(&candidate, g, pi)?;
        if v >= value {
            s = candidate;
            value = v;
        }
        let gain = value - trace.last().copied().unwrap_or(value);
        trace.push(value);
        if gain < opts.tol {
            break;
        }
    }
    Ok((value, s, trace))
}

/// Bipartite analogue of [`super::q1_search`]: alternates an exact state
/// update (top eigenvector) with polar ascent steps on each question's
/// measurement, for Alice then Bob. Nondecreasing within a restart; restarts
/// are seeded and combined exactly as in the synchronous search.
pub fn q1_bipartite_search(g: &UniqueGame, pi: &InputDensity<f64>, opts: &Q1Options) -> Result<BipartiteReport> {
    let (k, d) = (g.k(), opts.d);
    if d == 0 || d > k {
        return Err(Error::OutOfRange {
            what: "frame dimension d",
            value: d,
            allowed: format!("1..={k}"),
        });
    }
    let results: Vec<Result<(f64, BipartiteStrategy, Vec<f64>)>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let mut frame = |n: usize| -> Result<Frame> {
                let masks: Vec<Vec<usize>> = (0..n).map(|_| random_mask(&mut rng, k, d)).collect();
                let us: Vec<Matrix<Complex64>> = (0..n).map(|_| random_unitary(&mut rng, d)).collect();
                Frame::from_unitaries(k, &masks, &us)
            };
            let alice = frame(g.nx())?;
            let bob = frame(g.ny())?;
            let mut state = vec![Complex64::new(0.0, 0.0); d * d];
            state[0] = Complex64::new(1.0, 0.0);
            run_restart(g, pi, BipartiteStrategy { alice, bob, state }, opts)
        })
        .collect();
    let mut best: Option<BipartiteReport> = None;
    for (r, res) in results.into_iter().enumerate() {
        let (value, strategy, trace) = res?;
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(BipartiteReport { value, strategy, restart: r, trace });
        }
    }
    best.ok_or_else(|| Error::OutOfRange {
        what: "restart count",
        value: 0,
        allowed: ">= 1".into(),
    })
}
