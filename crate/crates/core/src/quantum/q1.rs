use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::frame::{random_mask, random_unitary, Frame};
use crate::algebra::{cdot, polar_unitary, Matrix};
use crate::error::{Error, Result};
use crate::game::{InputDensity, UniqueGame};

/// `(1/d) Σ_{(x,y,a,b) ∈ W} π(x,y) |⟨v_{x,a}|v_{y,b}⟩|²`, a lower bound on
/// the synchronous q₁ value.
pub fn q1_sync_value(frame: &Frame, g: &UniqueGame, pi: &InputDensity<f64>) -> Result<f64> {
    if !g.is_square() {
        return Err(Error::NotSquare { nx: g.nx(), ny: g.ny() });
    }
    if frame.n() != g.nx() || frame.k() != g.k() || (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch("frame, density and game disagree".into()));
    }
    let total: f64 = g
        .winning()
        .filter(|&(x, y, _, _)| pi.is_supported(x, y))
        .map(|(x, y, a, b)| pi.get(x, y) * cdot(frame.v(x, a), frame.v(y, b)).norm_sqr())
        .sum();
    Ok(total / frame.d() as f64)
}

/// Settings for [`q1_search`].
#[derive(Clone, Debug)]
pub struct Q1Options {
    pub d: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Sweeps over all questions per restart.
    pub max_sweeps: usize,
    /// Stop a restart once a sweep gains less than this.
    pub tol: f64,
    /// Extra starting frame, run as restart 0 (for example the frame of the
    /// best deterministic strategy).
    pub initial: Option<Frame>,
}

impl Default for Q1Options {
    fn default() -> Self {
        Q1Options {
            d: 2,
            restarts: 20,
            seed: 0,
            max_sweeps: 500,
            tol: 1e-12,
            initial: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Q1Report {
    pub value: f64,
    pub frame: Frame,
    /// Restart that produced the frame.
    pub restart: usize,
    /// Objective after each sweep of the winning restart (nondecreasing).
    pub trace: Vec<f64>,
}

// Σ over the terms of the objective touching question x:
// M_a = (1/d) Σ_{y ≠ x, b} (π(x,y)V(x,y,a,b) + π(y,x)V(y,x,b,a)) |v_{y,b}⟩⟨v_{y,b}|,
// and G = [M_a v_{x,a}] over the nonzero slots a.
fn sync_gradient(frame: &Frame, g: &UniqueGame, pi: &InputDensity<f64>, x: usize, mask: &[usize]) -> Matrix<Complex64> {
    let d = frame.d();
    let mut grad = Matrix::zeros(d, d);
    for (c, &a) in mask.iter().enumerate() {
        let va = frame.v(x, a);
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        for y in 0..g.nx() {
            if y == x {
                continue;
            }
            // answers of y that win against (x, a) in either order
            let terms = [
                (*pi.get(x, y), g.apply_inv(x, y, a)),
                (*pi.get(y, x), g.apply(y, x, a)),
            ];
            for (w, b) in terms {
                if w == 0.0 {
                    continue;
                }
                let vb = frame.v(y, b);
                let s = cdot(vb, va) * (w / d as f64);
                col.iter_mut().zip(vb).for_each(|(o, u)| *o += u * s);
            }
        }
        for i in 0..d {
            grad[(i, c)] = col[i];
        }
    }
    grad
}

/// One ascent step for question `x`: `U ← polar(U + s·G)`.
///
/// The objective is a convex quadratic in `U`, so it lies above its
/// linearization; the polar factor does not decrease the linearization for
/// any `s > 0`, hence the step never decreases the objective.
pub(crate) fn ascent_step(u: &Matrix<Complex64>, grad: &Matrix<Complex64>) -> Option<Matrix<Complex64>> {
    let scale = grad.as_slice().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale < 1e-300 {
        return None;
    }
    let s = 10.0 / scale;
    polar_unitary(&u.add(&grad.scale(Complex64::new(s, 0.0)))).ok()
}

// Best single move of one nonzero vector of `x` into an empty slot, if it
// improves the value by more than `1e-13`.
fn best_slot_move(frame: &mut Frame, g: &UniqueGame, pi: &InputDensity<f64>, x: usize, value: f64) -> Result<Option<f64>> {
    let mask = frame.mask(x);
    let empty: Vec<usize> = (0..frame.k()).filter(|a| !mask.contains(a)).collect();
    let mut best: Option<(f64, usize, usize)> = None;
    for &from in &mask {
        for &to in &empty {
            frame.move_slot(x, from, to);
            let v = q1_sync_value(frame, g, pi)?;
            frame.move_slot(x, to, from);
            if v > best.map_or(value + 1e-13, |b| b.0) {
                best = Some((v, from, to));
            }
        }
    }
    Ok(best.map(|(v, from, to)| {
        frame.move_slot(x, from, to);
        v
    }))
}

fn run_restart(
    g: &UniqueGame,
    pi: &InputDensity<f64>,
    mut frame: Frame,
    opts: &Q1Options,
) -> Result<(f64, Frame, Vec<f64>)> {
    let mut value = q1_sync_value(&frame, g, pi)?;
    let mut trace = vec![value];
    for _ in 0..opts.max_sweeps {
        for x in 0..frame.n() {
            let mask = frame.mask(x);
            let grad = sync_gradient(&frame, g, pi, x, &mask);
            let u = frame.unitary(x);
            if let Some(next) = ascent_step(&u, &grad) {
                let before = frame.clone();
                frame.set_unitary(x, &mask, &next);
                let v = q1_sync_value(&frame, g, pi)?;
                // guard against rounding pushing the value down
                if v < value - 1e-13 {
                    frame = before;
                } else {
                    value = v;
                }
            }
            if let Some(v) = best_slot_move(&mut frame, g, pi, x, value)? {
                value = v;
            }
        }
        let gain = value - trace.last().copied().unwrap_or(value);
        trace.push(value);
        if gain < opts.tol {
            break;
        }
    }
    Ok((value, frame, trace))
}

/// Local search for the synchronous q₁ value at fixed frame dimension `d`.
///
/// Each restart draws a random slot mask and random unitaries per question,
/// then sweeps the questions; each visit takes one [`ascent_step`] and then
/// the best improving move of a vector into an empty slot. Restart `r` uses the
/// ChaCha stream `r` of the master seed, and restarts are combined by
/// largest value and then smallest index, so the result does not depend on
/// scheduling. A lower bound only.
pub fn q1_search(g: &UniqueGame, pi: &InputDensity<f64>, opts: &Q1Options) -> Result<Q1Report> {
    if !g.is_square() {
        return Err(Error::NotSquare { nx: g.nx(), ny: g.ny() });
    }
    let (n, k, d) = (g.nx(), g.k(), opts.d);
    if d == 0 || d > k {
        return Err(Error::OutOfRange {
            what: "frame dimension d",
            value: d,
            allowed: format!("1..={k}"),
        });
    }
    let offset = usize::from(opts.initial.is_some());
    let results: Vec<Result<(f64, Frame, Vec<f64>)>> = (0..opts.restarts + offset)
        .into_par_iter()
        .map(|r| {
            let start = if r < offset {
                opts.initial.clone().expect("initial frame present")
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r as u64);
                let masks: Vec<Vec<usize>> = (0..n).map(|_| random_mask(&mut rng, k, d)).collect();
                let us: Vec<Matrix<Complex64>> = (0..n).map(|_| random_unitary(&mut rng, d)).collect();
                Frame::from_unitaries(k, &masks, &us)?
            };
            run_restart(g, pi, start, opts)
        })
        .collect();
    let mut best: Option<Q1Report> = None;
    for (r, res) in results.into_iter().enumerate() {
        let (value, frame, trace) = res?;
        if best.as_ref().map_or(true, |b| value > b.value) {
            best = Some(Q1Report { value, frame, restart: r, trace });
        }
    }
    best.ok_or_else(|| Error::OutOfRange {
        what: "restart count",
        value: 0,
        allowed: ">= 1".into(),
    })
}
