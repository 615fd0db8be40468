use super::{Correlation, DeterministicStrategy, GroupGame, InputDensity, UniqueGame};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_density<S: Scalar>(g: &UniqueGame, pi: &InputDensity<S>) -> Result<()> {
    if (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch(format!(
            "density is {}x{}, game has {}x{} questions",
            pi.nx(),
            pi.ny(),
            g.nx(),
            g.ny()
        )));
    }
    Ok(())
}

/// `E(p) = Σ_{(x,y,a,b) ∈ W} π(x,y) p(a,b|x,y)`.
pub fn expected_value<S: Scalar>(
    g: &UniqueGame,
    pi: &InputDensity<S>,
    p: &Correlation<S>,
) -> Result<S> {
    check_density(g, pi)?;
    if (p.nx(), p.ny(), p.k()) != (g.nx(), g.ny(), g.k()) {
        return Err(Error::ShapeMismatch("correlation shape differs from game".into()));
    }
    let mut total = S::zero();
    for x in 0..g.nx() {
        for y in 0..g.ny() {
            let w = pi.get(x, y);
            if *w == S::zero() {
                continue;
            }
            let mut block = S::zero();
            for b in 0..g.k() {
                block = block + p.get(x, y, g.apply(x, y, b), b).clone();
            }
            total = total + w.clone() * block;
        }
    }
    Ok(total)
}

/// Winning probability of a deterministic strategy, `Σ π(x,y) V(x,y,h_A(x),h_B(y))`.
pub fn strategy_value<S: Scalar>(
    g: &UniqueGame,
    pi: &InputDensity<S>,
    s: &DeterministicStrategy,
) -> Result<S> {
    check_density(g, pi)?;
    s.validate(g.k())?;
    if s.h_a.len() != g.nx() || s.h_b.len() != g.ny() {
        return Err(Error::ShapeMismatch("strategy length differs from input sets".into()));
    }
    let mut total = S::zero();
    for x in 0..g.nx() {
        for y in 0..g.ny() {
            if g.verify(x, y, s.h_a[x], s.h_b[y]) {
                total = total + pi.get(x, y).clone();
            }
        }
    }
    Ok(total)
}

/// The perfect non-signalling density: `1/k` on every winning tuple.
pub fn perfect_ns_correlation<S: Scalar>(g: &UniqueGame) -> Correlation<S> {
    let w = S::from_ratio(1, g.k() as i64);
    Correlation::from_fn(g.nx(), g.ny(), g.k(), |x, y, a, b| {
        if g.verify(x, y, a, b) {
            w.clone()
        } else {
            S::zero()
        }
    })
    .expect("rows of a permutation density sum to one")
}

/// Right-translation average `p̂(a,b|x,y) = (1/|Ω|) Σ_c p(ac, bc|x,y)`.
pub fn symmetrize<S: Scalar>(g: &GroupGame, p: &Correlation<S>) -> Result<Correlation<S>> {
    let grp = g.group();
    let m = grp.order();
    if (p.nx(), p.ny(), p.k()) != (g.nx(), g.ny(), m) {
        return Err(Error::ShapeMismatch("correlation shape differs from group game".into()));
    }
    let w = S::from_ratio(1, m as i64);
    Correlation::from_fn(p.nx(), p.ny(), m, |x, y, a, b| {
        let total = (0..m).fold(S::zero(), |s, c| {
            s + p.get(x, y, grp.mul(a, c), grp.mul(b, c)).clone()
        });
        total * w.clone()
    })
}
