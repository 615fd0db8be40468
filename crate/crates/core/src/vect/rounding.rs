use serde::{Deserialize, Serialize};

use super::vectors::VectorFamily;
use crate::error::{Error, Result};
use crate::game::{DeterministicStrategy, InputDensity, UniqueGame};

/// `π₀/(7k²)`, or `π₀/(9k)` when every vector has squared norm `1/k`.
pub fn rounding_threshold(pi0: f64, k: usize, uniform_norm: bool) -> Result<f64> {
    if !(pi0 > 0.0) {
        return Err(Error::ThresholdUndefined(format!("π₀ = {pi0} is not positive")));
    }
    if k < 2 {
        return Err(Error::ThresholdUndefined(format!("k = {k} < 2")));
    }
    let k = k as f64;
    Ok(if uniform_norm {
        pi0 / (9.0 * k)
    } else {
        pi0 / (7.0 * k * k)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundingStatus {
    /// The defect is below the threshold, so the rounded strategy is perfect.
    GuaranteedPerfect,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundingOutcome {
    pub strategy: DeterministicStrategy,
    pub status: RoundingStatus,
    /// `(x₀, y₀, a₀, b₀)`.
    pub anchor: [usize; 4],
    /// `E(p)` of the input vectors.
    pub vect_value: f64,
    pub pi0: f64,
    pub threshold: Option<f64>,
}

/// Rounds a vect-density to a deterministic strategy.
///
/// Picks the winning tuple `(x₀,y₀,a₀,b₀)` of largest `p(a,b|x,y)`, first in
/// lexicographic order on ties, and sets `h_A(x) = f(x,y₀)(b₀)`,
/// `h_B(y) = f(x₀,y)⁻¹(a₀)`.
///
/// Only pairs with `π(x,y) > 0` carry information. When `π` has zeros the
/// questions are split into connected components of the support (Alice's
/// and Bob's questions as the two sides); each component gets its own anchor
/// and the answers are propagated outward from it along supported pairs.
/// With full support this is exactly the rule above. Questions outside the
/// support answer 0.
pub fn round_to_deterministic(
    g: &UniqueGame,
    pi: &InputDensity<f64>,
    family: &VectorFamily,
) -> Result<RoundingOutcome> {
    if (family.nx, family.ny, family.k) != (g.nx(), g.ny(), g.k())
        || (pi.nx(), pi.ny()) != (g.nx(), g.ny())
    {
        return Err(Error::ShapeMismatch("vectors, density and game disagree".into()));
    }
    let (nx, ny) = (g.nx(), g.ny());
    let value: f64 = g
        .winning()
        .map(|(x, y, a, b)| pi.get(x, y) * family.density(x, y, a, b))
        .sum();

    // component labels: Alice's x is node x, Bob's y is node nx + y
    let mut comp = vec![usize::MAX; nx + ny];
    let mut count = 0;
    for start in 0..nx + ny {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let next: Vec<usize> = if v < nx {
                (0..ny).filter(|&y| pi.is_supported(v, y)).map(|y| nx + y).collect()
            } else {
                (0..nx).filter(|&x| pi.is_supported(x, v - nx)).collect()
            };
            for u in next {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }

    let mut h_a: Vec<Option<usize>> = vec![None; nx];
    let mut h_b: Vec<Option<usize>> = vec![None; ny];
    let mut anchor = None;
    for c in 0..count {
        let mut best: Option<([usize; 4], f64)> = None;
        for (x, y, a, b) in g.winning() {
            if comp[x] != c || !pi.is_supported(x, y) {
                continue;
            }
            let p = family.density(x, y, a, b);
            if best.map_or(true, |(_, q)| p > q) {
                best = Some(([x, y, a, b], p));
            }
        }
        let Some(([x0, y0, a0, b0], _)) = best else {
            continue;
        };
        anchor.get_or_insert([x0, y0, a0, b0]);
        h_a[x0] = Some(a0);
        h_b[y0] = Some(b0);
        // Alice's questions next to y₀ and Bob's next to x₀ come first, as in
        // the full-support rule; the rest follows in breadth-first order.
        let mut queue = std::collections::VecDeque::from([nx + y0, x0]);
        while let Some(v) = queue.pop_front() {
            if v >= nx {
                let y = v - nx;
                let b = h_b[y].unwrap();
                for x in 0..nx {
                    if h_a[x].is_none() && pi.is_supported(x, y) {
                        h_a[x] = Some(g.apply(x, y, b));
                        queue.push_back(x);
                    }
                }
            } else {
                let a = h_a[v].unwrap();
                for y in 0..ny {
                    if h_b[y].is_none() && pi.is_supported(v, y) {
                        h_b[y] = Some(g.apply_inv(v, y, a));
                        queue.push_back(nx + y);
                    }
                }
            }
        }
    }
    let anchor = anchor.ok_or_else(|| Error::InvalidDensity("density has no support".into()))?;

    let pi0 = pi.min();
    let threshold = rounding_threshold(pi0, g.k(), family.has_uniform_norms(1e-9)).ok();
    let status = match threshold {
        Some(t) if 1.0 - value <= t => RoundingStatus::GuaranteedPerfect,
        _ => RoundingStatus::Heuristic,
    };
    Ok(RoundingOutcome {
        strategy: DeterministicStrategy::bipartite(
            h_a.into_iter().map(|a| a.unwrap_or(0)).collect(),
            h_b.into_iter().map(|b| b.unwrap_or(0)).collect(),
        ),
        status,
        anchor,
        vect_value: value,
        pi0,
        threshold,
    })
}
