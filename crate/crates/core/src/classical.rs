//! Exact deterministic and synchronous deterministic values by exhaustive search.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{DeterministicStrategy, GroupGame, InputDensity, UniqueGame};
use crate::scalar::Scalar;

/// Default cap on the number of strategies a search may enumerate.
pub const SEARCH_GUARD: f64 = 1e7;

/// Outcome of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport<S> {
    pub value: S,
    pub best: DeterministicStrategy,
    /// Strategies whose value was fully evaluated.
    pub explored: u64,
}

fn check_shape<S: Scalar>(g: &UniqueGame, pi: &InputDensity<S>) -> Result<()> {
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

fn check_guard(k: usize, n: usize, guard: f64) -> Result<()> {
    let size = (k as f64).powi(n as i32);
    if size > guard {
        return Err(Error::SearchTooLarge { size, guard });
    }
    Ok(())
}

fn decode(mut code: u64, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = (code % k as u64) as usize;
        code /= k as u64;
    }
}

// Max value, then smallest index.
fn better<S: Scalar>(a: (S, u64), b: (S, u64)) -> (S, u64) {
    if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
        b
    } else {
        a
    }
}

/// `ω_det(G, π)` with the default guard.
pub fn det_value<S: Scalar>(g: &UniqueGame, pi: &InputDensity<S>) -> Result<SearchReport<S>> {
    det_value_with_guard(g, pi, SEARCH_GUARD)
}

/// `ω_det(G, π)`: enumerates `h_B` over `k^ny` functions and picks `h_A`
/// pointwise, lowest answer on ties. Among optimal strategies the one with
/// lexicographically smallest `h_B` is reported.
pub fn det_value_with_guard<S: Scalar>(
    g: &UniqueGame,
    pi: &InputDensity<S>,
    guard: f64,
) -> Result<SearchReport<S>> {
    check_shape(g, pi)?;
    let (nx, ny, k) = (g.nx(), g.ny(), g.k());
    check_guard(k, ny, guard)?;
    let total = (k as u64).pow(ny as u32);

    let best_for = |h_b: &[usize], h_a: &mut [usize]| -> S {
        let mut value = S::zero();
        let mut scores = vec![S::zero(); k];
        for x in 0..nx {
            scores.iter_mut().for_each(|s| *s = S::zero());
            for (y, &b) in h_b.iter().enumerate() {
                let w = pi.get(x, y);
                if *w != S::zero() {
                    let a = g.apply(x, y, b);
                    scores[a] = scores[a].clone() + w.clone();
                }
            }
            let mut arg = 0;
            for a in 1..k {
                if scores[a] > scores[arg] {
                    arg = a;
                }
            }
            h_a[x] = arg;
            value = value + scores[arg].clone();
        }
        value
    };

    let (value, code) = (0..total)
        .into_par_iter()
        .fold(
            || (None::<(S, u64)>, vec![0; ny], vec![0; nx]),
            |(acc, mut h_b, mut h_a), code| {
                decode(code, k, &mut h_b);
                let v = best_for(&h_b, &mut h_a);
                let acc = Some(match acc {
                    None => (v, code),
                    Some(a) => better(a, (v, code)),
                });
                (acc, h_b, h_a)
            },
        )
        .filter_map(|(acc, _, _)| acc)
        .reduce_with(better)
        .expect("at least one strategy");

    let mut h_b = vec![0; ny];
    let mut h_a = vec![0; nx];
    decode(code, k, &mut h_b);
    best_for(&h_b, &mut h_a);
    Ok(SearchReport {
        value,
        best: DeterministicStrategy::bipartite(h_a, h_b),
        explored: total,
    })
}

/// `ω^s_loc(G, π)` with the default guard.
pub fn sync_det_value<S: Scalar>(g: &UniqueGame, pi: &InputDensity<S>) -> Result<SearchReport<S>> {
    sync_det_value_with_guard(g, pi, SEARCH_GUARD)
}

struct SyncSearch<'a, S> {
    g: &'a UniqueGame,
    pi: &'a InputDensity<S>,
    // mass of pairs whose larger index is >= d
    remaining: Vec<S>,
}

struct SyncState<S> {
    h: Vec<usize>,
    best: Option<(S, Vec<usize>)>,
    explored: u64,
}

impl<S: Scalar> SyncSearch<'_, S> {
    fn gain(&self, h: &[usize], x: usize) -> S {
        let mut s = S::zero();
        for y in 0..=x {
            if self.g.verify(x, y, h[x], h[y]) {
                s = s + self.pi.get(x, y).clone();
            }
            if y != x && self.g.verify(y, x, h[y], h[x]) {
                s = s + self.pi.get(y, x).clone();
            }
        }
        s
    }

    fn run(&self, st: &mut SyncState<S>, depth: usize, score: S) {
        let n = self.g.nx();
        if depth == n {
            st.explored += 1;
            // strict improvement keeps the lexicographically first optimum
            if st.best.as_ref().map_or(true, |(b, _)| score > *b) {
                st.best = Some((score, st.h.clone()));
            }
            return;
        }
        if let Some((b, _)) = &st.best {
            if score.clone() + self.remaining[depth].clone() <= *b {
                return;
            }
        }
        for a in 0..self.g.k() {
            st.h[depth] = a;
            let s = score.clone() + self.gain(&st.h, depth);
            self.run(st, depth + 1, s);
        }
    }
}

/// `ω^s_loc(G, π)`: depth-first search over `h: X → A` with the unassigned
/// mass as pruning bound. Subtrees below a two-vertex prefix run in parallel;
/// the lexicographically smallest optimum is reported.
pub fn sync_det_value_with_guard<S: Scalar>(
    g: &UniqueGame,
    pi: &InputDensity<S>,
    guard: f64,
) -> Result<SearchReport<S>> {
    check_shape(g, pi)?;
    if !g.is_square() {
        return Err(Error::NotSquare {
            nx: g.nx(),
            ny: g.ny(),
        });
    }
    let (n, k) = (g.nx(), g.k());
    check_guard(k, n, guard)?;

    let mut remaining = vec![S::zero(); n + 1];
    for d in (0..n).rev() {
        let mut m = remaining[d + 1].clone();
        for y in 0..=d {
            m = m + pi.get(d, y).clone();
            if y != d {
                m = m + pi.get(y, d).clone();
            }
        }
        remaining[d] = m;
    }
    let search = SyncSearch { g, pi, remaining };

    let depth = n.min(2);
    let prefixes = (k as u64).pow(depth as u32);
    let results: Vec<(Option<(S, Vec<usize>)>, u64)> = (0..prefixes)
        .into_par_iter()
        .map(|code| {
            let mut st = SyncState {
                h: vec![0; n],
                best: None,
                explored: 0,
            };
            decode(code, k, &mut st.h[..depth]);
            let mut score = S::zero();
            for x in 0..depth {
                score = score + search.gain(&st.h, x);
            }
            search.run(&mut st, depth, score);
            (st.best, st.explored)
        })
        .collect();

    let explored = results.iter().map(|r| r.1).sum();
    let mut best: Option<(S, Vec<usize>)> = None;
    for (candidate, _) in results.into_iter() {
        if let Some((v, h)) = candidate {
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, h));
            }
        }
    }
    let (value, h) = best.expect("every subtree reaches a leaf before pruning starts");
    Ok(SearchReport {
        value,
        best: DeterministicStrategy::synchronous(h),
        explored,
    })
}

/// A perfect synchronous deterministic strategy `w: X → Ω` for a synchronous
/// group game, if one exists.
///
/// `w(x)·w(y)⁻¹ = f(x,y)` is only required on pairs in the support of `π`.
/// Each connected component of the support is labelled from its smallest
/// vertex, pinned to the identity, and every supported pair is then checked.
/// With full support this is the candidate `w(x) = f(x, 0)`.
pub fn perfect_sync_group_strategy<S: Scalar>(
    g: &GroupGame,
    pi: &InputDensity<S>,
) -> Result<Option<Vec<usize>>> {
    if !g.is_synchronous() {
        return Err(Error::NotSynchronous);
    }
    check_shape(g.unique(), pi)?;
    let n = g.nx();
    let grp = g.group();
    let supported = |x: usize, y: usize| pi.is_supported(x, y);
    let mut w: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if w[root].is_some() {
            continue;
        }
        w[root] = Some(grp.identity());
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let wx = w[x].unwrap();
            for y in 0..n {
                if w[y].is_some() {
                    continue;
                }
                let next = if supported(x, y) {
                    // w(y) = f(x,y)⁻¹ w(x)
                    grp.mul(grp.inv(g.f(x, y)), wx)
                } else if supported(y, x) {
                    grp.mul(g.f(y, x), wx)
                } else {
                    continue;
                };
                w[y] = Some(next);
                queue.push_back(y);
            }
        }
    }
    let w: Vec<usize> = w.into_iter().map(|v| v.unwrap()).collect();
    for x in 0..n {
        for y in 0..n {
            if supported(x, y) && grp.mul(w[x], grp.inv(w[y])) != g.f(x, y) {
                return Ok(None);
            }
        }
    }
    Ok(Some(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group, symmetric_group};
    use crate::digraph::{directed_cycle, game_from_digraph};
    use crate::game::{make_chsh, make_commutator_game, strategy_value};
    use num_rational::Rational64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Rational64;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    // Oracle: enumerate every (h_A, h_B) pair.
    fn brute_det(g: &UniqueGame, pi: &InputDensity<Q>) -> Q {
        let (nx, ny, k) = (g.nx(), g.ny(), g.k());
        let mut best = Q::from_integer(0);
        let mut h_a = vec![0; nx];
        let mut h_b = vec![0; ny];
        for ca in 0..(k as u64).pow(nx as u32) {
            decode(ca, k, &mut h_a);
            for cb in 0..(k as u64).pow(ny as u32) {
                decode(cb, k, &mut h_b);
                let s = DeterministicStrategy::bipartite(h_a.clone(), h_b.clone());
                best = best.max(strategy_value(g, pi, &s).unwrap());
            }
        }
        best
    }

    // Oracle: enumerate every synchronous h.
    fn brute_sync(g: &UniqueGame, pi: &InputDensity<Q>) -> (Q, Vec<usize>) {
        let (n, k) = (g.nx(), g.k());
        let mut best = (Q::from_integer(-1), vec![]);
        let mut h = vec![0; n];
        for c in 0..(k as u64).pow(n as u32) {
            decode(c, k, &mut h);
            let v = strategy_value(g, pi, &DeterministicStrategy::synchronous(h.clone())).unwrap();
            if v > best.0 {
                best = (v, h.clone());
            }
        }
        best
    }

    fn random_game(rng: &mut ChaCha8Rng, nx: usize, ny: usize, k: usize, sync: bool) -> UniqueGame {
        let perms: Vec<Vec<Vec<usize>>> = (0..nx)
            .map(|x| {
                (0..ny)
                    .map(|y| {
                        let mut p: Vec<usize> = (0..k).collect();
                        if !(sync && x == y) {
                            for i in (1..k).rev() {
                                p.swap(i, rng.gen_range(0..=i));
                            }
                        }
                        p
                    })
                    .collect()
            })
            .collect();
        UniqueGame::new(nx, ny, k, &perms).unwrap()
    }

    fn random_density(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> InputDensity<Q> {
        let w: Vec<i64> = (0..nx * ny).map(|_| rng.gen_range(0..4)).collect();
        let total: i64 = w.iter().sum::<i64>().max(1);
        if w.iter().all(|&v| v == 0) {
            return InputDensity::uniform(nx, ny);
        }
        InputDensity::new(nx, ny, w.iter().map(|&v| q(v, total)).collect()).unwrap()
    }

    #[test]
    fn chsh3_values() {
        let (g, pi) = make_chsh::<Q>(3).unwrap();
        let det = det_value(g.unique(), &pi).unwrap();
        assert_eq!(det.value, q(2, 3));
        assert_eq!(strategy_value(g.unique(), &pi, &det.best).unwrap(), det.value);
        let sync = sync_det_value(g.unique(), &pi).unwrap();
        assert_eq!(sync.value, q(5, 9));
        assert_eq!(sync.best.h_a, vec![0, 0, 0]);
        for c in 0..3 {
            let constant = DeterministicStrategy::synchronous(vec![c; 3]);
            assert_eq!(strategy_value(g.unique(), &pi, &constant).unwrap(), q(5, 9));
        }
    }

    #[test]
    fn cycle_values() {
        for k in [4usize, 5, 7, 8] {
            let (g, pi) = game_from_digraph::<Q>(&directed_cycle(k).unwrap()).unwrap();
            let det = det_value(g.unique(), &pi).unwrap().value;
            let sync = sync_det_value(g.unique(), &pi).unwrap().value;
            let kk = k as i64;
            assert_eq!(sync, q(kk - 1, kk), "sync k={k}");
            let expected = if k % 2 == 0 { q(kk - 1, kk) } else { q(2 * kk - 1, 2 * kk) };
            assert_eq!(det, expected, "det k={k}");
        }
    }

    #[test]
    fn commutator_s3_value() {
        let s3 = symmetric_group(3).unwrap();
        let (g, pi) = make_commutator_game::<Q>(&s3, None).unwrap();
        let r = sync_det_value(g.unique(), &pi).unwrap();
        assert_eq!(r.value, q(24, 36));
        assert_eq!(strategy_value(g.unique(), &pi, &r.best).unwrap(), r.value);
        assert_eq!(perfect_sync_group_strategy(&g, &pi).unwrap(), None);
    }

    #[test]
    fn float_and_rational_searches_agree() {
        let (g, pi) = make_chsh::<f64>(3).unwrap();
        assert!((det_value(g.unique(), &pi).unwrap().value - 2.0 / 3.0).abs() < 1e-12);
        assert!((sync_det_value(g.unique(), &pi).unwrap().value - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn guards_and_shape_errors() {
        let (g, pi) = make_chsh::<Q>(3).unwrap();
        assert!(matches!(
            det_value_with_guard(g.unique(), &pi, 10.0),
            Err(Error::SearchTooLarge { .. })
        ));
        let rect = UniqueGame::from_fn(2, 3, 2, |_, _, b| b).unwrap();
        let pi_rect = InputDensity::<Q>::uniform(2, 3);
        assert!(det_value(&rect, &pi_rect).is_ok());
        assert!(matches!(sync_det_value(&rect, &pi_rect), Err(Error::NotSquare { .. })));
        assert!(perfect_sync_group_strategy(&g, &pi).is_err());
    }

    #[test]
    fn abelian_commutator_game_has_identity_strategy() {
        let z5 = cyclic_group(5).unwrap();
        let (g, pi) = make_commutator_game::<Q>(&z5, None).unwrap();
        assert_eq!(perfect_sync_group_strategy(&g, &pi).unwrap(), Some(vec![0; 5]));
    }

    #[test]
    fn perfect_group_strategy_on_cycles() {
        for k in 3..=9 {
            let dg = directed_cycle(k).unwrap();
            let (g, pi) = game_from_digraph::<Q>(&dg).unwrap();
            let w = perfect_sync_group_strategy(&g, &pi).unwrap();
            assert_eq!(w.is_some(), crate::digraph::has_perfect_strategy(&dg).is_some());
            if let Some(w) = w {
                let s = DeterministicStrategy::synchronous(w);
                assert_eq!(strategy_value(g.unique(), &pi, &s).unwrap(), Q::from_integer(1));
            }
        }
    }

    #[test]
    fn even_cycles_have_equal_values() {
        for k in [4usize, 8] {
            let (g, pi) = game_from_digraph::<Q>(&directed_cycle(k).unwrap()).unwrap();
            assert_eq!(
                det_value(g.unique(), &pi).unwrap().value,
                sync_det_value(g.unique(), &pi).unwrap().value
            );
        }
    }

    #[test]
    fn searches_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let k = rng.gen_range(2..=3);
            let sync = rng.gen_bool(0.5);
            let g = random_game(&mut rng, n, n, k, sync);
            let pi = random_density(&mut rng, n, n);
            let det = det_value(&g, &pi).unwrap();
            assert_eq!(det.value, brute_det(&g, &pi));
            assert_eq!(strategy_value(&g, &pi, &det.best).unwrap(), det.value);
            let sync = sync_det_value(&g, &pi).unwrap();
            let (v, h) = brute_sync(&g, &pi);
            assert_eq!(sync.value, v);
            assert_eq!(sync.best.h_a, h);
            assert!(sync.value <= det.value);
        }
    }

    #[test]
    fn perfect_group_strategy_matches_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s3 = symmetric_group(3).unwrap();
        for trial in 0..40 {
            let n = rng.gen_range(2..=4);
            // planted strategy half of the time
            let w: Vec<usize> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let planted = trial % 2 == 0;
            let g = GroupGame::from_fn(s3.clone(), n, n, |x, y| {
                if x == y {
                    s3.identity()
                } else if planted {
                    s3.mul(w[x], s3.inv(w[y]))
                } else {
                    (x * 7 + y * 3 + trial) % 6
                }
            })
            .unwrap();
            let pi = InputDensity::<Q>::uniform(n, n);
            let perfect = perfect_sync_group_strategy(&g, &pi).unwrap();
            let sync = sync_det_value(g.unique(), &pi).unwrap();
            assert_eq!(perfect.is_some(), sync.value == Q::from_integer(1));
            if planted {
                assert!(perfect.is_some());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn values_invariant_under_right_translation(seed in any::<u64>(), c in 0usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s3 = symmetric_group(3).unwrap();
            let n = 3;
            let table: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..6)).collect()).collect();
            let g = GroupGame::new(s3.clone(), &table).unwrap();
            let pi = random_density(&mut rng, n, n);
            let h_a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let h_b: Vec<usize> = (0..n).map(|_| rng.gen_range(0..6)).collect();
            let s = DeterministicStrategy::bipartite(h_a.clone(), h_b.clone());
            let shifted = DeterministicStrategy::bipartite(
                h_a.iter().map(|&a| s3.mul(a, c)).collect(),
                h_b.iter().map(|&b| s3.mul(b, c)).collect(),
            );
            prop_assert_eq!(
                strategy_value(g.unique(), &pi, &s).unwrap(),
                strategy_value(g.unique(), &pi, &shifted).unwrap()
            );
        }

        #[test]
        fn report_value_matches_reevaluation(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_game(&mut rng, 3, 3, 3, true);
            let pi = random_density(&mut rng, 3, 3).to_f64();
            let r = sync_det_value(&g, &pi).unwrap();
            prop_assert!((strategy_value(&g, &pi, &r.best).unwrap() - r.value).abs() < 1e-12);
            let d = det_value(&g, &pi).unwrap();
            prop_assert!((strategy_value(&g, &pi, &d.best).unwrap() - d.value).abs() < 1e-12);
            prop_assert!(r.value <= d.value + 1e-12);
        }
    }
}
