//! Unique and group-based games, input densities, correlations and the
//! value functional.

mod correlation;
mod density;
mod generators;
mod strategy;
mod unique;
mod value;

pub use correlation::Correlation;
pub use density::InputDensity;
pub use generators::{make_chsh, make_commutator_game, COMMUTATOR_MAX_ORDER};
pub use strategy::DeterministicStrategy;
pub use unique::{GroupGame, UniqueGame};
pub use value::{expected_value, perfect_ns_correlation, strategy_value, symmetrize};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group, symmetric_group};
    use num_rational::Rational64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Rational64;

    fn random_correlation(rng: &mut ChaCha8Rng, nx: usize, ny: usize, k: usize) -> Correlation<f64> {
        let mut p = Vec::new();
        for _ in 0..nx * ny {
            let block: Vec<f64> = (0..k * k).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = block.iter().sum();
            p.extend(block.iter().map(|v| v / total));
        }
        Correlation::new(nx, ny, k, p).unwrap()
    }

    #[test]
    fn chsh3_verify_and_classification() {
        let (g, _) = make_chsh::<Q>(3).unwrap();
        assert_eq!(g.f(1, 1), 1);
        assert_eq!(g.f(2, 2), 1);
        assert!((0..3).all(|y| g.f(0, y) == 0));
        assert!(g.unique().verify(1, 1, 2, 1));
        assert!(!g.is_synchronous());
        assert!(!g.unique().is_synchronous());
        // f(y,x) = f(x,y): symmetric table, although not inverse-symmetric.
        assert!(g.unique().has_symmetric_table());
        assert!(!g.unique().has_inverse_symmetric_table());
    }

    #[test]
    fn chsh2_is_the_xor_game() {
        let (g, _) = make_chsh::<Q>(2).unwrap();
        for (x, y, a, b) in g.unique().winning() {
            assert_eq!((a + b) % 2, (x * y) % 2);
        }
    }

    #[test]
    fn synchronous_game_rejects_mismatched_answers() {
        let s3 = symmetric_group(3).unwrap();
        let (g, _) = make_commutator_game::<Q>(&s3, None).unwrap();
        assert!(g.is_synchronous() && g.is_symmetric());
        assert!(g.unique().is_synchronous() && g.unique().is_symmetric());
        for x in 0..6 {
            assert_eq!(g.f(x, x), s3.identity());
            for a in 0..6 {
                for b in 0..6 {
                    if a != b {
                        assert!(!g.unique().verify(x, x, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_game_on_abelian_group_is_trivial() {
        let z4 = cyclic_group(4).unwrap();
        let (g, pi) = make_commutator_game::<Q>(&z4, None).unwrap();
        assert!((0..4).all(|x| (0..4).all(|y| g.f(x, y) == 0)));
        let constant = DeterministicStrategy::synchronous(vec![0; 4]);
        assert_eq!(strategy_value(g.unique(), &pi, &constant).unwrap(), Q::from_integer(1));
    }

    #[test]
    fn commutator_constant_strategy_on_s3() {
        let s3 = symmetric_group(3).unwrap();
        let (g, pi) = make_commutator_game::<Q>(&s3, None).unwrap();
        let e = DeterministicStrategy::synchronous(vec![s3.identity(); 6]);
        assert_eq!(strategy_value(g.unique(), &pi, &e).unwrap(), Q::new(18, 36));
    }

    #[test]
    fn commutator_order_guard() {
        let s4 = symmetric_group(4).unwrap();
        assert!(make_commutator_game::<Q>(&s4, None).is_ok());
        let s5 = symmetric_group(5).unwrap();
        assert!(make_commutator_game::<Q>(&s5, None).is_err());
        assert!(make_commutator_game::<Q>(&s5, Some(120)).is_ok());
    }

    #[test]
    fn perfect_ns_is_perfect_with_uniform_marginals() {
        let s3 = symmetric_group(3).unwrap();
        let games = [
            make_chsh::<Q>(3).unwrap(),
            make_commutator_game::<Q>(&s3, None).unwrap(),
        ];
        for (g, pi) in &games {
            let u = g.unique();
            let p = perfect_ns_correlation::<Q>(u);
            assert_eq!(expected_value(u, pi, &p).unwrap(), Q::from_integer(1));
            let skewed = InputDensity::<Q>::uniform_on(u.nx(), u.ny(), |x, y| x <= y).unwrap();
            assert_eq!(expected_value(u, &skewed, &p).unwrap(), Q::from_integer(1));
            let inv_k = Q::new(1, u.k() as i64);
            for x in 0..u.nx() {
                for a in 0..u.k() {
                    assert_eq!(p.marginal_a(x, 0, a), inv_k);
                    assert_eq!(p.marginal_b(0, x, a), inv_k);
                }
            }
        }
        let (sync, _) = &games[1];
        assert!(perfect_ns_correlation::<Q>(sync.unique()).is_synchronous());
    }

    #[test]
    fn uniform_random_answers_on_chsh3() {
        let (g, pi) = make_chsh::<Q>(3).unwrap();
        let p = Correlation::from_fn(3, 3, 3, |_, _, _, _| Q::new(1, 9)).unwrap();
        assert_eq!(expected_value(g.unique(), &pi, &p).unwrap(), Q::new(1, 3));
    }

    #[test]
    fn deterministic_correlation_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, pi) = make_chsh::<Q>(3).unwrap();
        for _ in 0..50 {
            let ha: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let hb: Vec<usize> = (0..3).map(|_| rng.gen_range(0..3)).collect();
            let p = Correlation::<Q>::deterministic(&ha, &hb, 3);
            let s = DeterministicStrategy::bipartite(ha, hb);
            assert_eq!(
                expected_value(g.unique(), &pi, &p).unwrap(),
                strategy_value(g.unique(), &pi, &s).unwrap()
            );
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let (g, _) = make_chsh::<f64>(3).unwrap();
        let pi = InputDensity::<f64>::uniform(2, 3);
        let p = perfect_ns_correlation::<f64>(g.unique());
        assert!(matches!(expected_value(g.unique(), &pi, &p), Err(crate::error::Error::ShapeMismatch(_))));
    }

    #[test]
    fn symmetrize_preserves_value_and_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s3 = symmetric_group(3).unwrap();
        let (g, pi) = make_commutator_game::<f64>(&s3, None).unwrap();
        let grp = g.group();
        for _ in 0..5 {
            let p = random_correlation(&mut rng, 6, 6, 6);
            let hat = symmetrize(&g, &p).unwrap();
            let e1 = expected_value(g.unique(), &pi, &p).unwrap();
            let e2 = expected_value(g.unique(), &pi, &hat).unwrap();
            assert!((e1 - e2).abs() < 1e-12);
            for c in 0..6 {
                for a in 0..6 {
                    for b in 0..6 {
                        let d = hat.get(1, 4, grp.mul(a, c), grp.mul(b, c)) - hat.get(1, 4, a, b);
                        assert!(d.abs() < 1e-12);
                    }
                }
            }
            let twice = symmetrize(&g, &hat).unwrap();
            let drift = twice.entries().iter().zip(hat.entries()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(drift < 1e-12);
        }
    }

    #[test]
    fn symmetrize_deterministic_on_z3_gives_thirds() {
        let (g, _) = make_chsh::<Q>(3).unwrap();
        let p = Correlation::<Q>::deterministic(&[0, 1, 2], &[2, 2, 0], 3);
        let hat = symmetrize(&g, &p).unwrap();
        assert!(hat.entries().iter().all(|v| *v == Q::from_integer(0) || *v == Q::new(1, 3)));
        // invariant input is a fixed point
        assert_eq!(symmetrize(&g, &hat).unwrap(), hat);
    }

    proptest! {
        #[test]
        fn expected_value_is_linear(seed in any::<u64>(), lambda in 0.0f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (g, pi) = make_chsh::<f64>(3).unwrap();
            let p = random_correlation(&mut rng, 3, 3, 3);
            let q = random_correlation(&mut rng, 3, 3, 3);
            let mixed = p.mix(&q, lambda).unwrap();
            let lhs = expected_value(g.unique(), &pi, &mixed).unwrap();
            let rhs = lambda * expected_value(g.unique(), &pi, &p).unwrap()
                + (1.0 - lambda) * expected_value(g.unique(), &pi, &q).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
            prop_assert!(lhs <= 1.0 + 1e-9 && lhs >= 0.0);
        }
    }
}
