//! The reference results as a runnable table: each row recomputes one
//! reference value (or property suite) and compares it at a fixed tolerance.

use std::time::Instant;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{symmetric_group, SymmetricMatrix};
use crate::classical::{det_value, sync_det_value};
use crate::digraph::{directed_cycle, game_from_digraph, has_perfect_strategy, Digraph};
use crate::error::Result;
use crate::game::{make_chsh, make_commutator_game, strategy_value, DeterministicStrategy, InputDensity, UniqueGame};
use crate::quantum::{
    cycle_cos, cycle_q1_bipartite_value, cycle_qc_closed_form, cycle_rotation_frame, q1_search, q1_sync_value,
    qc_bound_for, qc_sync_upper_bound, Q1Options, QcOptions,
};
use crate::vect::{
    build_program, c4_certified_construction, extract_vectors, round_to_deterministic, rounding_threshold,
    solution_from_vectors, solve_vect, vect_value, RoundingStatus, VectMode, VectOptions, VectorFamily,
};

pub const CRITERIA: usize = 9;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: usize,
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub tolerance: String,
    /// How the computed value is obtained.
    pub source: String,
    pub seconds: f64,
    pub budget_seconds: f64,
    pub pass: bool,
}

struct Outcome {
    expected: String,
    computed: String,
    ok: bool,
}

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn fmt_r(q: &Rational64) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn chsh3_exact() -> Result<Outcome> {
    let (g, pi) = make_chsh::<Rational64>(3)?;
    let det = det_value(g.unique(), &pi)?.value;
    let sync = sync_det_value(g.unique(), &pi)?.value;
    Ok(Outcome {
        expected: "det 2/3, det-sync 5/9".into(),
        computed: format!("det {}, det-sync {}", fmt_r(&det), fmt_r(&sync)),
        ok: det == r(2, 3) && sync == r(5, 9),
    })
}

/// The explicit cost-free matrix for CHSH₃ (lexicographic order on `X × A`).
pub fn chsh3_cost_free_matrix() -> SymmetricMatrix<f64> {
    SymmetricMatrix::from_fn(9, |i, j| {
        if i / 3 != j / 3 {
            0.0
        } else if i / 3 == 0 {
            if i == j { -4.0 / 27.0 } else { 0.0 }
        } else if i == j {
            2.0 / 27.0
        } else {
            -3.0 / 27.0
        }
    })
}

fn chsh3_qc() -> Result<Outcome> {
    let (g, pi) = make_chsh::<f64>(3)?;
    let with_z = qc_bound_for(g.unique(), &pi, &chsh3_cost_free_matrix())?;
    let zero = qc_bound_for(g.unique(), &pi, &SymmetricMatrix::zeros(9))?;
    Ok(Outcome {
        expected: "Z: 5/9, Z=0: 1".into(),
        computed: format!("Z: {with_z:.12}, Z=0: {zero:.12}"),
        ok: (with_z - 5.0 / 9.0).abs() <= 1e-9 && (zero - 1.0).abs() <= 1e-9,
    })
}

fn cycle_classical() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [4i64, 5, 7, 8] {
        let (g, pi) = game_from_digraph::<Rational64>(&directed_cycle(k as usize)?)?;
        let sync = sync_det_value(g.unique(), &pi)?.value;
        let det = det_value(g.unique(), &pi)?.value;
        let want_det = if k % 2 == 0 { r(k - 1, k) } else { r(2 * k - 1, 2 * k) };
        ok &= sync == r(k - 1, k) && det == want_det;
        parts.push(format!("C{k}: {} / {}", fmt_r(&sync), fmt_r(&det)));
    }
    for k in [3usize, 6, 9] {
        let d = directed_cycle(k)?;
        let (g, pi) = game_from_digraph::<Rational64>(&d)?;
        let witness = has_perfect_strategy(&d);
        let witness_ok = match &witness {
            Some(w) => strategy_value(g.unique(), &pi, &DeterministicStrategy::synchronous(w.clone()))? == r(1, 1),
            None => false,
        };
        let sync = sync_det_value(g.unique(), &pi)?.value;
        let det = det_value(g.unique(), &pi)?.value;
        ok &= witness_ok && sync == r(1, 1) && det == r(1, 1);
        parts.push(format!("C{k}: {} / {} witness {}", fmt_r(&sync), fmt_r(&det), witness_ok));
    }
    Ok(Outcome {
        expected: "sync 1-1/k; det 1-1/k (even), 1-1/2k (odd); 3|k: 1 with witness".into(),
        computed: parts.join("; "),
        ok,
    })
}

fn c4_vect() -> Result<Outcome> {
    let want = 2.0 * (1.0 - 1.0 / 3f64.sqrt());
    let (g, pi) = game_from_digraph::<f64>(&directed_cycle(4)?)?;
    let opts = VectOptions::default();
    let sync = vect_value(g.unique(), &pi, VectMode::Synchronous, &opts)?;
    let bip = vect_value(g.unique(), &pi, VectMode::Bipartite, &opts)?;
    let cert = c4_certified_construction()?;
    Ok(Outcome {
        expected: format!("{want:.9}"),
        computed: format!(
            "sync {:.9}, bipartite {:.9}, construction {:.12} (residual {:.1e})",
            sync.value,
            bip.value,
            cert.value,
            cert.residuals.max()
        ),
        ok: (sync.value - want).abs() <= 2e-3
            && (bip.value - want).abs() <= 2e-3
            && (cert.value - want).abs() <= 1e-9
            && cert.residuals.max() <= 1e-9,
    })
}

fn cycle_quantum() -> Result<Outcome> {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [4usize, 5, 7, 8] {
        let c = cycle_cos(k);
        let (g, pi) = game_from_digraph::<f64>(&directed_cycle(k)?)?;
        let q1 = q1_sync_value(&cycle_rotation_frame(k)?, g.unique(), &pi)?;
        let bip = cycle_q1_bipartite_value(k)?;
        let qc = cycle_qc_closed_form(k)?;
        let spectrum_ok = qc.numerical[0] >= -1e-10;
        ok &= (q1 - ((1.0 + 2.0 * c) / 3.0).powi(2)).abs() <= 1e-9
            && (bip - (1.0 + 2.0 * c * c) / 3.0).abs() <= 1e-9
            && (qc.bound - (1.0 + 2.0 * c) / 3.0).abs() <= 1e-9
            && (qc.cost_bound - qc.bound).abs() <= 1e-9
            && spectrum_ok;
        parts.push(format!("C{k}: q1 {q1:.9}, bip {bip:.9}, qc {:.9}", qc.bound));
    }
    Ok(Outcome {
        expected: "((1+2c_k)/3)^2, (1+2c_k^2)/3, (1+2c_k)/3".into(),
        computed: parts.join("; "),
        ok,
    })
}

fn commutator_s3() -> Result<Outcome> {
    let s3 = symmetric_group(3)?;
    let (g, pi) = make_commutator_game::<Rational64>(&s3, None)?;
    let report = sync_det_value(g.unique(), &pi)?;
    let constant = strategy_value(g.unique(), &pi, &DeterministicStrategy::synchronous(vec![s3.identity(); 6]))?;
    // w(x) = x⁻¹ on the 3-cycles, identity on the transpositions
    let w: Vec<usize> = (0..6)
        .map(|x| {
            let order3 = x != s3.identity() && s3.mul(x, x) != s3.identity();
            if order3 { s3.inv(x) } else { s3.identity() }
        })
        .collect();
    let explicit = strategy_value(g.unique(), &pi, &DeterministicStrategy::synchronous(w))?;
    Ok(Outcome {
        expected: "24/36, constant 18/36".into(),
        computed: format!(
            "{} ({} strategies), constant {}, inverting 3-cycles {}",
            fmt_r(&report.value),
            report.explored,
            fmt_r(&constant),
            fmt_r(&explicit)
        ),
        ok: report.value == r(24, 36) && constant == r(18, 36) && explicit == r(24, 36),
    })
}

fn random_perm(rng: &mut ChaCha8Rng, k: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..k).collect();
    for i in (1..k).rev() {
        p.swap(i, rng.gen_range(0..=i));
    }
    p
}

/// Random `n × n` unique game with a planted perfect strategy.
pub fn planted_unique_game(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Result<(UniqueGame, DeterministicStrategy)> {
    let h_a: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let h_b: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    let mut perms = vec![vec![Vec::new(); n]; n];
    for x in 0..n {
        for y in 0..n {
            let mut p = random_perm(rng, k);
            let j = p.iter().position(|&a| a == h_a[x]).expect("permutation");
            p.swap(j, h_b[y]);
            perms[x][y] = p;
        }
    }
    Ok((UniqueGame::new(n, n, k, &perms)?, DeterministicStrategy::bipartite(h_a, h_b)))
}

/// Random synchronous unique game (identity on the diagonal) with a random
/// positive density.
pub fn random_sync_game(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Result<(UniqueGame, InputDensity<f64>)> {
    let perms: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| if x == y { (0..k).collect() } else { random_perm(rng, k) })
                .collect()
        })
        .collect();
    let w: Vec<f64> = (0..n * n).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = w.iter().sum();
    Ok((
        UniqueGame::new(n, n, k, &perms)?,
        InputDensity::new(n, n, w.iter().map(|v| v / total).collect())?,
    ))
}

/// Near-perfect feasible vect strategies rounded to deterministic ones.
/// Returns `(perfect roundings, trials)`.
///
/// Each trial mixes the planted perfect family with random deterministic
/// families and a solver-produced family for an unrelated game of the same
/// shape, with total defect below `π₀/(14k²)`.
pub fn rounding_suite(trials: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perfect = 0;
    let solver = VectOptions { tol: 1e-8, max_iters: 20_000, seed };
    for _ in 0..trials {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(2..=4);
        let (g, planted) = planted_unique_game(&mut rng, n, k)?;
        let pi = InputDensity::<f64>::uniform(n, n);
        let limit = rounding_threshold(pi.min(), k, false)? / 2.0;

        let (other, _) = planted_unique_game(&mut rng, n, k)?;
        let other_pi = InputDensity::<f64>::uniform(n, n);
        let noise = extract_vectors(&solve_vect(&build_program(&other, &other_pi, VectMode::Bipartite)?, &solver)?)?;
        let mut parts = vec![(0.0, VectorFamily::deterministic(&planted, k, VectMode::Bipartite)), (0.0, noise)];
        for _ in 0..rng.gen_range(0..=2) {
            let s = DeterministicStrategy::bipartite(
                (0..n).map(|_| rng.gen_range(0..k)).collect(),
                (0..n).map(|_| rng.gen_range(0..k)).collect(),
            );
            parts.push((0.0, VectorFamily::deterministic(&s, k, VectMode::Bipartite)));
        }
        // every part loses at most its full weight, so weight < limit bounds the defect
        let budget = rng.gen_range(0.05..0.95) * limit;
        let m = parts.len() - 1;
        parts[0].0 = 1.0 - budget;
        for p in parts.iter_mut().skip(1) {
            p.0 = budget / m as f64;
        }
        let fam = VectorFamily::direct_sum(&parts)?;
        let out = round_to_deterministic(&g, &pi, &fam)?;
        let value = strategy_value(&g, &pi, &out.strategy)?;
        let feasible = solution_from_vectors(&build_program(&g, &pi, VectMode::Bipartite)?, &fam)?.residuals.max() < 1e-6;
        if feasible
            && 1.0 - out.vect_value < limit
            && out.status == RoundingStatus::GuaranteedPerfect
            && (value - 1.0).abs() < 1e-12
        {
            perfect += 1;
        }
    }
    Ok((perfect, trials))
}

/// The value chain `sync_det ≤ q₁ ≤ vect` (q₁ searched at every `d ≤ k`) and `sync_det ≤ qc_upper` on
/// random synchronous games. Returns `(games satisfying it, games)`.
pub fn value_chain_suite(games: usize, seed: u64) -> Result<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut good = 0;
    for i in 0..games {
        let n = rng.gen_range(2..=3);
        let k = rng.gen_range(2..=3);
        let (g, pi) = random_sync_game(&mut rng, n, k)?;
        let det = sync_det_value(&g, &pi)?.value;
        let mut q1 = 0.0f64;
        for d in 1..=k {
            let opts = Q1Options { d, restarts: 8, seed: i as u64, ..Default::default() };
            q1 = q1.max(q1_search(&g, &pi, &opts)?.value);
        }
        let vect = vect_value(&g, &pi, VectMode::Synchronous, &VectOptions::default())?.value;
        let qc = qc_sync_upper_bound(&g, &pi, &QcOptions { iters: 500, ..Default::default() })?.bound;
        if det <= q1 + 1e-9 && q1 <= vect + 1e-4 && det <= qc + 1e-6 {
            good += 1;
        }
    }
    Ok((good, games))
}

fn random_digraph(rng: &mut ChaCha8Rng) -> Result<Digraph> {
    loop {
        let n = rng.gen_range(2..=8);
        let density = rng.gen_range(0.2..0.9);
        let mut arcs = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if rng.gen_bool(density) {
                    arcs.push(if rng.gen_bool(0.5) { (x, y) } else { (y, x) });
                }
            }
        }
        if !arcs.is_empty() {
            return Digraph::new(n, arcs);
        }
    }
}

/// `has_perfect_strategy` against exhaustive search on random digraphs.
/// Returns `(agreements, digraphs, perfect ones)`.
pub fn perfect_oracle_suite(count: usize, seed: u64) -> Result<(usize, usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut agree, mut perfect) = (0, 0);
    for _ in 0..count {
        let d = random_digraph(&mut rng)?;
        let (g, pi) = game_from_digraph::<Rational64>(&d)?;
        let exhaustive = sync_det_value(g.unique(), &pi)?.value == r(1, 1);
        let fast = has_perfect_strategy(&d);
        let witness_ok = match &fast {
            Some(w) => d.satisfied_arcs(w) == d.arcs().len(),
            None => true,
        };
        if exhaustive == fast.is_some() && witness_ok {
            agree += 1;
        }
        perfect += usize::from(exhaustive);
    }
    Ok((agree, count, perfect))
}

fn suite(name: &str, (ok, total): (usize, usize)) -> Outcome {
    Outcome {
        expected: format!("{total}/{total}"),
        computed: format!("{ok}/{total} {name}"),
        ok: ok == total,
    }
}

/// Runs one criterion (1 to [`CRITERIA`]).
pub fn criterion(id: usize) -> Row {
    let (name, tolerance, source, budget): (&str, &str, &str, f64) = match id {
        1 => ("CHSH3 classical values", "exact", "exhaustive search, rational arithmetic", 1.0),
        2 => ("CHSH3 cost-matrix bound", "1e-9", "eigenvalue of C+Z for the explicit Z and for Z=0", 1.0),
        3 => ("directed cycle classical values", "exact", "exhaustive search and labelling propagation", 10.0),
        4 => ("C4 vect value", "2e-3 solver, 1e-9 construction", "ADMM on the Gram SDP; explicit vectors", 60.0),
        5 => ("directed cycle quantum bounds", "1e-9", "rotation frame, entangled state, eigenvalue certificate", 10.0),
        6 => ("S3 commutator game", "exact", "exhaustive synchronous search", 30.0),
        7 => ("rounding of near-perfect vect strategies", "100% of 120 trials", "random planted games", 60.0),
        8 => ("value chain on synchronous games", "1e-4 / 1e-6", "search, SDP and eigenvalue bound on 50 games", 300.0),
        9 => ("perfect-labelling oracle", "200/200 agree", "propagation vs exhaustive search", 30.0),
        _ => ("unknown criterion", "-", "-", 0.0),
    };
    let start = Instant::now();
    let outcome = match id {
        1 => chsh3_exact(),
        2 => chsh3_qc(),
        3 => cycle_classical(),
        4 => c4_vect(),
        5 => cycle_quantum(),
        6 => commutator_s3(),
        7 => rounding_suite(120, 7).map(|s| suite("rounded to perfect", s)),
        8 => value_chain_suite(50, 8).map(|s| suite("satisfy the chain", s)),
        9 => perfect_oracle_suite(200, 9).map(|(a, t, p)| {
            let mut o = suite("agree", (a, t));
            o.computed.push_str(&format!(" ({p} perfect)"));
            o
        }),
        _ => Ok(Outcome { expected: "-".into(), computed: "-".into(), ok: false }),
    };
    let seconds = start.elapsed().as_secs_f64();
    let outcome = outcome.unwrap_or_else(|e| Outcome {
        expected: "-".into(),
        computed: format!("error: {e}"),
        ok: false,
    });
    Row {
        id,
        name: name.into(),
        expected: outcome.expected,
        computed: outcome.computed,
        tolerance: tolerance.into(),
        source: source.into(),
        seconds,
        budget_seconds: budget,
        pass: outcome.ok && seconds <= budget,
    }
}

pub fn run_all() -> Vec<Row> {
    (1..=CRITERIA).map(criterion).collect()
}
