//! Acceptance table: every criterion at its pinned tolerance and time budget,
//! one printed line each. Run with `--nocapture` to see the table.

use gamevalues::classical::{det_value, sync_det_value};
use gamevalues::digraph::{directed_cycle, game_from_digraph};
use gamevalues::game::make_chsh;
use gamevalues::quantum::{cycle_q1_bipartite_value, cycle_q1_closed_form, cycle_qc_closed_form};
use gamevalues::reproduce::{criterion, CRITERIA};
use gamevalues::vect::c4_certified_construction;
use gamevalues::Rational;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let row = criterion(id);
        println!(
            "criterion {id} [{}] {}: expected {}; computed {}; tol {}; {:.2}s of {:.0}s",
            if row.pass { "PASS" } else { "FAIL" },
            row.name,
            row.expected,
            row.computed,
            row.tolerance,
            row.seconds,
            row.budget_seconds
        );
        if !row.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

// Reference literals, checked directly against the library rather than
// through the table.

#[test]
fn chsh3_literals() {
    let (g, pi) = make_chsh::<Rational>(3).unwrap();
    assert_eq!(det_value(g.unique(), &pi).unwrap().value, Rational::new(2, 3));
    assert_eq!(sync_det_value(g.unique(), &pi).unwrap().value, Rational::new(5, 9));
}

#[test]
fn cycle_literals() {
    for k in [4usize, 5, 7, 8] {
        let (g, pi) = game_from_digraph::<Rational>(&directed_cycle(k).unwrap()).unwrap();
        let k = k as i64;
        assert_eq!(sync_det_value(g.unique(), &pi).unwrap().value, Rational::new(k - 1, k));
    }
    // C4: 2(1 - 1/sqrt 3) and (1 + sqrt 3)/3 to the printed digits
    assert!((c4_certified_construction().unwrap().value - 0.845299).abs() < 1e-6);
    assert!((cycle_qc_closed_form(4).unwrap().bound - 0.910684).abs() < 1e-6);
    assert!((cycle_q1_closed_form(4) - 0.829345).abs() < 1e-6);
    assert!((cycle_q1_bipartite_value(4).unwrap() - 0.833333).abs() < 1e-6);
}
