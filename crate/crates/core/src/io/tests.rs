use super::*;
use crate::classical::sync_det_value;
use crate::quantum::{cycle_rotation_frame, labelling_unitaries, FrameData};
use crate::vect::{c4_certified_construction, c4_vect_value, VectMode};
use num_rational::Rational64;

fn report_for(game: &LoadedGame, kind: &str, bound: BoundType, value: f64, cert: Certificate) -> BoundReport {
    let mut r = BoundReport::new(kind, bound, ValueJson::Float(value));
    r.certificate = Some(cert);
    r.game = Some(game.to_json());
    r
}

fn chsh3_z() -> Vec<Vec<f64>> {
    let mut z = vec![vec![0.0; 9]; 9];
    for i in 0..9 {
        for j in 0..9 {
            if i / 3 != j / 3 {
                continue;
            }
            let v = if i / 3 == 0 {
                if i == j { 4.0 } else { 0.0 }
            } else if i == j {
                -2.0
            } else {
                3.0
            };
            z[i][j] = -v / 27.0;
        }
    }
    z
}

#[test]
fn named_generators() {
    let g = named_game("chsh:3").unwrap();
    assert_eq!((g.unique.nx(), g.unique.k()), (3, 3));
    assert_eq!(*g.exact_pi.as_ref().unwrap().get(1, 1), Rational64::new(1, 9));
    let s3 = named_game("commutator:S3").unwrap();
    assert_eq!(s3.unique.nx(), 6);
    let c5 = named_game("cycle:5").unwrap();
    assert_eq!(c5.digraph.as_ref().unwrap().arcs().len(), 5);
    assert_eq!(*c5.exact_pi.as_ref().unwrap().get(0, 1), Rational64::new(1, 10));
    for bad in ["chsh:x", "cycle:2", "torus:3", "commutator:Q8", "nocolon"] {
        assert!(load_game(bad).is_err(), "{bad}");
    }
}

#[test]
fn game_json_round_trip() {
    for name in ["chsh:3", "cycle:4", "commutator:S3"] {
        let g = named_game(name).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = parse_game(&text, name).unwrap();
        assert_eq!(back.unique, g.unique);
        assert_eq!(back.exact_pi, g.exact_pi);
    }
    let unique = r#"{"kind":"unique","nx":1,"ny":2,"k":2,"perm":[[[0,1],[1,0]]],"pi":[[0.25,0.75]]}"#;
    let g = parse_game(unique, "u").unwrap();
    assert!(g.exact_pi.is_none());
    assert_eq!(*g.pi.get(0, 1), 0.75);
    assert!(g.group.is_none());
}

#[test]
fn group_by_table_and_exact_density() {
    let text = r#"{"kind":"group","group":{"order":2,"table":[[0,1],[1,0]]},
                   "f":[[0,1],[1,0]],"pi":[["1/2",0],[{"num":1,"den":4},"1/4"]]}"#;
    let g = parse_game(text, "t").unwrap();
    let pi = g.exact_pi.unwrap();
    assert_eq!(*pi.get(1, 0), Rational64::new(1, 4));
    assert_eq!(*pi.get(0, 1), Rational64::new(0, 1));
}

#[test]
fn malformed_input_names_the_problem() {
    let missing = parse_game(r#"{"kind":"unique","nx":1,"ny":1,"k":1}"#, "m").unwrap_err();
    assert!(missing.to_string().contains("perm"), "{missing}");
    let unknown = parse_game(r#"{"kind":"torus"}"#, "m").unwrap_err();
    assert!(unknown.to_string().contains("torus"), "{unknown}");
    let mass = parse_game(r#"{"kind":"group","group":"Z2","f":[[0]],"pi":[["1/2"]]}"#, "m").unwrap_err();
    assert!(mass.to_string().contains("sum"), "{mass}");
    let shape = named_game("chsh:3").unwrap().with_density(&[vec![Number::Int(1)]]);
    assert!(shape.is_err());
    assert!(parse_game("not json at all", "m").is_err());
}

#[test]
fn digraph_inputs() {
    let json = parse_game(r#"{"n":3,"arcs":[[0,1],[1,2],[2,0]]}"#, "d").unwrap();
    let text = parse_game("# triangle\n0 1\n1 2\n2 0\n", "d").unwrap();
    assert_eq!(json.unique, text.unique);
    assert_eq!(sync_det_value(&json.unique, json.exact_pi.as_ref().unwrap()).unwrap().value, Rational64::new(1, 1));
}

#[test]
fn value_json_forms() {
    let exact = ValueJson::of(&Rational64::new(2, 3));
    assert_eq!(serde_json::to_string(&exact).unwrap(), r#"{"num":2,"den":3}"#);
    assert_eq!(exact.to_string(), "2/3");
    let float = ValueJson::of(&0.5f64);
    assert_eq!(serde_json::to_string(&float).unwrap(), "0.5");
    let back: ValueJson = serde_json::from_str(r#"{"num":5,"den":9}"#).unwrap();
    assert!((back.as_f64() - 5.0 / 9.0).abs() < 1e-16);
}

#[test]
fn cost_free_certificate() {
    let g = named_game("chsh:3").unwrap();
    let r = report_for(&g, "qc-upper", BoundType::Upper, 5.0 / 9.0, Certificate::Z(chsh3_z()));
    let text = serde_json::to_string(&r).unwrap();
    assert!(text.contains(r#""certificate":{"Z":"#));
    let back: BoundReport = serde_json::from_str(&text).unwrap();
    let v = verify_certificate(&back).unwrap();
    assert!(v.pass, "{v:?}");
    assert!((v.recomputed.unwrap() - 5.0 / 9.0).abs() < 1e-9);

    // diagonal tamper keeps Z structured but moves the bound
    let mut z = chsh3_z();
    z[4][4] += 0.1;
    let v = verify_certificate(&report_for(&g, "qc-upper", BoundType::Upper, 5.0 / 9.0, Certificate::Z(z))).unwrap();
    assert!(!v.pass);
    assert!(v.residuals["cost_free"] > 0.05);
    // cross-question tamper
    let mut z = chsh3_z();
    z[0][4] += 0.1;
    z[4][0] += 0.1;
    let v = verify_certificate(&report_for(&g, "qc-upper", BoundType::Upper, 5.0 / 9.0, Certificate::Z(z))).unwrap();
    assert!(!v.pass);
    assert!((v.residuals["cost_free"] - 0.1).abs() < 1e-12);
}

#[test]
fn gram_certificate() {
    let g = named_game("cycle:4").unwrap();
    let sol = c4_certified_construction().unwrap();
    let gram = sol.gram.matrix().to_rows();
    let cert = Certificate::Gram { mode: VectMode::Synchronous, gram: gram.clone() };
    let v = verify_certificate(&report_for(&g, "vect-sync", BoundType::Estimate, c4_vect_value(), cert)).unwrap();
    assert!(v.pass, "{v:?}");
    assert!((v.recomputed.unwrap() - 2.0 * (1.0 - 1.0 / 3f64.sqrt())).abs() < 1e-9);

    let mut bad = gram;
    bad[1][2] += 0.1;
    bad[2][1] += 0.1;
    let cert = Certificate::Gram { mode: VectMode::Synchronous, gram: bad };
    let v = verify_certificate(&report_for(&g, "vect-sync", BoundType::Estimate, c4_vect_value(), cert)).unwrap();
    assert!(!v.pass);
    let worst = v.residuals.iter().filter(|(k, _)| *k != "value").map(|(_, r)| *r).fold(0.0, f64::max);
    assert!(worst > 1e-3);
}

#[test]
fn frame_and_unitary_certificates() {
    let g = named_game("cycle:4").unwrap();
    let frame = cycle_rotation_frame(4).unwrap();
    let want = crate::quantum::cycle_q1_closed_form(4);
    let data = FrameData::from(frame);
    let v = verify_certificate(&report_for(&g, "q1-lower", BoundType::Lower, want, Certificate::Frame(data.clone()))).unwrap();
    assert!(v.pass);
    let mut bad = data;
    bad.vectors[1][0][0][0] += 0.1;
    let v = verify_certificate(&report_for(&g, "q1-lower", BoundType::Lower, want, Certificate::Frame(bad))).unwrap();
    assert!(!v.pass && v.recomputed.is_none());
    assert!(v.residuals["orthonormality"] > 0.05);

    let c6 = named_game("cycle:6").unwrap();
    let w = crate::digraph::has_perfect_strategy(c6.digraph.as_ref().unwrap()).unwrap();
    let us: Vec<ComplexRows> = labelling_unitaries(&w, 2).iter().map(complex_rows).collect();
    let r = report_for(&c6, "unitary-lower", BoundType::Lower, 1.0, Certificate::Unitaries(us.clone()));
    assert!(verify_certificate(&r).unwrap().pass);
    let mut bad = us;
    bad[0][0][0][0] = 0.5;
    let v = verify_certificate(&report_for(&c6, "unitary-lower", BoundType::Lower, 1.0, Certificate::Unitaries(bad))).unwrap();
    assert!(!v.pass && v.residuals["order3_unitary"].is_infinite());
}

#[test]
fn strategy_certificate_is_exact() {
    let g = named_game("chsh:3").unwrap();
    let s = crate::game::DeterministicStrategy::synchronous(vec![0, 0, 0]);
    let mut r = BoundReport::new("det-sync", BoundType::Exact, ValueJson::of(&Rational64::new(5, 9)));
    r.certificate = Some(Certificate::Strategy(s));
    r.game = Some(g.to_json());
    assert!(verify_certificate(&r).unwrap().pass);
    r.value = ValueJson::of(&Rational64::new(2, 3));
    assert!(!verify_certificate(&r).unwrap().pass);
    r.game = None;
    assert!(verify_certificate(&r).is_err());
}
