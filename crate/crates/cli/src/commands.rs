use std::path::Path;

use clap::ValueEnum;
use gamevalues::classical::{det_value, perfect_sync_group_strategy, sync_det_value};
use gamevalues::digraph::{dcut as digraph_dcut, has_perfect_strategy};
use gamevalues::game::strategy_value;
use gamevalues::io::{
    load_game, parse_density_json, verify_certificate, BoundReport, BoundType, Certificate, LoadedGame, ValueJson,
};
use gamevalues::quantum::{q1_bipartite_search, q1_search, qc_sync_upper_bound, FrameData, Q1Options, QcOptions};
use gamevalues::reproduce::{criterion, run_all, CRITERIA};
use gamevalues::vect::{extract_vectors, round_to_deterministic, vect_value, VectMode, VectOptions};
use gamevalues::{Error, Rational, Result};
use serde_json::{json, Value};

use crate::{GameArgs, SolverArgs, EXIT_INVALID, EXIT_NOT_CONVERGED, EXIT_OK};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Det,
    DetSync,
    Vect,
    VectSync,
    Q1,
    Q1Bipartite,
    QcUpper,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Det => "det",
            Kind::DetSync => "det-sync",
            Kind::Vect => "vect",
            Kind::VectSync => "vect-sync",
            Kind::Q1 => "q1",
            Kind::Q1Bipartite => "q1-bipartite",
            Kind::QcUpper => "qc-upper",
        }
    }

    fn synchronous(self) -> bool {
        matches!(self, Kind::DetSync | Kind::VectSync | Kind::Q1 | Kind::QcUpper)
    }
}

/// A command's JSON output, its CSV rows, and the exit code.
pub struct Output {
    pub body: Body,
    pub code: u8,
}

pub struct Body {
    pub json: Value,
    pub records: Vec<Value>,
}

fn load(args: &GameArgs) -> Result<LoadedGame> {
    let game = load_game(&args.game)?;
    match &args.density {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            game.with_density(&parse_density_json(&text)?)
        }
        None => Ok(game),
    }
}

fn require_square(game: &LoadedGame, what: &str) -> Result<()> {
    if game.unique.is_square() {
        Ok(())
    } else {
        Err(Error::InvalidGame(format!(
            "{what} needs a square game, got {}x{}",
            game.unique.nx(),
            game.unique.ny()
        )))
    }
}

fn vect_options(s: &SolverArgs) -> VectOptions {
    VectOptions {
        tol: s.tol,
        max_iters: s.max_iters,
        seed: s.seed,
    }
}

fn q1_options(s: &SolverArgs, d: usize) -> Q1Options {
    Q1Options {
        d,
        restarts: s.restarts,
        seed: s.seed,
        ..Q1Options::default()
    }
}

fn certified(game: &LoadedGame, mut r: BoundReport, cert: Certificate) -> BoundReport {
    r.certificate = Some(cert);
    r.game = Some(game.to_json());
    r
}

fn classical_report(game: &LoadedGame, kind: Kind) -> Result<BoundReport> {
    let sync = kind == Kind::DetSync;
    let (value, best, explored) = match &game.exact_pi {
        Some(pi) => {
            let r = if sync { sync_det_value(&game.unique, pi)? } else { det_value(&game.unique, pi)? };
            (ValueJson::of(&r.value), r.best, r.explored)
        }
        None => {
            let r = if sync { sync_det_value(&game.unique, &game.pi)? } else { det_value(&game.unique, &game.pi)? };
            (ValueJson::of(&r.value), r.best, r.explored)
        }
    };
    let mut r = BoundReport::new(kind.name(), BoundType::Exact, value);
    r.explored = Some(explored);
    r.strategy = Some(best.clone());
    Ok(certified(game, r, Certificate::Strategy(best)))
}

fn vect_report(game: &LoadedGame, kind: Kind, s: &SolverArgs, emit_gram: bool) -> Result<BoundReport> {
    let mode = if kind == Kind::VectSync { VectMode::Synchronous } else { VectMode::Bipartite };
    let sol = vect_value(&game.unique, &game.pi, mode, &vect_options(s))?;
    let mut r = BoundReport::new(kind.name(), BoundType::Estimate, ValueJson::Float(sol.value));
    // the certificate is checked against the residuals actually reached
    r.tol = Some(s.tol.max(sol.residuals.max()).max(1e-6));
    r.converged = Some(sol.converged);
    r.details = Some(json!({ "iterations": sol.iterations, "residuals": sol.residuals }));
    if emit_gram {
        let gram = sol.gram.matrix().to_rows();
        r = certified(game, r, Certificate::Gram { mode, gram });
    }
    Ok(r)
}

fn q1_report(game: &LoadedGame, s: &SolverArgs) -> Result<BoundReport> {
    let dims: Vec<usize> = match s.d {
        Some(d) => vec![d],
        None => (1..=game.unique.k()).collect(),
    };
    let mut best: Option<(usize, gamevalues::quantum::Q1Report)> = None;
    for d in dims {
        let rep = q1_search(&game.unique, &game.pi, &q1_options(s, d))?;
        if best.as_ref().map_or(true, |(_, b)| rep.value > b.value) {
            best = Some((d, rep));
        }
    }
    let (d, rep) = best.ok_or_else(|| Error::InvalidGame("no dimension to search".into()))?;
    let mut r = BoundReport::new("q1", BoundType::Lower, ValueJson::Float(rep.value));
    r.details = Some(json!({ "d": d, "restart": rep.restart, "restarts": s.restarts, "seed": s.seed }));
    Ok(certified(game, r, Certificate::Frame(FrameData::from(rep.frame))))
}

fn q1_bipartite_report(game: &LoadedGame, s: &SolverArgs) -> Result<BoundReport> {
    let d = s.d.unwrap_or(game.unique.k());
    let rep = q1_bipartite_search(&game.unique, &game.pi, &q1_options(s, d))?;
    let mut r = BoundReport::new("q1-bipartite", BoundType::Lower, ValueJson::Float(rep.value));
    r.details = Some(json!({ "d": d, "restart": rep.restart, "restarts": s.restarts, "seed": s.seed }));
    let strat = rep.strategy;
    let cert = Certificate::Bipartite {
        state: strat.state.iter().map(|c| [c.re, c.im]).collect(),
        alice: FrameData::from(strat.alice),
        bob: FrameData::from(strat.bob),
    };
    Ok(certified(game, r, cert))
}

fn qc_report(game: &LoadedGame) -> Result<BoundReport> {
    let rep = qc_sync_upper_bound(&game.unique, &game.pi, &QcOptions::default())?;
    let mut r = BoundReport::new("qc-upper", BoundType::Upper, ValueJson::Float(rep.bound));
    r.details = Some(json!({ "iterations": rep.history.len() }));
    Ok(certified(game, r, Certificate::Z(rep.z.matrix().to_rows())))
}

fn report_record(r: &BoundReport) -> Value {
    json!({
        "kind": r.kind,
        "bound": r.bound,
        "value": r.value.to_string(),
        "tol": r.tol,
        "converged": r.converged,
        "explored": r.explored,
    })
}

pub fn value(args: &GameArgs, kinds: &[Kind], s: &SolverArgs, emit_gram: bool) -> Result<Output> {
    let game = load(args)?;
    for &kind in kinds {
        if kind.synchronous() {
            require_square(&game, kind.name())?;
        }
    }
    let mut reports = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        reports.push(match kind {
            Kind::Det | Kind::DetSync => classical_report(&game, kind)?,
            Kind::Vect | Kind::VectSync => vect_report(&game, kind, s, emit_gram)?,
            Kind::Q1 => q1_report(&game, s)?,
            Kind::Q1Bipartite => q1_bipartite_report(&game, s)?,
            Kind::QcUpper => qc_report(&game)?,
        });
    }
    let code = if reports.iter().any(|r| r.converged == Some(false)) { EXIT_NOT_CONVERGED } else { EXIT_OK };
    let records = reports.iter().map(report_record).collect();
    Ok(Output {
        body: Body {
            json: json!({ "game": game.name, "reports": reports }),
            records,
        },
        code,
    })
}

pub fn perfect_check(args: &GameArgs) -> Result<Output> {
    let game = load(args)?;
    require_square(&game, "perfect-check")?;
    let (labelling, method) = if let Some(d) = &game.digraph {
        (has_perfect_strategy(d), "net-length")
    } else if let Some(g) = game.group.as_ref().filter(|g| g.is_synchronous()) {
        let w = match &game.exact_pi {
            Some(pi) => perfect_sync_group_strategy(g, pi)?,
            None => perfect_sync_group_strategy(g, &game.pi)?,
        };
        (w, "propagation")
    } else {
        let w = match &game.exact_pi {
            Some(pi) => {
                let r = sync_det_value(&game.unique, pi)?;
                (r.value == Rational::from_integer(1)).then_some(r.best.h_a)
            }
            None => {
                let r = sync_det_value(&game.unique, &game.pi)?;
                (r.value >= 1.0 - 1e-12).then_some(r.best.h_a)
            }
        };
        (w, "exhaustive")
    };
    let json = json!({
        "game": game.name,
        "perfect": labelling.is_some(),
        "labelling": labelling,
        "method": method,
    });
    Ok(Output {
        body: Body {
            records: vec![json.clone()],
            json,
        },
        code: EXIT_OK,
    })
}

pub fn dcut(args: &GameArgs) -> Result<Output> {
    let game = load(args)?;
    let d = game
        .digraph
        .as_ref()
        .ok_or_else(|| Error::InvalidDigraph(format!("{} is not a digraph game", game.name)))?;
    let rep = digraph_dcut(d)?;
    let json = json!({
        "game": game.name,
        "dcut": rep.value,
        "arcs": rep.arcs,
        "fraction": ValueJson::of(&Rational::new(rep.value as i64, rep.arcs as i64)),
        "labelling": rep.labelling,
        "explored": rep.explored,
    });
    Ok(Output {
        body: Body {
            records: vec![json.clone()],
            json,
        },
        code: EXIT_OK,
    })
}

pub fn round(args: &GameArgs, sync: bool, s: &SolverArgs) -> Result<Output> {
    let game = load(args)?;
    let mode = if sync {
        require_square(&game, "round --sync")?;
        VectMode::Synchronous
    } else {
        VectMode::Bipartite
    };
    let sol = vect_value(&game.unique, &game.pi, mode, &vect_options(s))?;
    let family = extract_vectors(&sol)?;
    let outcome = round_to_deterministic(&game.unique, &game.pi, &family)?;
    let value = match &game.exact_pi {
        Some(pi) => ValueJson::of(&strategy_value(&game.unique, pi, &outcome.strategy)?),
        None => ValueJson::of(&strategy_value(&game.unique, &game.pi, &outcome.strategy)?),
    };
    let json = json!({
        "game": game.name,
        "mode": mode,
        "vect_value": sol.value,
        "converged": sol.converged,
        "residuals": sol.residuals,
        "status": outcome.status,
        "threshold": outcome.threshold,
        "anchor": outcome.anchor,
        "strategy": outcome.strategy,
        "strategy_value": value,
        "perfect": value.as_f64() >= 1.0 - 1e-12,
    });
    let record = json!({
        "vect_value": sol.value,
        "converged": sol.converged,
        "status": outcome.status,
        "strategy_value": value.to_string(),
        "perfect": value.as_f64() >= 1.0 - 1e-12,
    });
    Ok(Output {
        body: Body {
            json,
            records: vec![record],
        },
        code: if sol.converged { EXIT_OK } else { EXIT_NOT_CONVERGED },
    })
}

pub fn verify(path: &Path) -> Result<Output> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("certificate: {e}")))?;
    let reports: Vec<BoundReport> = match value.get("reports") {
        Some(list) => serde_json::from_value(list.clone()).map_err(|e| Error::Parse(format!("reports: {e}")))?,
        None => vec![serde_json::from_value(value).map_err(|e| Error::Parse(format!("report: {e}")))?],
    };
    let checked: Vec<_> = reports
        .iter()
        .filter(|r| r.certificate.is_some())
        .map(verify_certificate)
        .collect::<Result<_>>()?;
    if checked.is_empty() {
        return Err(Error::Parse("no report carries a certificate".into()));
    }
    let pass = checked.iter().all(|v| v.pass);
    let records = checked
        .iter()
        .map(|v| json!({ "kind": v.kind, "pass": v.pass, "claimed": v.claimed, "recomputed": v.recomputed, "tolerance": v.tolerance }))
        .collect();
    Ok(Output {
        body: Body {
            json: json!({ "pass": pass, "results": checked }),
            records,
        },
        code: if pass { EXIT_OK } else { EXIT_INVALID },
    })
}

pub fn reproduce(only: &[usize]) -> Result<Output> {
    if let Some(bad) = only.iter().find(|&&i| i == 0 || i > CRITERIA) {
        return Err(Error::OutOfRange {
            what: "row",
            value: *bad,
            allowed: format!("1..={CRITERIA}"),
        });
    }
    let rows = if only.is_empty() { run_all() } else { only.iter().map(|&i| criterion(i)).collect() };
    let pass = rows.iter().all(|r| r.pass);
    let records = rows.iter().map(|r| serde_json::to_value(r).expect("row serializes")).collect();
    Ok(Output {
        body: Body {
            json: json!({ "pass": pass, "rows": rows }),
            records,
        },
        code: if pass { EXIT_OK } else { EXIT_INVALID },
    })
}
