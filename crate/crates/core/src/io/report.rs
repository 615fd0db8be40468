use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::game::{GameJson, LoadedGame};
use crate::algebra::{Matrix, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::game::{strategy_value, DeterministicStrategy};
use crate::quantum::{
    check_order3_unitary, cost_free_basis, cost_matrix, q1_bipartite_value, q1_sync_value, unitary_value_z3,
    BipartiteStrategy, Frame, FrameData,
};
use crate::scalar::Scalar;
use crate::vect::{build_program, residuals, VectMode};

/// A value, exact as `{"num","den"}` or a plain float.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueJson {
    Exact { num: i64, den: i64 },
    Float(f64),
}

impl ValueJson {
    pub fn of<S: Scalar>(s: &S) -> Self {
        match s.as_fraction() {
            Some((num, den)) => ValueJson::Exact { num, den },
            None => ValueJson::Float(s.as_f64()),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            ValueJson::Exact { num, den } => num as f64 / den as f64,
            ValueJson::Float(f) => f,
        }
    }
}

impl std::fmt::Display for ValueJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValueJson::Exact { num, den } if *den == 1 => write!(f, "{num}"),
            ValueJson::Exact { num, den } => write!(f, "{num}/{den}"),
            ValueJson::Float(v) => write!(f, "{v:.10}"),
        }
    }
}

/// How a reported value relates to the true game value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundType {
    Exact,
    Lower,
    Upper,
    /// Numerical optimum of a relaxation, correct to the solver tolerance.
    Estimate,
}

/// Complex matrices as `[[[re, im], ...], ...]`.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn complex_rows(m: &Matrix<Complex64>) -> ComplexRows {
    m.to_rows().iter().map(|r| r.iter().map(|c| [c.re, c.im]).collect()).collect()
}

pub fn complex_matrix(rows: &ComplexRows) -> Result<Matrix<Complex64>> {
    Matrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|c| Complex64::new(c[0], c[1])).collect())
            .collect::<Vec<_>>(),
    )
}

/// Evidence for a reported value, re-checkable without rerunning the solver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    /// Synchronous rank-one frame.
    Frame(FrameData),
    /// Two frames and a state `[re, im]` of length `d²`.
    Bipartite {
        alice: FrameData,
        bob: FrameData,
        state: Vec<[f64; 2]>,
    },
    /// Cost-free matrix for the eigenvalue bound.
    #[serde(rename = "Z")]
    Z(Vec<Vec<f64>>),
    /// Order-3 unitaries, one per question.
    Unitaries(Vec<ComplexRows>),
    /// Gram matrix of a vect strategy.
    Gram { mode: VectMode, gram: Vec<Vec<f64>> },
    /// Deterministic strategy.
    Strategy(DeterministicStrategy),
}

/// One computed value for one game.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: String,
    pub bound: BoundType,
    pub value: ValueJson,
    /// Absolute tolerance the value is claimed to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explored: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<DeterministicStrategy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    /// The game and density, so the certificate is self-contained.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameJson>,
}

impl BoundReport {
    pub fn new(kind: &str, bound: BoundType, value: ValueJson) -> Self {
        BoundReport {
            kind: kind.into(),
            bound,
            value,
            tol: None,
            converged: None,
            explored: None,
            strategy: None,
            details: None,
            certificate: None,
            game: None,
        }
    }
}

/// Result of re-checking a certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub pass: bool,
    pub kind: String,
    pub claimed: f64,
    /// `None` when the certificate is malformed beyond evaluation.
    pub recomputed: Option<f64>,
    pub tolerance: f64,
    /// Named residuals; each must be within `tolerance`.
    pub residuals: BTreeMap<String, f64>,
}

const EXACT_TOL: f64 = 1e-9;

fn frame_from(data: &FrameData, what: &str) -> Result<Frame> {
    Frame::try_from(data.clone()).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Recomputes the value a report claims from its certificate and embedded
/// game alone.
///
/// Frames, bipartite strategies, `Z` matrices and unitaries are checked to
/// `1e-9`; Gram certificates to the report's `tol` (default `1e-6`), both for
/// feasibility and for the objective; strategies exactly when the density
/// is rational.
pub fn verify_certificate(report: &BoundReport) -> Result<Verification> {
    let cert = report
        .certificate
        .as_ref()
        .ok_or_else(|| Error::Parse("report has no certificate".into()))?;
    let game = report
        .game
        .clone()
        .ok_or_else(|| Error::Parse("report has no embedded game".into()))?;
    let game = LoadedGame::try_from(game)?;
    let (g, pi) = (&game.unique, &game.pi);
    let claimed = report.value.as_f64();
    let mut res = BTreeMap::new();
    let mut tolerance = EXACT_TOL;

    let recomputed = match cert {
        Certificate::Frame(data) => {
            let defect = data.defect();
            res.insert("orthonormality".to_string(), defect);
            if defect <= EXACT_TOL {
                Some(q1_sync_value(&frame_from(data, "frame")?, g, pi)?)
            } else {
                None
            }
        }
        Certificate::Bipartite { alice, bob, state } => {
            let state: Vec<Complex64> = state.iter().map(|c| Complex64::new(c[0], c[1])).collect();
            let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum();
            res.insert("alice_orthonormality".to_string(), alice.defect());
            res.insert("bob_orthonormality".to_string(), bob.defect());
            res.insert("state_norm".to_string(), (norm - 1.0).abs());
            if res.values().all(|&r| r <= EXACT_TOL) {
                let s = BipartiteStrategy {
                    alice: frame_from(alice, "alice")?,
                    bob: frame_from(bob, "bob")?,
                    state,
                };
                Some(q1_bipartite_value(&s, g, pi)?)
            } else {
                None
            }
        }
        Certificate::Z(rows) => {
            let z = SymmetricMatrix::new(Matrix::from_rows(rows)?)?;
            let basis = cost_free_basis(g)?;
            res.insert("cost_free".to_string(), basis.violation(&z));
            let c = cost_matrix(g, pi)?;
            let lmax = crate::algebra::eig_sym(&c.add(&z))?.max_value();
            Some(g.nx() as f64 * lmax)
        }
        Certificate::Unitaries(list) => {
            let group = game
                .group
                .as_ref()
                .ok_or_else(|| Error::InvalidGame("unitary certificates need a group game".into()))?;
            let us = list.iter().map(complex_matrix).collect::<Result<Vec<_>>>()?;
            let mut order3 = 0.0f64;
            for u in &us {
                let defect = match check_order3_unitary(u) {
                    Ok(()) => {
                        let cube = u.matmul(u).matmul(u);
                        u.unitarity_defect()
                            .max(cube.sub(&Matrix::identity(u.rows())).max_modulus())
                    }
                    Err(_) => f64::INFINITY,
                };
                order3 = order3.max(defect);
            }
            res.insert("order3_unitary".to_string(), order3);
            if order3.is_finite() {
                Some(unitary_value_z3(group, pi, &us)?)
            } else {
                None
            }
        }
        Certificate::Gram { mode, gram } => {
            tolerance = report.tol.unwrap_or(1e-6);
            let prog = build_program(g, pi, *mode)?;
            let gram = SymmetricMatrix::new(Matrix::from_rows(gram)?)?;
            if gram.dim() != prog.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "gram is {0}x{0}, program needs {1}x{1}",
                    gram.dim(),
                    prog.dim()
                )));
            }
            let r = residuals(&prog, &gram)?;
            res.insert("affine".to_string(), r.affine);
            res.insert("psd".to_string(), r.cone);
            res.insert("nonneg".to_string(), r.nonneg);
            Some(prog.objective.dot(&gram))
        }
        Certificate::Strategy(s) => match &game.exact_pi {
            Some(exact) => {
                let v = strategy_value(g, exact, s)?;
                let matches = ValueJson::of(&v) == report.value || (v.as_f64() - claimed).abs() <= 1e-15;
                res.insert("exact_value".to_string(), if matches { 0.0 } else { (v.as_f64() - claimed).abs() });
                Some(v.as_f64())
            }
            None => Some(strategy_value(g, pi, s)?),
        },
    };
    if let Some(v) = recomputed {
        res.insert("value".to_string(), (v - claimed).abs());
    }
    let pass = recomputed.is_some() && res.values().all(|&r| r <= tolerance);
    Ok(Verification {
        pass,
        kind: report.kind.clone(),
        claimed,
        recomputed,
        tolerance,
        residuals: res,
    })
}
