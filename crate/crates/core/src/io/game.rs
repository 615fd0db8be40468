use std::path::Path;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::algebra::{FiniteGroup, GroupJson};
use crate::digraph::{directed_cycle, game_from_digraph, Digraph};
use crate::error::{Error, Result};
use crate::game::{make_chsh, make_commutator_game, GroupGame, InputDensity, UniqueGame};
use crate::scalar::Scalar;

/// A density entry: an integer, a float, a `"p/q"` string or `{"num","den"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
    Fraction { num: i64, den: i64 },
}

impl Number {
    fn exact(&self) -> Result<Option<Rational64>> {
        match self {
            Number::Int(n) => Ok(Some(Rational64::from_integer(*n))),
            Number::Float(_) => Ok(None),
            Number::Fraction { num, den } => fraction(*num, *den).map(Some),
            Number::Text(t) => {
                let t = t.trim();
                match t.split_once('/') {
                    Some((p, q)) => {
                        let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad fraction {t:?}")));
                        fraction(parse(p)?, parse(q)?).map(Some)
                    }
                    None => match t.parse::<i64>() {
                        Ok(n) => Ok(Some(Rational64::from_integer(n))),
                        Err(_) => Err(Error::Parse(format!("bad number {t:?}"))),
                    },
                }
            }
        }
    }

    fn float(&self) -> Result<f64> {
        Ok(match self {
            Number::Float(f) => *f,
            other => other.exact()?.expect("non-float entries are exact").as_f64(),
        })
    }
}

fn fraction(num: i64, den: i64) -> Result<Rational64> {
    if den == 0 {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational64::new(num, den))
}

/// Density JSON: `{"pi": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub pi: Vec<Vec<Number>>,
}

/// A group by built-in name (`"Z3"`, `"S3"`) or by table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Name(String),
    Table(GroupJson),
}

impl GroupRef {
    pub fn resolve(&self) -> Result<FiniteGroup> {
        match self {
            GroupRef::Name(n) => FiniteGroup::by_name(n),
            GroupRef::Table(t) => FiniteGroup::try_from(t.clone()),
        }
    }

    fn of(g: &FiniteGroup) -> Self {
        match g.name() {
            Some(n) => GroupRef::Name(n.to_string()),
            None => GroupRef::Table(GroupJson::from(g)),
        }
    }
}

/// Game JSON, optionally carrying its density under `"pi"` (uniform when
/// absent).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GameJson {
    Unique {
        nx: usize,
        ny: usize,
        k: usize,
        perm: Vec<Vec<Vec<usize>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pi: Option<Vec<Vec<Number>>>,
    },
    Group {
        group: GroupRef,
        f: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pi: Option<Vec<Vec<Number>>>,
    },
}

/// A game ready for the solvers: the unique-game view, the group view when
/// there is one, the source digraph for digraph games, and the density in
/// floating point (plus exactly when every entry is rational).
#[derive(Clone, Debug)]
pub struct LoadedGame {
    pub name: String,
    pub unique: UniqueGame,
    pub group: Option<GroupGame>,
    pub digraph: Option<Digraph>,
    pub exact_pi: Option<InputDensity<Rational64>>,
    pub pi: InputDensity<f64>,
}

impl LoadedGame {
    fn from_group(name: String, g: GroupGame, pi: InputDensity<Rational64>, digraph: Option<Digraph>) -> Self {
        LoadedGame {
            name,
            unique: g.unique().clone(),
            group: Some(g),
            digraph,
            pi: pi.to_f64(),
            exact_pi: Some(pi),
        }
    }

    /// Replaces the density; `rows` must match the game's shape.
    pub fn with_density(mut self, rows: &[Vec<Number>]) -> Result<Self> {
        let (exact, float) = parse_density(rows)?;
        if (float.nx(), float.ny()) != (self.unique.nx(), self.unique.ny()) {
            return Err(Error::ShapeMismatch(format!(
                "pi is {}x{} but the game is {}x{}",
                float.nx(),
                float.ny(),
                self.unique.nx(),
                self.unique.ny()
            )));
        }
        self.exact_pi = exact;
        self.pi = float;
        // a digraph game is tied to the uniform density on its edges
        self.digraph = None;
        Ok(self)
    }

    /// Self-contained JSON for the game and its density. Exact densities are
    /// written as `"p/q"` strings.
    pub fn to_json(&self) -> GameJson {
        let pi: Vec<Vec<Number>> = match &self.exact_pi {
            Some(e) => e
                .rows()
                .iter()
                .map(|r| r.iter().map(|q| Number::Text(format!("{}/{}", q.numer(), q.denom()))).collect())
                .collect(),
            None => self.pi.rows().iter().map(|r| r.iter().map(|&f| Number::Float(f)).collect()).collect(),
        };
        match &self.group {
            Some(g) => GameJson::Group {
                group: GroupRef::of(g.group()),
                f: g.f_table(),
                pi: Some(pi),
            },
            None => GameJson::Unique {
                nx: self.unique.nx(),
                ny: self.unique.ny(),
                k: self.unique.k(),
                perm: self.unique.table(),
                pi: Some(pi),
            },
        }
    }
}

fn parse_density(rows: &[Vec<Number>]) -> Result<(Option<InputDensity<Rational64>>, InputDensity<f64>)> {
    let exact: Option<Vec<Vec<Rational64>>> = rows
        .iter()
        .map(|r| r.iter().map(Number::exact).collect::<Result<Option<Vec<_>>>>())
        .collect::<Result<Option<Vec<_>>>>()?;
    let floats: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(Number::float).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let exact = match exact {
        Some(rows) => Some(InputDensity::from_rows(&rows)?),
        None => None,
    };
    let float = match &exact {
        Some(e) => e.to_f64(),
        None => InputDensity::from_rows(&floats)?,
    };
    Ok((exact, float))
}

impl TryFrom<GameJson> for LoadedGame {
    type Error = Error;

    fn try_from(j: GameJson) -> Result<Self> {
        let (unique, group, pi) = match j {
            GameJson::Unique { nx, ny, k, perm, pi } => {
                if perm.len() != nx || perm.iter().any(|r| r.len() != ny) {
                    return Err(Error::InvalidGame(format!("perm must be {nx}x{ny} permutations")));
                }
                (UniqueGame::new(nx, ny, k, &perm)?, None, pi)
            }
            GameJson::Group { group, f, pi } => {
                let g = GroupGame::new(group.resolve()?, &f)?;
                (g.unique().clone(), Some(g), pi)
            }
        };
        let (nx, ny) = (unique.nx(), unique.ny());
        let loaded = LoadedGame {
            name: "json".into(),
            unique,
            group,
            digraph: None,
            exact_pi: Some(InputDensity::uniform(nx, ny)),
            pi: InputDensity::uniform(nx, ny),
        };
        match pi {
            Some(rows) => loaded.with_density(&rows),
            None => Ok(loaded),
        }
    }
}

/// Game for a digraph: `f = 2` on arcs, uniform density on edges.
pub fn digraph_game(d: Digraph, name: String) -> Result<LoadedGame> {
    let (g, pi) = game_from_digraph::<Rational64>(&d)?;
    Ok(LoadedGame::from_group(name, g, pi, Some(d)))
}

/// Builds a named game: `chsh:<n>`, `commutator:<group>`, `cycle:<k>`.
pub fn named_game(spec: &str) -> Result<LoadedGame> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("game name {spec:?} has no ':'")))?;
    let number = || -> Result<usize> {
        arg.parse()
            .map_err(|_| Error::Parse(format!("{kind}: expected a positive integer, got {arg:?}")))
    };
    match kind {
        "chsh" => {
            let (g, pi) = make_chsh::<Rational64>(number()?)?;
            Ok(LoadedGame::from_group(spec.into(), g, pi, None))
        }
        "commutator" => {
            let group = FiniteGroup::by_name(arg)?;
            let (g, pi) = make_commutator_game::<Rational64>(&group, None)?;
            Ok(LoadedGame::from_group(spec.into(), g, pi, None))
        }
        "cycle" => digraph_game(directed_cycle(number()?)?, spec.into()),
        _ => Err(Error::Parse(format!(
            "unknown generator {kind:?} (expected chsh:<n>, commutator:<group> or cycle:<k>)"
        ))),
    }
}

/// Parses game text: game JSON, digraph JSON (has `"arcs"`), or an arc list.
pub fn parse_game(text: &str, name: &str) -> Result<LoadedGame> {
    match serde_json::from_str::<serde_json::Value>(text) {
        Ok(value) => {
            if value.get("arcs").is_some() {
                let d: Digraph = serde_json::from_value(value).map_err(|e| Error::Parse(format!("digraph: {e}")))?;
                digraph_game(d, name.into())
            } else {
                let j: GameJson = serde_json::from_value(value).map_err(|e| Error::Parse(format!("game: {e}")))?;
                let mut g = LoadedGame::try_from(j)?;
                g.name = name.into();
                Ok(g)
            }
        }
        Err(json_err) => match Digraph::from_arc_list(text, None) {
            Ok(d) => digraph_game(d, name.into()),
            Err(_) => Err(Error::Parse(format!("not JSON ({json_err}) and not an arc list"))),
        },
    }
}

/// A named generator, or else a path to a file accepted by [`parse_game`].
pub fn load_game(spec: &str) -> Result<LoadedGame> {
    let path = Path::new(spec);
    if !path.exists() && spec.contains(':') {
        return named_game(spec);
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
    parse_game(&text, spec)
}

pub fn parse_density_json(text: &str) -> Result<Vec<Vec<Number>>> {
    let d: DensityJson = serde_json::from_str(text).map_err(|e| Error::Parse(format!("density: {e}")))?;
    Ok(d.pi)
}
