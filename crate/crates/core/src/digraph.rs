//! Directed graphs and their ℤ₃ group-game encoding.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::cyclic_group;
use crate::error::{Error, Result};
use crate::game::{GroupGame, InputDensity};
use crate::scalar::Scalar;

/// Largest vertex count accepted by [`dcut`].
pub const DCUT_MAX_VERTICES: usize = 16;

/// Loop-free antisymmetric digraph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DigraphJson", into = "DigraphJson")]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    // orient[x*n+y] = 1 if (x,y) ∈ D, -1 if (y,x) ∈ D, 0 otherwise
    orient: Vec<i8>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Self> {
        Digraph::new(j.n, j.arcs.iter().map(|a| (a[0], a[1])))
    }
}

impl From<Digraph> for DigraphJson {
    fn from(g: Digraph) -> Self {
        DigraphJson {
            n: g.n,
            arcs: g.arcs.iter().map(|&(x, y)| [x, y]).collect(),
        }
    }
}

impl Digraph {
    /// Builds a digraph, rejecting loops, out-of-range vertices and
    /// antiparallel pairs. Repeated arcs are merged.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut orient = vec![0i8; n * n];
        let mut list = Vec::new();
        for (x, y) in arcs {
            if x >= n || y >= n {
                return Err(Error::InvalidDigraph(format!("arc ({x},{y}) outside 0..{n}")));
            }
            if x == y {
                return Err(Error::InvalidDigraph(format!("loop at vertex {x}")));
            }
            match orient[x * n + y] {
                1 => continue,
                -1 => {
                    return Err(Error::InvalidDigraph(format!(
                        "both ({x},{y}) and ({y},{x}) present"
                    )))
                }
                _ => {}
            }
            orient[x * n + y] = 1;
            orient[y * n + x] = -1;
            list.push((x, y));
        }
        list.sort_unstable();
        Ok(Digraph { n, arcs: list, orient })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn has_arc(&self, x: usize, y: usize) -> bool {
        self.orient[x * self.n + y] == 1
    }

    /// Whether `{x,y}` is an edge of the underlying undirected graph `E = D ∪ Dᵗ`.
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.orient[x * self.n + y] != 0
    }

    /// `|E| = 2|D|`, counting ordered pairs.
    pub fn edge_count(&self) -> usize {
        2 * self.arcs.len()
    }

    /// Neighbours in `E`, with `+1` for an outgoing arc and `-1` for an incoming one.
    pub fn neighbours(&self, x: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let row = &self.orient[x * self.n..(x + 1) * self.n];
        row.iter()
            .enumerate()
            .filter(|(_, o)| **o != 0)
            .map(|(y, o)| (y, *o))
    }

    /// Parses `x y` pairs, one per line. Blank lines and `#` comments are
    /// skipped. The vertex count is `n` if given, else one more than the
    /// largest index seen.
    pub fn from_arc_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut arcs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {}: bad vertex {s:?}", lineno + 1)))
            };
            if parts.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected \"x y\"", lineno + 1)));
            }
            arcs.push((parse(parts[0])?, parse(parts[1])?));
        }
        let inferred = arcs.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0);
        Digraph::new(n.unwrap_or(inferred), arcs)
    }

    /// Net length of a closed walk: forward arcs minus backward arcs.
    ///
    /// Consecutive vertices, including last-to-first, must be joined by an
    /// edge of `E`.
    pub fn net_length(&self, cycle: &[usize]) -> Result<i64> {
        if cycle.len() < 2 {
            return Err(Error::InvalidDigraph("a cycle needs at least two vertices".into()));
        }
        let mut net = 0i64;
        for i in 0..cycle.len() {
            let (x, y) = (cycle[i], cycle[(i + 1) % cycle.len()]);
            if x >= self.n || y >= self.n || !self.has_edge(x, y) {
                return Err(Error::InvalidDigraph(format!("no edge between {x} and {y}")));
            }
            net += self.orient[x * self.n + y] as i64;
        }
        Ok(net)
    }

    /// Number of arcs `(x,y)` with `w(y) = w(x) + 1 (mod 3)`.
    pub fn satisfied_arcs(&self, w: &[usize]) -> usize {
        self.arcs
            .iter()
            .filter(|&&(x, y)| w[y] % 3 == (w[x] + 1) % 3)
            .count()
    }
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Digraph::from_arc_list(s, None)
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in &self.arcs {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}

/// `C_kᵈ`: arcs `(x, x+1 mod k)`.
pub fn directed_cycle(k: usize) -> Result<Digraph> {
    if k < 3 {
        return Err(Error::OutOfRange {
            what: "directed cycle length",
            value: k,
            allowed: ">= 3".into(),
        });
    }
    Digraph::new(k, (0..k).map(|x| (x, (x + 1) % k)))
}

/// ℤ₃ encoding: `f = 2` on arcs, `1` on reversed arcs, `0` elsewhere, with
/// `π` uniform on `E`.
pub fn game_from_digraph<S: Scalar>(g: &Digraph) -> Result<(GroupGame, InputDensity<S>)> {
    if g.arcs.is_empty() {
        return Err(Error::InvalidDigraph("edge set is empty".into()));
    }
    let n = g.n;
    let game = GroupGame::from_fn(cyclic_group(3)?, n, n, |x, y| match g.orient[x * n + y] {
        1 => 2,
        -1 => 1,
        _ => 0,
    })?;
    let pi = InputDensity::uniform_on(n, n, |x, y| g.has_edge(x, y))?;
    Ok((game, pi))
}

/// Looks for `w: X → ℤ₃` with `w(y) = w(x) + 1` on every arc.
///
/// Labels each component of `(X, E)` along a BFS tree from its smallest
/// vertex (labelled 0), then checks every edge. Returns the labelling when
/// one exists.
pub fn has_perfect_strategy(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.n;
    let mut w: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if w[root].is_some() {
            continue;
        }
        w[root] = Some(0);
        queue.push_back(root);
        while let Some(x) = queue.pop_front() {
            let wx = w[x].unwrap();
            for (y, o) in g.neighbours(x) {
                let want = (wx as i64 + o as i64).rem_euclid(3) as usize;
                match w[y] {
                    None => {
                        w[y] = Some(want);
                        queue.push_back(y);
                    }
                    Some(wy) if wy != want => return None,
                    _ => {}
                }
            }
        }
    }
    Some(w.into_iter().map(|v| v.unwrap()).collect())
}

/// Exact directed cut number with a maximizing labelling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DcutReport {
    pub value: usize,
    pub arcs: usize,
    pub labelling: Vec<usize>,
    pub explored: u64,
}

/// `DCut(G)`: the largest number of arcs `(x,y)` with `w(y) = w(x)+1` over
/// labellings `w: X → ℤ₃`.
///
/// Depth-first search in BFS vertex order with the undecided-arc count as
/// bound. The first vertex of each component is pinned to 0, which loses
/// nothing since shifting `w` by a constant preserves the count.
pub fn dcut(g: &Digraph) -> Result<DcutReport> {
    let n = g.n;
    if g.arcs.is_empty() {
        return Err(Error::InvalidDigraph("edge set is empty".into()));
    }
    if n > DCUT_MAX_VERTICES {
        return Err(Error::SearchTooLarge {
            size: 3f64.powi(n as i32),
            guard: 3f64.powi(DCUT_MAX_VERTICES as i32),
        });
    }
    // BFS order so that each vertex after a root has an earlier neighbour
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut is_root = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        is_root[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let x = order[i];
            for (y, _) in g.neighbours(x) {
                if !seen[y] {
                    seen[y] = true;
                    order.push(y);
                }
            }
            i += 1;
        }
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // arcs grouped by the later endpoint in the order
    let mut closing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(x, y) in &g.arcs {
        closing[pos[x].max(pos[y])].push((x, y));
    }
    let mut remaining = vec![0usize; n + 1];
    for i in (0..n).rev() {
        remaining[i] = remaining[i + 1] + closing[i].len();
    }

    struct Search<'a> {
        order: &'a [usize],
        is_root: &'a [bool],
        closing: &'a [Vec<(usize, usize)>],
        remaining: &'a [usize],
        w: Vec<usize>,
        best: usize,
        best_w: Vec<usize>,
        explored: u64,
        total: usize,
    }

    impl Search<'_> {
        fn run(&mut self, depth: usize, score: usize) {
            if self.best == self.total {
                return;
            }
            if depth == self.order.len() {
                self.explored += 1;
                if score > self.best {
                    self.best = score;
                    self.best_w = self.w.clone();
                }
                return;
            }
            if score + self.remaining[depth] <= self.best {
                return;
            }
            let v = self.order[depth];
            let labels = if self.is_root[v] { 1 } else { 3 };
            for c in 0..labels {
                self.w[v] = c;
                let gained = self.closing[depth]
                    .iter()
                    .filter(|&&(x, y)| self.w[y] == (self.w[x] + 1) % 3)
                    .count();
                self.run(depth + 1, score + gained);
            }
        }
    }

    let mut s = Search {
        order: &order,
        is_root: &is_root,
        closing: &closing,
        remaining: &remaining,
        w: vec![0; n],
        best: 0,
        best_w: vec![0; n],
        explored: 0,
        total: g.arcs.len(),
    };
    s.run(0, 0);
    Ok(DcutReport {
        value: s.best,
        arcs: g.arcs.len(),
        labelling: s.best_w,
        explored: s.explored,
    })
}
