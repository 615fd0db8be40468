use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted from a multiplication table.
pub const MAX_GROUP_ORDER: usize = 5040;

/// Associativity is checked exhaustively up to this order.
const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// A finite group given by its multiplication table.
///
/// Elements are the indices `0..order`; `table[g * order + h]` is the index of `g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
    name: Option<String>,
}

impl FiniteGroup {
    /// Builds a group from a full multiplication table, validating the group axioms.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if m > MAX_GROUP_ORDER {
            return Err(Error::OutOfRange {
                what: "group order",
                value: m,
                allowed: format!("1..={MAX_GROUP_ORDER}"),
            });
        }
        let mut flat = Vec::with_capacity(m * m);
        for (g, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidGroup(format!(
                    "row {g} has {} entries, expected {m}",
                    row.len()
                )));
            }
            flat.extend_from_slice(row);
        }
        let labels = (0..m).map(|g| g.to_string()).collect();
        Self::from_flat(m, flat, labels, None)
    }

    fn from_flat(
        m: usize,
        table: Vec<usize>,
        labels: Vec<String>,
        name: Option<String>,
    ) -> Result<Self> {
        if let Some(bad) = table.iter().find(|&&e| e >= m) {
            return Err(Error::InvalidGroup(format!("entry {bad} out of range")));
        }
        // Latin square: every row and column is a permutation.
        for g in 0..m {
            let mut row_seen = vec![false; m];
            let mut col_seen = vec![false; m];
            for h in 0..m {
                row_seen[table[g * m + h]] = true;
                col_seen[table[h * m + g]] = true;
            }
            if row_seen.iter().any(|s| !s) {
                return Err(Error::InvalidGroup(format!("row {g} is not a permutation")));
            }
            if col_seen.iter().any(|s| !s) {
                return Err(Error::InvalidGroup(format!("column {g} is not a permutation")));
            }
        }
        let identity = (0..m)
            .find(|&e| (0..m).all(|g| table[e * m + g] == g && table[g * m + e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; m];
        for g in 0..m {
            inverse[g] = (0..m)
                .find(|&h| table[g * m + h] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
        }
        let group = FiniteGroup {
            order: m,
            table,
            identity,
            inverse,
            labels,
            name,
        };
        if m <= ASSOCIATIVITY_CHECK_LIMIT {
            if let Some((g, h, k)) = group.associativity_violation() {
                return Err(Error::InvalidGroup(format!(
                    "not associative at ({g}, {h}, {k})"
                )));
            }
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Human-readable label of an element (one-line notation for symmetric groups).
    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn inverses(&self) -> &[usize] {
        &self.inverse
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// `g·h·g⁻¹·h⁻¹`.
    pub fn commutator(&self, g: usize, h: usize) -> usize {
        let gh = self.mul(g, h);
        let gh_ginv = self.mul(gh, self.inv(g));
        self.mul(gh_ginv, self.inv(h))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }

    /// Number of ordered pairs `(g, h)` with `gh = hg`.
    pub fn commuting_pairs(&self) -> usize {
        (0..self.order)
            .flat_map(|g| (0..self.order).map(move |h| (g, h)))
            .filter(|&(g, h)| self.mul(g, h) == self.mul(h, g))
            .count()
    }

    /// First triple violating associativity, if any (exhaustive, O(m³)).
    pub fn associativity_violation(&self) -> Option<(usize, usize, usize)> {
        let m = self.order;
        for g in 0..m {
            for h in 0..m {
                let gh = self.mul(g, h);
                for k in 0..m {
                    if self.mul(gh, k) != self.mul(g, self.mul(h, k)) {
                        return Some((g, h, k));
                    }
                }
            }
        }
        None
    }

    /// Looks up a built-in group by name: `Z<n>` or `S<n>`.
    pub fn by_name(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown group name {name:?} (expected Z<n> or S<n>)"));
        let (kind, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let n: usize = rest.parse().map_err(|_| bad())?;
        match kind {
            "Z" | "z" => cyclic_group(n),
            "S" | "s" => symmetric_group(n),
            _ => Err(bad()),
        }
    }
}

/// The cyclic group `(ℤₙ, +)`; element `i` is the residue `i`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroup> {
    if n == 0 || n > MAX_GROUP_ORDER {
        return Err(Error::OutOfRange {
            what: "cyclic group order",
            value: n,
            allowed: format!("1..={MAX_GROUP_ORDER}"),
        });
    }
    let table = (0..n)
        .flat_map(|g| (0..n).map(move |h| (g + h) % n))
        .collect();
    let labels = (0..n).map(|g| g.to_string()).collect();
    FiniteGroup::from_flat(n, table, labels, Some(format!("Z{n}")))
}

/// All permutations of `{0..n}` in lexicographic order of their one-line notation.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let pivot = i - 1;
        let j = (pivot + 1..n).rev().find(|&j| current[j] > current[pivot]).unwrap();
        current.swap(pivot, j);
        current[pivot + 1..].reverse();
    }
    out
}

/// The symmetric group on `n` points, `1 ≤ n ≤ 8`.
///
/// Elements are enumerated in lexicographic order of one-line notation, so
/// element 0 is the identity. The product is composition `(g·h)(i) = g(h(i))`.
pub fn symmetric_group(n: usize) -> Result<FiniteGroup> {
    if !(1..=8).contains(&n) {
        return Err(Error::OutOfRange {
            what: "symmetric group degree",
            value: n,
            allowed: "1..=8".into(),
        });
    }
    let perms = permutations_lex(n);
    let index: std::collections::HashMap<Vec<usize>, usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let m = perms.len();
    let mut table = vec![0; m * m];
    for (gi, g) in perms.iter().enumerate() {
        for (hi, h) in perms.iter().enumerate() {
            let gh: Vec<usize> = h.iter().map(|&i| g[i]).collect();
            table[gi * m + hi] = index[&gh];
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(""))
        .collect();
    FiniteGroup::from_flat(m, table, labels, Some(format!("S{n}")))
}

/// JSON form of a group: `{"order": m, "table": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GroupJson {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl From<&FiniteGroup> for GroupJson {
    fn from(g: &FiniteGroup) -> Self {
        GroupJson {
            order: g.order(),
            table: g.table_rows(),
        }
    }
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = Error;

    fn try_from(json: GroupJson) -> Result<Self> {
        if json.table.len() != json.order {
            return Err(Error::InvalidGroup(format!(
                "order {} but table has {} rows",
                json.order,
                json.table.len()
            )));
        }
        FiniteGroup::from_table(json.table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn element(g: &FiniteGroup, one_line: &str) -> usize {
        (0..g.order()).find(|&e| g.label(e) == one_line).unwrap()
    }

    #[test]
    fn trivial_groups() {
        let z1 = cyclic_group(1).unwrap();
        assert_eq!(z1.table_rows(), vec![vec![0]]);
        let s1 = symmetric_group(1).unwrap();
        assert_eq!(s1.order(), 1);
        assert_eq!(s1.identity(), 0);
    }

    #[test]
    fn z3_arithmetic() {
        let z3 = cyclic_group(3).unwrap();
        assert_eq!(z3.mul(1, 2), 0);
        assert_eq!(z3.inv(1), 2);
        assert_eq!(z3.associativity_violation(), None);
        assert_eq!(z3.commutator(1, 2), 0);
    }

    #[test]
    fn s3_order_and_commuting_pairs() {
        let s3 = symmetric_group(3).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.commuting_pairs(), 18);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn s3_commutator_of_flip_and_rotation() {
        let s3 = symmetric_group(3).unwrap();
        // g: 1→2→3→1, f: fixes 1 and swaps 2,3 (one-line notation).
        let g = element(&s3, "231");
        let f = element(&s3, "132");
        let c = s3.commutator(f, g);
        assert_ne!(c, s3.identity());
        // a non-identity 3-cycle has order 3
        assert_eq!(s3.mul(c, s3.mul(c, c)), s3.identity());
        assert_ne!(s3.mul(c, c), s3.identity());
        for x in 0..6 {
            assert_eq!(s3.commutator(x, x), s3.identity());
        }
    }

    #[test]
    fn symmetric_group_range_guard() {
        assert!(symmetric_group(0).is_err());
        assert!(symmetric_group(9).is_err());
        assert_eq!(symmetric_group(4).unwrap().order(), 24);
    }

    #[test]
    fn built_in_groups_are_associative() {
        for n in 1..=24 {
            assert_eq!(cyclic_group(n).unwrap().associativity_violation(), None);
        }
        for n in 1..=4 {
            let g = symmetric_group(n).unwrap();
            assert_eq!(g.associativity_violation(), None);
            for e in 0..g.order() {
                assert_eq!(g.mul(e, g.inv(e)), g.identity());
            }
        }
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(vec![vec![0, 0], vec![1, 1]]).is_err());
        // Latin square without associativity (order-5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            FiniteGroup::from_table(loop5),
            Err(Error::InvalidGroup(_))
        ));
    }

    #[test]
    fn names_and_json() {
        assert_eq!(FiniteGroup::by_name("Z5").unwrap().order(), 5);
        assert_eq!(FiniteGroup::by_name("S3").unwrap().order(), 6);
        assert!(FiniteGroup::by_name("Q8").is_err());
        let s3 = symmetric_group(3).unwrap();
        let json = GroupJson::from(&s3);
        let back = FiniteGroup::try_from(json).unwrap();
        assert_eq!(back.table_rows(), s3.table_rows());
    }
}
