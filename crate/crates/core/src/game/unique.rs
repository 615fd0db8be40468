use crate::algebra::FiniteGroup;
use crate::error::{Error, Result};

/// A unique game `(X, Y, A, f)`: `V(x,y,a,b) = 1 ⇔ a = f(x,y)(b)` with each
/// `f(x,y)` a permutation of the output set `{0..k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueGame {
    nx: usize,
    ny: usize,
    k: usize,
    /// `perm[(x*ny + y)*k + b] = f(x,y)(b)`.
    perm: Vec<usize>,
    /// `inv[(x*ny + y)*k + a] = f(x,y)⁻¹(a)`.
    inv: Vec<usize>,
}

impl UniqueGame {
    /// Builds a game from the permutation table `perm[x][y][b] = f(x,y)(b)`.
    pub fn new(nx: usize, ny: usize, k: usize, perm: &[Vec<Vec<usize>>]) -> Result<Self> {
        if perm.len() != nx || perm.iter().any(|row| row.len() != ny) {
            return Err(Error::InvalidGame(format!(
                "permutation table must be {nx}x{ny}"
            )));
        }
        if perm.iter().flatten().any(|p| p.len() != k) {
            return Err(Error::InvalidGame(format!(
                "every permutation must have {k} entries"
            )));
        }
        Self::from_fn(nx, ny, k, |x, y, b| perm[x][y][b])
    }

    /// Builds a game from `f(x, y, b) = f(x,y)(b)`.
    pub fn from_fn(
        nx: usize,
        ny: usize,
        k: usize,
        f: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        if nx == 0 || ny == 0 || k == 0 {
            return Err(Error::InvalidGame("input and output sets must be non-empty".into()));
        }
        let mut perm = Vec::with_capacity(nx * ny * k);
        let mut inv = vec![usize::MAX; nx * ny * k];
        for x in 0..nx {
            for y in 0..ny {
                let base = (x * ny + y) * k;
                for b in 0..k {
                    let a = f(x, y, b);
                    if a >= k || inv[base + a] != usize::MAX {
                        return Err(Error::InvalidGame(format!(
                            "f({x},{y}) is not a permutation of 0..{k}"
                        )));
                    }
                    inv[base + a] = b;
                    perm.push(a);
                }
            }
        }
        Ok(UniqueGame { nx, ny, k, perm, inv })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Size of the common output set.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_square(&self) -> bool {
        self.nx == self.ny
    }

    /// `f(x,y)(b)`: the unique winning answer for Alice when Bob answers `b`.
    #[inline]
    pub fn apply(&self, x: usize, y: usize, b: usize) -> usize {
        self.perm[(x * self.ny + y) * self.k + b]
    }

    /// `f(x,y)⁻¹(a)`: the unique winning answer for Bob when Alice answers `a`.
    #[inline]
    pub fn apply_inv(&self, x: usize, y: usize, a: usize) -> usize {
        self.inv[(x * self.ny + y) * self.k + a]
    }

    #[inline]
    pub fn verify(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.apply(x, y, b) == a
    }

    pub fn permutation(&self, x: usize, y: usize) -> &[usize] {
        let base = (x * self.ny + y) * self.k;
        &self.perm[base..base + self.k]
    }

    pub fn table(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.nx)
            .map(|x| (0..self.ny).map(|y| self.permutation(x, y).to_vec()).collect())
            .collect()
    }

    /// Square game with `f(x,x)` the identity for every `x`.
    pub fn is_synchronous(&self) -> bool {
        self.is_square()
            && (0..self.nx).all(|x| (0..self.k).all(|b| self.apply(x, x, b) == b))
    }

    /// Synchronous game with `f(y,x) = f(x,y)⁻¹`.
    pub fn is_symmetric(&self) -> bool {
        self.is_synchronous() && self.has_inverse_symmetric_table()
    }

    /// `f(y,x) = f(x,y)⁻¹` for all pairs (no synchronicity required).
    pub fn has_inverse_symmetric_table(&self) -> bool {
        self.is_square()
            && (0..self.nx).all(|x| {
                (0..self.nx).all(|y| (0..self.k).all(|b| self.apply(y, x, b) == self.apply_inv(x, y, b)))
            })
    }

    /// `f(y,x) = f(x,y)` for all pairs.
    pub fn has_symmetric_table(&self) -> bool {
        self.is_square()
            && (0..self.nx)
                .all(|x| (0..self.nx).all(|y| self.permutation(x, y) == self.permutation(y, x)))
    }

    /// Iterator over the winning tuples `(x, y, a, b)`.
    pub fn winning(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        (0..self.nx).flat_map(move |x| {
            (0..self.ny).flat_map(move |y| (0..self.k).map(move |b| (x, y, self.apply(x, y, b), b)))
        })
    }
}

/// A group-based game: outputs are elements of `Ω` and
/// `V(x,y,a,b) = 1 ⇔ a·b⁻¹ = f(x,y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupGame {
    group: FiniteGroup,
    nx: usize,
    ny: usize,
    f: Vec<usize>,
    unique: UniqueGame,
}

impl GroupGame {
    /// `f[x][y]` is the group element attached to the question pair.
    pub fn new(group: FiniteGroup, f: &[Vec<usize>]) -> Result<Self> {
        let nx = f.len();
        let ny = f.first().map_or(0, |r| r.len());
        if nx == 0 || ny == 0 || f.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidGame("f must be a non-empty rectangular table".into()));
        }
        let flat: Vec<usize> = f.iter().flatten().copied().collect();
        Self::from_flat(group, nx, ny, flat)
    }

    pub fn from_fn(
        group: FiniteGroup,
        nx: usize,
        ny: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let flat = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::from_flat(group, nx, ny, flat)
    }

    fn from_flat(group: FiniteGroup, nx: usize, ny: usize, f: Vec<usize>) -> Result<Self> {
        if let Some(bad) = f.iter().find(|&&g| g >= group.order()) {
            return Err(Error::InvalidGame(format!(
                "element {bad} not in group of order {}",
                group.order()
            )));
        }
        // left translation b ↦ f(x,y)·b
        let unique = UniqueGame::from_fn(nx, ny, group.order(), |x, y, b| {
            group.mul(f[x * ny + y], b)
        })?;
        Ok(GroupGame {
            group,
            nx,
            ny,
            f,
            unique,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn f(&self, x: usize, y: usize) -> usize {
        self.f[x * self.ny + y]
    }

    pub fn f_table(&self) -> Vec<Vec<usize>> {
        self.f.chunks(self.ny).map(|r| r.to_vec()).collect()
    }

    /// The game as a unique game acting by left translation.
    pub fn unique(&self) -> &UniqueGame {
        &self.unique
    }

    pub fn is_synchronous(&self) -> bool {
        self.nx == self.ny && (0..self.nx).all(|x| self.f(x, x) == self.group.identity())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_synchronous()
            && (0..self.nx).all(|x| (0..self.nx).all(|y| self.f(y, x) == self.group.inv(self.f(x, y))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group, symmetric_group};

    #[test]
    fn rejects_non_permutations() {
        assert!(UniqueGame::from_fn(1, 1, 2, |_, _, _| 0).is_err());
        assert!(UniqueGame::new(1, 1, 2, &[vec![vec![1, 0, 2]]]).is_err());
        assert!(UniqueGame::new(1, 1, 2, &[vec![vec![1, 0]]]).is_ok());
    }

    #[test]
    fn identity_permutation_verifies_equal_answers() {
        let g = UniqueGame::from_fn(2, 2, 3, |_, _, b| b).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(g.verify(0, 1, a, b), a == b);
            }
        }
        assert!(g.is_synchronous());
        assert!(g.is_symmetric());
    }

    #[test]
    fn group_promotion_matches_group_rule() {
        let s3 = symmetric_group(3).unwrap();
        let gg = GroupGame::from_fn(s3.clone(), 3, 4, |x, y| (x * 5 + y * 2) % 6).unwrap();
        let u = gg.unique();
        for x in 0..3 {
            for y in 0..4 {
                for a in 0..6 {
                    for b in 0..6 {
                        let rule = s3.mul(a, s3.inv(b)) == gg.f(x, y);
                        assert_eq!(u.verify(x, y, a, b), rule);
                    }
                }
            }
        }
    }

    #[test]
    fn group_element_range_checked() {
        let z3 = cyclic_group(3).unwrap();
        assert!(GroupGame::new(z3, &[vec![0, 3]]).is_err());
    }
}
