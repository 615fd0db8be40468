use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tolerance::Tolerances;

/// Probability density `π` on question pairs `X × Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDensity<S> {
    nx: usize,
    ny: usize,
    pi: Vec<S>,
}

impl<S: Scalar> InputDensity<S> {
    /// Validates non-negativity and total mass one (exact for rationals,
    /// within `1e-12` for floats).
    pub fn new(nx: usize, ny: usize, pi: Vec<S>) -> Result<Self> {
        if pi.len() != nx * ny || nx == 0 || ny == 0 {
            return Err(Error::InvalidDensity(format!(
                "expected {} entries for a {nx}x{ny} density, got {}",
                nx * ny,
                pi.len()
            )));
        }
        if let Some((i, _)) = pi.iter().enumerate().find(|(_, p)| **p < S::zero()) {
            return Err(Error::InvalidDensity(format!(
                "negative entry at ({}, {})",
                i / ny,
                i % ny
            )));
        }
        let total = crate::scalar::sum(&pi);
        let ok = if S::is_exact() {
            total == S::one()
        } else {
            (total.as_f64() - 1.0).abs() <= Tolerances::DEFAULT.density_sum
        };
        if !ok {
            return Err(Error::InvalidDensity(format!(
                "entries sum to {}, not 1",
                total.as_f64()
            )));
        }
        Ok(InputDensity { nx, ny, pi })
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ny) {
            return Err(Error::InvalidDensity("ragged rows".into()));
        }
        Self::new(nx, ny, rows.iter().flatten().cloned().collect())
    }

    pub fn uniform(nx: usize, ny: usize) -> Self {
        let w = S::from_ratio(1, (nx * ny) as i64);
        InputDensity {
            nx,
            ny,
            pi: vec![w; nx * ny],
        }
    }

    /// Uniform on the pairs where `support(x, y)` holds, zero elsewhere.
    pub fn uniform_on(nx: usize, ny: usize, support: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let count = (0..nx)
            .flat_map(|x| (0..ny).map(move |y| (x, y)))
            .filter(|&(x, y)| support(x, y))
            .count();
        if count == 0 {
            return Err(Error::InvalidDensity("empty support".into()));
        }
        let w = S::from_ratio(1, count as i64);
        let mut pi = Vec::with_capacity(nx * ny);
        for x in 0..nx {
            for y in 0..ny {
                pi.push(if support(x, y) { w.clone() } else { S::zero() });
            }
        }
        Ok(InputDensity { nx, ny, pi })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> &S {
        &self.pi[x * self.ny + y]
    }

    pub fn entries(&self) -> &[S] {
        &self.pi
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.pi.chunks(self.ny).map(|r| r.to_vec()).collect()
    }

    /// `π₀ = min π(x,y)`.
    pub fn min(&self) -> S {
        self.pi
            .iter()
            .skip(1)
            .fold(self.pi[0].clone(), |m, p| if *p < m { p.clone() } else { m })
    }

    pub fn is_supported(&self, x: usize, y: usize) -> bool {
        *self.get(x, y) > S::zero()
    }

    pub fn to_f64(&self) -> InputDensity<f64> {
        InputDensity {
            nx: self.nx,
            ny: self.ny,
            pi: self.pi.iter().map(Scalar::as_f64).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn uniform_is_exact() {
        let d = InputDensity::<Rational64>::uniform(3, 3);
        assert_eq!(*d.get(1, 2), Rational64::new(1, 9));
        assert!(InputDensity::new(3, 3, d.entries().to_vec()).is_ok());
        assert_eq!(d.min(), Rational64::new(1, 9));
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(InputDensity::<f64>::new(1, 2, vec![0.5, 0.6]).is_err());
        assert!(InputDensity::<f64>::new(1, 2, vec![1.5, -0.5]).is_err());
        assert!(InputDensity::<f64>::new(1, 2, vec![0.5]).is_err());
        assert!(InputDensity::<f64>::new(1, 2, vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn support_restricted_density() {
        let d = InputDensity::<Rational64>::uniform_on(2, 2, |x, y| x != y).unwrap();
        assert_eq!(d.rows(), vec![
            vec![Rational64::new(0, 1), Rational64::new(1, 2)],
            vec![Rational64::new(1, 2), Rational64::new(0, 1)],
        ]);
        assert_eq!(d.min(), Rational64::new(0, 1));
    }
}
