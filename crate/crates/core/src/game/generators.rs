use super::{GroupGame, InputDensity};
use crate::algebra::{cyclic_group, FiniteGroup};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default order guard for the commutator game (exhaustive search feasibility).
pub const COMMUTATOR_MAX_ORDER: usize = 24;

/// Generalized CHSH over `ℤₙ`: `V(x,y,a,b) = 1 ⇔ a − b = x·y (mod n)`, uniform `π`.
pub fn make_chsh<S: Scalar>(n: usize) -> Result<(GroupGame, InputDensity<S>)> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "CHSH modulus",
            value: n,
            allowed: ">= 2".into(),
        });
    }
    let game = GroupGame::from_fn(cyclic_group(n)?, n, n, |x, y| (x * y) % n)?;
    Ok((game, InputDensity::uniform(n, n)))
}

/// Commutator game on `Ω`: questions and answers are group elements,
/// `f(x,y) = x·y·x⁻¹·y⁻¹`, uniform `π`.
///
/// `max_order` overrides the default guard of [`COMMUTATOR_MAX_ORDER`].
pub fn make_commutator_game<S: Scalar>(
    group: &FiniteGroup,
    max_order: Option<usize>,
) -> Result<(GroupGame, InputDensity<S>)> {
    let guard = max_order.unwrap_or(COMMUTATOR_MAX_ORDER);
    let m = group.order();
    if m > guard {
        return Err(Error::OutOfRange {
            what: "commutator game group order",
            value: m,
            allowed: format!("1..={guard}"),
        });
    }
    let game = GroupGame::from_fn(group.clone(), m, m, |x, y| group.commutator(x, y))?;
    Ok((game, InputDensity::uniform(m, m)))
}
