use num_complex::Complex64;

use crate::algebra::Matrix;
use crate::error::{Error, Result};
use crate::game::{GroupGame, InputDensity};

const ORDER3_TOL: f64 = 1e-8;

/// `ξ = e^{2πi/3}`.
pub fn xi() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
}

/// Checks that `group` is ℤ₃ with element `j` standing for `ξʲ`.
fn check_z3(g: &GroupGame) -> Result<()> {
    let grp = g.group();
    let ok = grp.order() == 3 && (0..3).all(|i| (0..3).all(|j| grp.mul(i, j) == (i + j) % 3));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidGame("unitary value needs the group Z3 with elements 0, 1, 2 under addition".into()))
    }
}

/// Validates that `u` is unitary and `u³ = I`, both within `1e-8`.
pub fn check_order3_unitary(u: &Matrix<Complex64>) -> Result<()> {
    if !u.is_square() {
        return Err(Error::InvalidUnitary("not square".into()));
    }
    let defect = u.unitarity_defect();
    if defect > ORDER3_TOL {
        return Err(Error::InvalidUnitary(format!("UᴴU differs from I by {defect:e}")));
    }
    let cube = u.matmul(u).matmul(u);
    let err = cube.sub(&Matrix::identity(u.rows())).max_modulus();
    if err > ORDER3_TOL {
        return Err(Error::InvalidUnitary(format!("U³ differs from I by {err:e}")));
    }
    Ok(())
}

/// `1/3 + (1/3) Σ π(x,y) · 2 Re(ξ^{f(x,y)} tr(U_xᴴ U_y) / d)` for order-3
/// unitaries `U_x`: the normalized trace of the game polynomial, a lower
/// bound on the synchronous qc-value.
pub fn unitary_value_z3(g: &GroupGame, pi: &InputDensity<f64>, unitaries: &[Matrix<Complex64>]) -> Result<f64> {
    check_z3(g)?;
    if g.nx() != g.ny() {
        return Err(Error::NotSquare { nx: g.nx(), ny: g.ny() });
    }
    if unitaries.len() != g.nx() || (pi.nx(), pi.ny()) != (g.nx(), g.ny()) {
        return Err(Error::ShapeMismatch(format!("{} unitaries for {} questions", unitaries.len(), g.nx())));
    }
    let d = unitaries[0].rows();
    for (x, u) in unitaries.iter().enumerate() {
        if u.rows() != d {
            return Err(Error::ShapeMismatch(format!("unitary {x} has size {}, expected {d}", u.rows())));
        }
        check_order3_unitary(u).map_err(|e| match e {
            Error::InvalidUnitary(m) => Error::InvalidUnitary(format!("U_{x}: {m}")),
            other => other,
        })?;
    }
    let mut total = 1.0 / 3.0;
    for x in 0..g.nx() {
        for y in 0..g.ny() {
            let w = *pi.get(x, y);
            if w == 0.0 {
                continue;
            }
            let tr = unitaries[x].adjoint().matmul(&unitaries[y]).trace();
            total += w * 2.0 * (xi().powu(g.f(x, y) as u32) * tr).re / (3.0 * d as f64);
        }
    }
    Ok(total)
}

/// `U_x = ξ^{w(x)} I_d`: the scalar unitaries of a deterministic labelling.
pub fn labelling_unitaries(w: &[usize], d: usize) -> Vec<Matrix<Complex64>> {
    w.iter()
        .map(|&c| Matrix::identity(d).scale(xi().powu(c as u32 % 3)))
        .collect()
}
