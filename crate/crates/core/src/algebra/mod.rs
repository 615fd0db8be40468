//! Finite groups and the dense real/complex linear algebra the solvers use.

mod eigen;
mod group;
mod matrix;

pub use eigen::{
    eig_herm, eig_sym, eig_sym_with_guess, polar_unitary, psd_project, HermEigen, SymEigen,
    MAX_EIG_DIM,
};
pub use group::{
    cyclic_group, permutations_lex, symmetric_group, FiniteGroup, GroupJson, MAX_GROUP_ORDER,
};
pub use matrix::{cdot, dot, HermitianMatrix, Matrix, Real, SymmetricMatrix};
