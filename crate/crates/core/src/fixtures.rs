//! A four-dimensional Pontryagin space with the flip symmetry, a one-dimensional
//! simple symmetric operator in it, and an explicit boundary triple for its
//! adjoint.

use crate::boundary::BoundaryTriple;
use crate::error::Result;
use crate::krein::KreinSpace;
use crate::linalg::{self, CMat};
use crate::relation::Relation;
use crate::subspace::Subspace;

/// `J(c1, c2, c3, c4) = (c4, c3, c2, c1)`.
pub fn flip_space() -> KreinSpace {
    let mut j = linalg::zeros(4, 4);
    for k in 0..4 {
        j[(k, 3 - k)] = linalg::ONE;
    }
    KreinSpace::new(j).expect("flip is a fundamental symmetry")
}

/// `T = {((c, 0, 0, 0), (0, c, 0, 0))}`.
pub fn shift_operator() -> Relation {
    let mut v = linalg::zeros(8, 1);
    v[(0, 0)] = linalg::ONE;
    v[(5, 0)] = linalg::ONE;
    Relation::in_space(&flip_space(), Subspace::span(&v).expect("finite")).expect("dims match")
}

/// `Γ0(f, g) = (f1 - g2, f2, f4)`, `Γ1(f, g) = (f3, g3, g1)` as a `6 × 8` matrix.
pub fn flip_gamma() -> CMat {
    let mut g = linalg::zeros(6, 8);
    let one = linalg::ONE;
    g[(0, 0)] = one;
    g[(0, 5)] = -one;
    g[(1, 1)] = one;
    g[(2, 3)] = one;
    g[(3, 2)] = one;
    g[(4, 6)] = one;
    g[(5, 4)] = one;
    g
}

pub fn flip_triple() -> Result<BoundaryTriple> {
    BoundaryTriple::from_ambient(&shift_operator(), &flip_gamma())
}
