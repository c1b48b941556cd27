//! Small hand-built relations where the finite-dimensional behaviour of
//! property (P) and of eigenspaces of sums can be read off directly.

use kreinrel::extensions::{self, property_p};
use kreinrel::linalg::{self, c, CMat};
use kreinrel::{subspace, KreinSpace, Relation, Subspace};

fn unit(n: usize, k: usize) -> CMat {
    linalg::eye(n).columns(k, 1).into_owned()
}

/// `T = span{(e1, e2)}` in `C^2` with `J = I`.
fn shift_c2() -> Relation {
    let space = KreinSpace::euclidean(2);
    Relation::from_pairs(&space, &space, &unit(2, 0), &unit(2, 1)).unwrap()
}

#[test]
fn property_p_does_not_force_an_operator_adjoint() {
    let t = shift_c2();
    assert!(t.is_symmetric());
    assert!(property_p(&t));
    let adj = t.adjoint();
    assert!(!adj.is_operator());
    assert!(subspace::equal(&adj.multivalued(), &Subspace::span(&unit(2, 1)).unwrap()));
    let meet = subspace::intersect(&adj.multivalued(), &adj.kernel());
    assert!(meet.is_zero());
}

#[test]
fn shift_eigenspaces_are_pairwise_disjoint() {
    let adj = shift_c2().adjoint();
    let points = [c(0.0, 1.0), c(1.0, -1.0), c(-2.0, 0.5)];
    for (i, &z) in points.iter().enumerate() {
        for &w in &points[i + 1..] {
            assert!(subspace::intersect(&adj.eigenspace(z), &adj.eigenspace(w)).is_zero(), "{z} {w}");
        }
    }
}

#[test]
fn common_eigenvector_without_property_p() {
    // T = {(0, 0)} ⊕ span{(e1, e1)} in C^3: dom T + ran T = span{e1}.
    let space = KreinSpace::euclidean(3);
    let t = Relation::from_pairs(&space, &space, &unit(3, 0), &unit(3, 0)).unwrap();
    assert!(!property_p(&t));
    let adj = t.adjoint();
    let e2 = Subspace::span(&unit(3, 1)).unwrap();
    assert!(subspace::contains(&adj.multivalued(), &e2) && subspace::contains(&adj.kernel(), &e2));
    for z in [c(0.0, 1.0), c(3.0, -1.0)] {
        assert!(subspace::contains(&adj.eigenspace(z), &e2));
    }
}

#[test]
fn eigenspace_of_sum_with_zero_relation() {
    let space = KreinSpace::diagonal(1, 1);
    let g = Relation::scalar(&space, c(2.0, 0.0));
    let zero = Relation::zero_relation(&space, &space);
    let sum = g.op_sum(&zero).unwrap();
    assert_eq!(sum.dim(), 0);
    let (cw, orthogonal) = g.cw_sum(&zero).unwrap();
    assert!(orthogonal);
    for z in [c(2.0, 0.0), c(0.0, 1.0)] {
        assert!(subspace::equal(&cw.eigenspace(z), &g.eigenspace(z)));
    }
    assert!(extensions::regular(&g, c(0.0, 1.0)));
    assert!(!extensions::regular(&g, c(2.0, 0.0)));
}
