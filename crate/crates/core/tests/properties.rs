//! Invariants of relations, extensions, boundary triples and similarity on
//! seeded random instances.

use proptest::prelude::*;

use kreinrel::boundary::{gamma_difference_residual, krein_naimark_residual, weyl_symmetry_residual};
use kreinrel::extensions::{self, default_grid};
use kreinrel::generate::{
    gaussian, gen_standard_unitary, gen_symmetric, gen_triple, random_self_adjoint, random_space, trial_rng,
    SymmetricSpec,
};
use kreinrel::krein::{self, ortho_companion};
use kreinrel::linalg::{self, c};
use kreinrel::similarity::{reconstruct_similarity, SimilarityOutcome};
use kreinrel::{relation, subspace, Error, KreinSpace, Relation, Subspace};

fn signature() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6).prop_flat_map(|n| (0..=n).prop_map(move |p| (p, n - p)))
}

fn random_relation(space: &KreinSpace, k: usize, seed: u64) -> Relation {
    let mut rng = trial_rng(seed, 7);
    let n = space.dim();
    Relation::in_space(space, Subspace::span(&gaussian(2 * n, k.min(2 * n), &mut rng)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjoint_is_an_involution((p, q) in signature(), k in 0usize..12, seed in any::<u64>()) {
        let space = random_space(p, q, &mut trial_rng(seed, 0));
        let t = random_relation(&space, k, seed);
        let tp = t.adjoint();
        prop_assert_eq!(t.dim() + tp.dim(), 2 * space.dim());
        prop_assert!(relation::equal(&tp.adjoint(), &t));
        prop_assert!(subspace::equal(tp.graph(), &ortho_companion(&space.doubled(), t.graph())));
        // mul T^+ = J (dom T)^⊥
        let expected = subspace::image(space.j(), &subspace::complement(&t.domain()));
        prop_assert!(subspace::equal(&tp.multivalued(), &expected));
    }

    #[test]
    fn inverse_swaps_parts((p, q) in signature(), k in 0usize..12, seed in any::<u64>()) {
        let space = random_space(p, q, &mut trial_rng(seed, 0));
        let t = random_relation(&space, k, seed);
        let inv = t.inverse();
        prop_assert!(subspace::equal(&inv.domain(), &t.range()));
        prop_assert!(subspace::equal(&inv.kernel(), &t.multivalued()));
        prop_assert!(relation::equal(&inv.inverse(), &t));
        prop_assert!(relation::equal(&inv.adjoint(), &t.adjoint().inverse()));
    }

    #[test]
    fn composition_inverts_in_reverse_order((p, q) in signature(), k in 1usize..12, seed in any::<u64>()) {
        let space = random_space(p, q, &mut trial_rng(seed, 0));
        let s = random_relation(&space, k, seed);
        let t = random_relation(&space, k, seed ^ 0x55);
        let st = s.compose(&t).unwrap();
        let rev = t.inverse().compose(&s.inverse()).unwrap();
        prop_assert!(relation::equal(&st.inverse(), &rev));
    }

    #[test]
    fn self_adjoint_generators((p, q) in signature(), multivalued in any::<bool>(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let space = random_space(p, q, &mut rng);
        let a = random_self_adjoint(&space, multivalued, &mut rng).unwrap();
        prop_assert!(a.is_self_adjoint());
        prop_assert_eq!(a.dim(), space.dim());
        let nt = krein::neutrality(&space.doubled(), a.graph());
        prop_assert!(nt.hyper_maximal);
        if multivalued {
            prop_assert!(!a.multivalued().is_zero());
        }
    }

    #[test]
    fn standard_unitaries_preserve_the_form((p, q) in signature(), seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 3);
        let src = random_space(p, q, &mut rng);
        let tgt = random_space(p, q, &mut rng);
        let u = gen_standard_unitary(&src, &tgt, &mut rng).unwrap();
        prop_assert!(krein::isometry_residual(&src, &tgt, &u) < 1e-10);
        prop_assert!(krein::is_standard_unitary(&src, &tgt, &u));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn symmetric_instances_extend_and_reduce((p, q) in signature(), d in 1usize..6, seed in any::<u64>()) {
        let n = p + q;
        prop_assume!(n >= 2);
        let d = 1 + d % (n - 1);
        let mut rng = trial_rng(seed, 4);
        let inst = gen_symmetric(&SymmetricSpec::new(p, q, d), &mut rng).unwrap();
        let t = &inst.t;
        prop_assert!(t.is_symmetric());
        prop_assert_eq!(t.dim(), n - d);
        prop_assert_eq!(extensions::defect_numbers(t).unwrap(), (d, d));
        let w = extensions::sample_witness(t, &mut rng).unwrap();
        prop_assert!(extensions::n_class_check(t, &w).unwrap().accepted);
        let t0 = extensions::extend(t, &w).unwrap();
        prop_assert!(t0.is_self_adjoint());
        prop_assert!(relation::contained_in(t, &t0) && relation::contained_in(&t0, &t.adjoint()));
        prop_assert!(relation::distance(&extensions::reduce(t, &t0).unwrap(), &w) < 1e-8);
        prop_assert!(extensions::prop_n_audit(t, &w).unwrap().passed(1e-8));
    }

    #[test]
    fn boundary_triples_satisfy_their_identities((p, q) in signature(), d in 1usize..6, seed in any::<u64>()) {
        let n = p + q;
        prop_assume!(n >= 2);
        let d = 1 + d % (n - 1);
        let mut rng = trial_rng(seed, 5);
        let inst = gen_symmetric(&SymmetricSpec::new(p, q, d), &mut rng).unwrap();
        let tr = gen_triple(&inst.t, &mut rng).unwrap();
        prop_assert_eq!(tr.boundary_dim(), d);
        prop_assert!(tr.green_residual() < 1e-10);
        prop_assert!(tr.t0().is_self_adjoint() && tr.t1().is_self_adjoint());
        let grid = default_grid();
        for &z in &grid {
            prop_assert!(weyl_symmetry_residual(&tr, z) < 1e-8);
            if extensions::regular(&tr.t0(), z) {
                prop_assert!(gamma_difference_residual(&tr, z, grid[0]).map_or(true, |r| r < 1e-8));
                if extensions::regular(&tr.t1(), z) {
                    prop_assert!(krein_naimark_residual(&tr, z).unwrap() < 1e-8);
                }
            }
        }
        let back = tr.transpose().unwrap().transpose().unwrap();
        let flipped = linalg::max_abs(&(back.ambient() + tr.ambient()));
        prop_assert!(flipped < 1e-10);
    }

    #[test]
    fn planted_similarities_are_recovered((p, q) in signature(), d in 1usize..6, seed in any::<u64>()) {
        let n = p + q;
        prop_assume!(n >= 2);
        let d = 1 + d % (n - 1);
        let mut rng = trial_rng(seed, 6);
        let spec = SymmetricSpec { require_simple: true, ..SymmetricSpec::new(p, q, d) };
        let grid = default_grid();
        let tr = gen_triple(&gen_symmetric(&spec, &mut rng).unwrap().t, &mut rng).unwrap();
        let regular = grid.iter().all(|&z| extensions::regular(&tr.t0(), z) && extensions::regular(&tr.t1(), z));
        prop_assume!(regular);
        let u = gen_standard_unitary(tr.space(), tr.space(), &mut rng).unwrap();
        let moved = tr.transport(&u, tr.space()).unwrap();
        match reconstruct_similarity(&tr, &moved, &grid).unwrap() {
            SimilarityOutcome::Similar(s) => {
                prop_assert!(s.intertwining < 1e-7);
                prop_assert!(krein::is_standard_unitary(tr.space(), tr.space(), &s.u));
            }
            SimilarityOutcome::NotSimilar { z, discrepancy } => {
                prop_assert!(false, "rejected at {} ({})", z, discrepancy);
            }
        }
        let scaled = tr.scaled(2.0).unwrap();
        let rejected = matches!(
            reconstruct_similarity(&tr, &scaled, &grid).unwrap(),
            SimilarityOutcome::NotSimilar { discrepancy, .. } if discrepancy > 1e-3
        );
        prop_assert!(rejected);
    }
}

#[test]
fn zero_defect_gives_a_self_adjoint_relation() {
    let mut rng = trial_rng(9, 0);
    let inst = gen_symmetric(&SymmetricSpec::new(2, 1, 0), &mut rng).unwrap();
    assert!(inst.t.is_self_adjoint());
    assert!(gen_triple(&inst.t, &mut rng).is_err());
}

#[test]
fn signature_mismatch_is_reported() {
    let mut rng = trial_rng(9, 1);
    let out = gen_standard_unitary(&KreinSpace::diagonal(2, 1), &KreinSpace::diagonal(1, 2), &mut rng);
    assert!(matches!(out, Err(Error::SignatureMismatch(..))));
}

#[test]
fn fundamental_symmetry_is_validated() {
    assert!(matches!(KreinSpace::new(linalg::eye(2) * c(2.0, 0.0)), Err(Error::NotInvolution(_))));
    let mut nh = linalg::eye(2);
    nh[(0, 1)] = c(0.0, 1.0);
    assert!(KreinSpace::new(nh).is_err());
}

#[test]
fn scalar_and_zero_relations() {
    let space = KreinSpace::diagonal(1, 2);
    let z = c(0.5, -2.0);
    let s = Relation::scalar(&space, z);
    assert!(s.is_operator());
    assert!(subspace::equal(&s.eigenspace(z), &Subspace::full(3)));
    assert!(Relation::scalar(&space, c(1.5, 0.0)).is_self_adjoint());
    let zero = Relation::zero_relation(&space, &space);
    assert_eq!(zero.dim(), 0);
    assert_eq!(zero.adjoint().dim(), 6);
}
