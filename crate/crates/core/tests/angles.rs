//! Subspace distance against closed forms and a power-iteration oracle.

use proptest::prelude::*;

use kreinrel::generate::{gaussian, trial_rng};
use kreinrel::linalg::{self, c, CMat};
use kreinrel::{subspace, Subspace};

fn line(theta: f64) -> Subspace {
    Subspace::span(&CMat::from_row_slice(2, 1, &[c(theta.cos(), 0.0), c(theta.sin(), 0.0)])).unwrap()
}

/// Largest singular value by power iteration on `M^H M`.
fn power_norm(m: &CMat) -> f64 {
    let mtm = m.adjoint() * m;
    let mut v = CMat::from_fn(mtm.ncols(), 1, |i, _| c(1.0 + i as f64, 0.5));
    let mut lambda = 0.0;
    for _ in 0..2000 {
        let w = &mtm * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        lambda = n / v.norm();
        v = w / c(n, 0.0);
    }
    lambda.sqrt()
}

#[test]
fn lines_at_known_angles() {
    for theta in [0.0, 1e-12, 1e-9, 1e-4, 0.3, 1.0, 1.5, std::f64::consts::FRAC_PI_2] {
        let d = subspace::distance(&line(0.0), &line(theta));
        assert!((d - theta).abs() <= 1e-15 + 1e-9 * theta, "θ {theta}: {d}");
    }
}

#[test]
fn tiny_angles_are_resolved() {
    let d = subspace::distance(&line(0.2), &line(0.2 + 1e-11));
    assert!((d - 1e-11).abs() < 1e-14, "{d}");
    assert!(subspace::equal(&line(0.2), &line(0.2 + 1e-11)));
    assert!(!subspace::equal(&line(0.2), &line(0.2 + 1e-6)));
}

#[test]
fn dimension_mismatch_is_infinite() {
    let plane = Subspace::full(2);
    assert_eq!(subspace::distance(&line(0.0), &plane), f64::INFINITY);
    assert!(subspace::contains(&plane, &line(0.7)));
    assert!(!subspace::contains(&line(0.7), &plane));
    assert_eq!(subspace::containment_angle(&plane, &line(0.7)), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `sin θ_max = ‖(I - P_A) P_B‖` for subspaces of equal dimension.
    #[test]
    fn largest_angle_matches_projector_norm(seed in any::<u64>(), n in 2usize..7, k in 1usize..4) {
        let k = k.min(n - 1);
        let mut rng = trial_rng(seed, 0);
        let a = Subspace::span(&gaussian(n, k, &mut rng)).unwrap();
        let b = Subspace::span(&gaussian(n, k, &mut rng)).unwrap();
        let resid = (linalg::eye(n) - a.projector()) * b.projector();
        let expected = power_norm(&resid).min(1.0).asin();
        let d = subspace::distance(&a, &b);
        prop_assert!((d - expected).abs() < 1e-7, "{} vs {}", d, expected);
        prop_assert!((subspace::distance(&b, &a) - d).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_complement_is_at_right_angles(seed in any::<u64>(), n in 2usize..7, k in 1usize..6) {
        let k = k.min(n - 1);
        let mut rng = trial_rng(seed, 1);
        let a = Subspace::span(&gaussian(n, k, &mut rng)).unwrap();
        let comp = subspace::complement(&a);
        prop_assert!(subspace::orthogonal(&a, &comp));
        prop_assert_eq!(comp.dim() + a.dim(), n);
        prop_assert!(subspace::equal(&subspace::complement(&comp), &a));
    }
}
