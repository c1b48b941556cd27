//! Random boundary triples: Green identity, symmetry of the Weyl family,
//! the β-shifted triple and the resolvent identities.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kreinrel::boundary::{gamma_difference_residual, isometry_residual, krein_naimark_residual};
use kreinrel::generate::{gen_symmetric, gen_triple, SymmetricSpec};
use kreinrel::linalg::{self, C64};
use kreinrel::{relation, BoundaryTriple, KreinSpace, Relation};

use super::{run_trials, RESIDUAL};
use crate::report::{Check, Report};

const GREEN: f64 = 1e-10;

pub fn run(trials: usize, seed: u64, grid: &[C64]) -> Report {
    run_trials("boundary", trials, seed, |rng, _| trial(rng, grid))
}

fn trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut green = Check::new("green_identity");
    let mut ju = Check::new("weyl_conjugate_symmetry");
    let mut shift = Check::new("beta_shifted_weyl");
    let mut resolvent = Check::new("resolvent_identities");
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(0..=n);
    let d = rng.gen_range(1..n);
    let shape = format!("signature ({p},{}) defect {d}", n - p);
    let triple = gen_symmetric(&SymmetricSpec::new(p, n - p, d), rng).and_then(|i| gen_triple(&i.t, rng));
    let tr = match triple {
        Ok(t) => t,
        Err(e) => {
            green.record(false, 0.0, || format!("{shape}: {e}"));
            return vec![green, ju, shift, resolvent];
        }
    };
    let g = tr.green_residual();
    green.bound(g, GREEN, || format!("{shape}: Green residual {g:.2e}"));
    conjugate_symmetry(&tr, grid, &shape, &mut ju);
    beta_shift(&tr, grid, &shape, &mut shift);
    identities(&tr, grid, &shape, &mut resolvent);
    vec![green, ju, shift, resolvent]
}

/// `M(z)^* = M(z̄)`: as matrices where both are operators, as relations
/// everywhere.
fn conjugate_symmetry(tr: &BoundaryTriple, grid: &[C64], shape: &str, check: &mut Check) {
    for &z in grid {
        let (m, mbar) = (tr.weyl(z), tr.weyl(z.conj()));
        let rel = relation::distance(&m.hilbert_adjoint(), &mbar);
        let mat = match (m.to_matrix(), mbar.to_matrix()) {
            (Some(a), Some(b)) => linalg::max_abs(&(a.adjoint() - b)),
            _ => 0.0,
        };
        check.bound(rel.max(mat), RESIDUAL, || format!("{shape} z {z}: relation {rel:.2e}, matrix {mat:.2e}"));
    }
}

/// `M_{Γ^β}(z) = M_Γ(z) - β`.
fn beta_shift(tr: &BoundaryTriple, grid: &[C64], shape: &str, check: &mut Check) {
    let shifted = tr.beta().and_then(|b| tr.beta_shift().map(|s| (b, s)));
    let (beta, shifted) = match shifted {
        Ok(x) => x,
        Err(e) => {
            check.record(false, 0.0, || format!("{shape}: {e}"));
            return;
        }
    };
    for &z in grid {
        match (tr.weyl_matrix(z), shifted.weyl_matrix(z)) {
            (Ok(m), Ok(ms)) => {
                let r = linalg::max_abs(&(ms - (m - &beta)));
                check.bound(r, RESIDUAL, || format!("{shape} z {z}: residual {r:.2e}"));
            }
            _ => {
                let l = KreinSpace::euclidean(tr.boundary_dim());
                let minus_beta = Relation::from_operator(&l, &l, &(-&beta)).expect("square");
                let expected = tr.weyl(z).op_sum(&minus_beta);
                let r = match expected {
                    Ok(e) => super::angle(e.graph(), shifted.weyl(z).graph()),
                    Err(_) => f64::MAX,
                };
                check.bound(r, RESIDUAL, || format!("{shape} z {z}: relation residual {r:.2e}"));
            }
        }
    }
}

/// Krein–Naimark formula, the γ-field difference identity and the
/// isometry identity at grid points regular for both kernels.
fn identities(tr: &BoundaryTriple, grid: &[C64], shape: &str, check: &mut Check) {
    let (t0, t1) = (tr.t0(), tr.t1());
    for &z in grid {
        if !kreinrel::extensions::regular(&t0, z) || !kreinrel::extensions::regular(&t1, z) {
            continue;
        }
        if let Ok(r) = krein_naimark_residual(tr, z) {
            check.bound(r, RESIDUAL, || format!("{shape} z {z}: resolvent formula {r:.2e}"));
        }
        for &z0 in grid {
            if !kreinrel::extensions::regular(&t0, z0) {
                continue;
            }
            let r1 = gamma_difference_residual(tr, z, z0).unwrap_or(f64::MAX);
            let r2 = if kreinrel::extensions::regular(&t0, z.conj()) {
                isometry_residual(tr, z, z0).unwrap_or(f64::MAX)
            } else {
                0.0
            };
            check.bound(r1.max(r2), RESIDUAL, || {
                format!("{shape} z {z} z0 {z0}: γ difference {r1:.2e}, isometry {r2:.2e}")
            });
        }
    }
}
