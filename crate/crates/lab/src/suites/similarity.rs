//! Pairs of boundary triples: the singular part of `V0`, the two membership
//! tests for `𝒱(Γ, Γ')`, the Weyl-equality criterion and reconstruction
//! of a similarity from Weyl families.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kreinrel::fixtures::flip_triple;
use kreinrel::generate::{
    gaussian, gen_standard_unitary, gen_symmetric, gen_triple, random_hermitian, random_invertible, SymmetricSpec,
};
use kreinrel::linalg::{self, c, C64};
use kreinrel::similarity::{
    build_standard_v, build_v_from_tau, operator_membership_criterion, llp_residual, membership, membership_relation,
    reconstruct_similarity, restricted_graph, sigma_unitary_check, v0_operator_part, v0_singular_relation,
    w_maps, weyl_equality_criterion, SimilarityOutcome,
};
use kreinrel::{relation, BoundaryTriple, Error};

use super::{part_seed, run_trials};
use crate::report::{Check, Report};

const SINGULAR_PART: f64 = 1e-9;
const INTERTWINING: f64 = 1e-7;
const OFF_DIAGONAL: f64 = 1e-8;
const DISCREPANCY: f64 = 1e-3;

pub fn run(trials: usize, seed: u64, grid: &[C64]) -> Report {
    Report::merge(
        "similarity",
        seed,
        vec![pairs(trials, seed), weyl_agreement(trials, seed, grid), reconstruction(trials, seed, grid)],
    )
}

/// Two independent triples over the same boundary space.
pub fn pairs(trials: usize, seed: u64) -> Report {
    run_trials("pairs", trials, part_seed(seed, 1), |rng, _| pair_trial(rng))
}

/// Planted standard unitaries and unrelated pairs: containment criterion
/// against direct Weyl-family equality.
pub fn weyl_agreement(trials: usize, seed: u64, grid: &[C64]) -> Report {
    run_trials("weyl_agreement", trials, part_seed(seed, 2), |rng, _| weyl_trial(rng, grid))
}

/// Plant `Γ' = Γ Ũ^{-1}` and recover `U`; trial 0 uses the flip example.
pub fn reconstruction(trials: usize, seed: u64, grid: &[C64]) -> Report {
    run_trials("reconstruction", trials, part_seed(seed, 3), |rng, k| reconstruction_trial(rng, k, grid))
}

fn shape(rng: &mut ChaCha8Rng, max_dim: usize) -> (usize, usize, usize) {
    let n = rng.gen_range(2..=max_dim);
    let p = rng.gen_range(0..=n);
    let d = rng.gen_range(1..n);
    (p, n - p, d)
}

fn triple(p: usize, q: usize, d: usize, rng: &mut ChaCha8Rng) -> kreinrel::Result<BoundaryTriple> {
    let inst = gen_symmetric(&SymmetricSpec::new(p, q, d), rng)?;
    gen_triple(&inst.t, rng)
}

fn pair_trial(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut op = Check::new("singular_part_formula");
    let mut sigma = Check::new("singular_part_unitary");
    let mut llp = Check::new("w_maps_adjoint_inverse");
    let mut routes = Check::new("membership_routes_agree");
    let (p, q, d) = shape(rng, 7);
    let desc = format!("signature ({p},{q}) defect {d}");
    let outcome = (|| -> kreinrel::Result<()> {
        let a = triple(p, q, d, rng)?;
        let b = triple(p, q, d, rng)?;
        let dist = relation::distance(&v0_operator_part(&a, &b)?, &v0_singular_relation(&a, &b)?);
        op.bound(dist, SINGULAR_PART, || format!("{desc}: operator part vs formula {dist:.2e}"));
        let su = sigma_unitary_check(&a, &b)?;
        let worst = su.gram.max(su.image_distance).max(su.inverse);
        sigma.bound(worst, SINGULAR_PART, || {
            format!("{desc}: Gram {:.2e}, image {:.2e}, inverse {:.2e}", su.gram, su.image_distance, su.inverse)
        });
        let w = w_maps(&a, &b)?;
        let w1 = linalg::inverse(&w.w0.adjoint()).ok_or(Error::RestrictedSingular)?;
        let r = linalg::max_abs(&(w1 - &w.w1)).max(llp_residual(&a, &b)?);
        llp.bound(r, SINGULAR_PART, || format!("{desc}: residual {r:.2e}"));

        let tau = random_invertible(a.t().dim(), rng);
        let v = build_v_from_tau(&a, &b, &tau)?;
        let mut perturbed = v.clone();
        perturbed[(0, 0)] += c(1e-3, 0.0);
        for (label, m) in [("built", &v), ("perturbed", &perturbed)] {
            let by_relation = membership_relation(&restricted_graph(m, &a, &b)?, &a, &b)?;
            let by_criterion = operator_membership_criterion(m, &a, &b)?;
            routes.record(by_relation == by_criterion, 0.0, || {
                format!("{desc} {label}: relation equality {by_relation}, operator criterion {by_criterion}")
            });
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        op.record(false, 0.0, || format!("{desc}: {e}"));
    }
    vec![op, sigma, llp, routes]
}

fn weyl_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut agree = Check::new("weyl_criterion_agreement");
    let mut planted = Check::new("planted_v_membership");
    let (p, q, d) = shape(rng, 7);
    let desc = format!("signature ({p},{q}) defect {d}");
    let outcome = (|| -> kreinrel::Result<()> {
        let a = triple(p, q, d, rng)?;
        let other = triple(p, q, d, rng)?;
        let u = gen_standard_unitary(a.space(), a.space(), rng)?;
        let moved = a.transport(&u, a.space())?;
        let r = a.t().dim();
        let mut draw = |b: &BoundaryTriple| {
            let tau = random_invertible(r, rng);
            let sigma = gaussian(r, d, rng);
            let theta = random_hermitian(r, rng);
            build_standard_v(&a, b, &tau, &sigma, &theta)
        };
        let v_moved = draw(&moved)?;
        let v_other = draw(&other)?;
        let m = membership(&v_moved, &a, &moved);
        planted.record(m.member, m.intertwining.max(m.tplus_distance).max(m.isometry), || {
            format!("{desc}: planted V rejected ({:.1e}, {:.1e}, {:.1e})", m.intertwining, m.tplus_distance, m.isometry)
        });
        for (label, b, v) in [("planted", &moved, &v_moved), ("unrelated", &other, &v_other)] {
            for &z in grid {
                let w = weyl_equality_criterion(&a, b, v, z)?;
                agree.record(w.containment == w.direct, 0.0, || {
                    format!("{desc} {label} z {z}: containment {}, direct {}", w.containment, w.direct)
                });
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        agree.record(false, 0.0, || format!("{desc}: {e}"));
    }
    vec![agree, planted]
}

fn reconstruction_trial(rng: &mut ChaCha8Rng, k: u64, grid: &[C64]) -> Vec<Check> {
    let mut recon = Check::new("similarity_reconstruction");
    let mut negative = Check::new("scaled_triple_rejected");
    let mut desc = String::from("flip example");
    let outcome = (|| -> kreinrel::Result<()> {
        let a = if k == 0 {
            shifted_flip_triple(grid, rng)?
        } else {
            let (p, q, d) = shape(rng, 6);
            desc = format!("signature ({p},{q}) defect {d}");
            simple_triple(p, q, d, grid, rng)?
        };
        let u = gen_standard_unitary(a.space(), a.space(), rng)?;
        let b = a.transport(&u, a.space())?;
        match reconstruct_similarity(&a, &b, grid)? {
            SimilarityOutcome::Similar(s) => {
                let off = s.off_diagonal.iter().copied().fold(0.0, f64::max);
                let ok = s.intertwining < INTERTWINING && off < OFF_DIAGONAL;
                recon.record(ok, s.intertwining.max(off), || {
                    format!("{desc}: intertwining {:.2e}, off-diagonal {:?}", s.intertwining, s.off_diagonal)
                });
            }
            SimilarityOutcome::NotSimilar { z, discrepancy } => {
                recon.record(false, 0.0, || format!("{desc}: planted pair rejected at {z} ({discrepancy:.2e})"));
            }
        }
        for kappa in [2.0, 3.0] {
            match reconstruct_similarity(&a, &a.scaled(kappa)?, grid)? {
                SimilarityOutcome::NotSimilar { discrepancy, .. } => {
                    negative.record(discrepancy > DISCREPANCY, 0.0, || {
                        format!("{desc} κ {kappa}: discrepancy only {discrepancy:.2e}")
                    });
                }
                SimilarityOutcome::Similar(_) => {
                    negative.record(false, 0.0, || format!("{desc} κ {kappa}: declared similar"));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        recon.record(false, 0.0, || format!("{desc}: {e}"));
    }
    vec![recon, negative]
}

/// The flip example with `Γ1` replaced by `Γ1 - K Γ0` for a random Hermitian
/// `K`: same `T` and `T0`, but `T1` regular on the grid (for the unshifted
/// triple `M(z)` is singular everywhere).
fn shifted_flip_triple(grid: &[C64], rng: &mut ChaCha8Rng) -> kreinrel::Result<BoundaryTriple> {
    let base = flip_triple()?;
    for _ in 0..16 {
        let tr = base.k_shift(&random_hermitian(base.boundary_dim(), rng))?;
        let t1 = tr.t1();
        if grid.iter().all(|&z| kreinrel::extensions::regular(&t1, z)) {
            return Ok(tr);
        }
    }
    Err(Error::SamplingExhausted(16))
}

/// Simple symmetric relation whose triple has both kernels regular on the
/// grid, the hypotheses of the reconstruction.
fn simple_triple(p: usize, q: usize, d: usize, grid: &[C64], rng: &mut ChaCha8Rng) -> kreinrel::Result<BoundaryTriple> {
    let spec = SymmetricSpec { require_simple: true, ..SymmetricSpec::new(p, q, d) };
    for _ in 0..16 {
        let inst = gen_symmetric(&spec, rng)?;
        let tr = gen_triple(&inst.t, rng)?;
        let (t0, t1) = (tr.t0(), tr.t1());
        let regular = |z: &C64| kreinrel::extensions::regular(&t0, *z) && kreinrel::extensions::regular(&t1, *z);
        if grid.iter().all(regular) {
            return Ok(tr);
        }
    }
    Err(Error::SamplingExhausted(16))
}
