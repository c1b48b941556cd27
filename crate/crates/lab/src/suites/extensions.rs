//! Self-adjoint extensions: witness/extension roundtrip, the structure
//! audit of a witness, and the spectral statements on property-(P)
//! instances.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kreinrel::extensions::{self, extend, regular_set_check, prop_n_audit, reduce, sample_witness, extension_regularity_check};
use kreinrel::generate::{gen_symmetric, SymmetricSpec};
use kreinrel::linalg::C64;
use kreinrel::relation;

use super::{part_seed, run_trials, RESIDUAL};
use crate::report::{Check, Report};

pub fn run(trials: usize, seed: u64, grid: &[C64]) -> Report {
    Report::merge("extensions", seed, vec![witnesses(trials, seed), spectral(trials, seed, grid)])
}

/// Roundtrip and structure audit on random symmetric relations.
pub fn witnesses(trials: usize, seed: u64) -> Report {
    run_trials("witness", trials, part_seed(seed, 1), |rng, _| witness_trial(rng))
}

/// Spectral statements on property-(P) instances.
pub fn spectral(trials: usize, seed: u64, grid: &[C64]) -> Report {
    run_trials("spectral", trials, part_seed(seed, 2), |rng, _| spectral_trial(rng, grid))
}

/// Dimension in `2..=8`, any signature, defect in `1..dim`.
fn draw_shape(rng: &mut ChaCha8Rng) -> (usize, usize, usize) {
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(0..=n);
    let d = rng.gen_range(1..n);
    (p, n - p, d)
}

fn witness_trial(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut roundtrip = Check::new("reduce_extend_roundtrip");
    let mut audit_check = Check::new("witness_structure_audit");
    let (p, q, d) = draw_shape(rng);
    let shape = format!("signature ({p},{q}) defect {d}");
    let inst = match gen_symmetric(&SymmetricSpec::new(p, q, d), rng) {
        Ok(i) => i,
        Err(e) => {
            roundtrip.record(false, 0.0, || format!("{shape}: generation failed: {e}"));
            return vec![roundtrip, audit_check];
        }
    };
    let t = &inst.t;
    let outcome = (|| -> kreinrel::Result<()> {
        let n = sample_witness(t, rng)?;
        let there = extend(t, &n)?;
        let back = reduce(t, &there)?;
        let d1 = relation::distance(&back, &n);
        roundtrip.bound(d1, RESIDUAL, || format!("{shape}: reduce(extend(N)) off by {d1:.2e}"));
        let n0 = reduce(t, &inst.t0)?;
        let d2 = relation::distance(&extend(t, &n0)?, &inst.t0);
        roundtrip.bound(d2, RESIDUAL, || format!("{shape}: extend(reduce(T0)) off by {d2:.2e}"));

        let a = prop_n_audit(t, &n)?;
        let residual = a
            .sigma
            .witness_residual
            .max(a.sigma.m_hat_residual)
            .max(a.sigma.tplus_residual)
            .max(a.dom_n_spread);
        audit_check.record(a.passed(RESIDUAL), residual, || {
            format!(
                "{shape}: d + n ok {}, dims ok {}, Σ residuals ({:.1e}, {:.1e}, {:.1e}), dom N spread {:.1e}, hyper-maximal {}, failing points {:?}",
                a.defect_sum_ok,
                a.dims_ok,
                a.sigma.witness_residual,
                a.sigma.m_hat_residual,
                a.sigma.tplus_residual,
                a.dom_n_spread,
                a.dom_n_hyper_maximal,
                a.regular_point_failures
            )
        });
        Ok(())
    })();
    if let Err(e) = outcome {
        roundtrip.record(false, 0.0, || format!("{shape}: {e}"));
    }
    vec![roundtrip, audit_check]
}

/// Property-(P) instances: `T0 = T ⊕ N` is regular on `grid ∩ δ(T)`, and
/// `C_* ∩ ρ(T0) = O_s(T, N) ∩ δ(N)` pointwise.
fn spectral_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut ex = Check::new("extension_regular_on_grid");
    let mut os = Check::new("regular_set_characterisation");
    let n = rng.gen_range(2..=8);
    let p = rng.gen_range(0..=n);
    let d = rng.gen_range(1..=(n / 2).max(1));
    let shape = format!("signature ({p},{}) defect {d}", n - p);
    let spec = SymmetricSpec { require_property_p: true, ..SymmetricSpec::new(p, n - p, d) };
    let outcome = (|| -> kreinrel::Result<()> {
        let inst = gen_symmetric(&spec, rng)?;
        let w = sample_witness(&inst.t, rng)?;
        let t0 = extend(&inst.t, &w)?;
        let rep = extension_regularity_check(&inst.t, &t0, grid)?;
        ex.record(rep.property_p && rep.violations.is_empty(), 0.0, || {
            format!("{shape}: (P) {}, grid points in δ(T) not regular for T0: {:?}", rep.property_p, rep.violations)
        });
        let mut points = grid.to_vec();
        points.extend(extensions::point_spectrum(&t0).nonreal());
        for pt in regular_set_check(&inst.t, &w, &points)? {
            os.record(pt.resolvent == pt.characterised, 0.0, || {
                format!("{shape}: z {} regular {} characterised {}", pt.z, pt.resolvent, pt.characterised)
            });
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        ex.record(false, 0.0, || format!("{shape}: {e}"));
    }
    vec![ex, os]
}
