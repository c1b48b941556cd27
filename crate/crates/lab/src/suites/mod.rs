//! Randomised verification suites. Trial `k` of a suite draws from the
//! counter-mode stream `k` of the master seed, so reports do not depend on
//! scheduling.

pub mod appendix;
pub mod boundary;
pub mod extensions;
pub mod similarity;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use kreinrel::generate::trial_rng;
use kreinrel::linalg::C64;

use crate::report::{Check, Report};

/// Residual bound shared by every suite.
pub const RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Appendix,
    Extensions,
    Boundary,
    Similarity,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Appendix, Suite::Extensions, Suite::Boundary, Suite::Similarity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Appendix => "appendix",
            Suite::Extensions => "extensions",
            Suite::Boundary => "boundary",
            Suite::Similarity => "similarity",
        }
    }

    pub fn run(self, trials: usize, seed: u64, grid: &[C64]) -> Report {
        match self {
            Suite::Appendix => appendix::run(trials, seed, grid),
            Suite::Extensions => extensions::run(trials, seed, grid),
            Suite::Boundary => boundary::run(trials, seed, grid),
            Suite::Similarity => similarity::run(trials, seed, grid),
        }
    }
}

/// Run `trial` for indices `0..trials` in parallel.
pub fn run_trials<F>(suite: &str, trials: usize, seed: u64, trial: F) -> Report
where
    F: Fn(&mut ChaCha8Rng, u64) -> Vec<Check> + Sync,
{
    let outcomes: Vec<(u64, Vec<Check>)> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, k);
            (k, trial(&mut rng, k))
        })
        .collect();
    Report::assemble(suite, seed, outcomes)
}

/// Seed of an independent sub-stream, so adding a suite part does not
/// shift the draws of the others.
pub(crate) fn part_seed(seed: u64, part: u64) -> u64 {
    seed ^ part.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Subspace distance with a dimension mismatch mapped to `π/2`.
pub(crate) fn angle(a: &kreinrel::Subspace, b: &kreinrel::Subspace) -> f64 {
    let d = kreinrel::subspace::distance(a, b);
    if d.is_finite() {
        d
    } else {
        std::f64::consts::FRAC_PI_2
    }
}
