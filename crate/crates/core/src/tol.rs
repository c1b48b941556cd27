//! Numerical tolerances shared by every rank and angle decision.
//!
//! The active policy is process-wide so that command-line overrides reach
//! every computation without threading a parameter through each call.

use std::sync::RwLock;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tol {
    /// Singular values below `rank_rel * sigma_max` count as zero.
    pub rank_rel: f64,
    /// Absolute floor for the rank cutoff.
    pub rank_abs: f64,
    /// Largest principal angle at which two subspaces are considered equal.
    pub angle: f64,
}

impl Tol {
    pub const DEFAULT: Tol = Tol { rank_rel: 1e-10, rank_abs: 1e-12, angle: 1e-8 };

    pub fn cutoff(&self, sigma_max: f64) -> f64 {
        self.rank_abs.max(self.rank_rel * sigma_max)
    }

    pub fn current() -> Tol {
        *POLICY.read().unwrap_or_else(|e| e.into_inner())
    }

    pub fn set_current(tol: Tol) {
        *POLICY.write().unwrap_or_else(|e| e.into_inner()) = tol;
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::DEFAULT
    }
}

static POLICY: RwLock<Tol> = RwLock::new(Tol::DEFAULT);

/// Neutrality threshold for a Gram matrix of a frame with the given norm.
pub fn neutral_threshold(frame_norm: f64) -> f64 {
    1e-9 * (1.0 + frame_norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_uses_the_larger_bound() {
        let t = Tol::DEFAULT;
        assert_eq!(t.cutoff(1.0), 1e-10);
        assert_eq!(t.cutoff(1e-6), 1e-12);
    }
}
