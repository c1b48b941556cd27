//! Pointwise spectral probes: regular points, the sets `δ`, `O`, `O_s`,
//! simplicity and the spectral statements about `T0 = T ⊕ N`.

use super::{defect_subspace, ensure_symmetric};
use crate::error::Result;
use crate::linalg::{self, c, C64};
use crate::relation::Relation;
use crate::subspace::{self, Subspace};
use crate::tol::Tol;

/// `{±i, ±2i, 1±i, -1±i, 1/2 ± 3i/2}`.
pub fn default_grid() -> Vec<C64> {
    let base = [c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0), c(-1.0, 1.0), c(0.5, 1.5)];
    base.iter().flat_map(|&z| [z, z.conj()]).collect()
}

const IMAG_FLOOR: f64 = 1e-12;

fn nonreal(z: C64) -> bool {
    z.im.abs() > IMAG_FLOOR
}

/// `ker(T - z) = {0}`.
pub fn regular_type(t: &Relation, z: C64) -> bool {
    t.eigenspace(z).is_zero()
}

/// `z ∈ ρ(T)`: regular type and `ran(T - z)` is everything.
pub fn regular(t: &Relation, z: C64) -> bool {
    regular_type(t, z) && t.shifted_range(z).dim() == t.tgt().dim()
}

/// `z ∈ δ(T)`: non-real and both `z`, `z̄` of regular type.
pub fn in_delta(t: &Relation, z: C64) -> bool {
    nonreal(z) && regular_type(t, z) && regular_type(t, z.conj())
}

/// `z ∈ O(G, H)`: `ran(G - z) ∩ ran(H - z) = {0}`.
pub fn in_o(g: &Relation, h: &Relation, z: C64) -> bool {
    subspace::intersect(&g.shifted_range(z), &h.shifted_range(z)).is_zero()
}

/// `z ∈ O_s(T, N) = δ(T) ∩ O ∩ O^*`.
pub fn in_os(t: &Relation, n: &Relation, z: C64) -> bool {
    in_delta(t, z) && in_o(t, n, z) && in_o(t, n, z.conj())
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointSpectrum {
    /// Every complex number is an eigenvalue.
    All,
    Finite(Vec<C64>),
}

impl PointSpectrum {
    pub fn nonreal(&self) -> Vec<C64> {
        match self {
            PointSpectrum::All => Vec::new(),
            PointSpectrum::Finite(v) => v.iter().copied().filter(|z| nonreal(*z)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, PointSpectrum::Finite(v) if v.is_empty())
    }

    pub fn has_nonreal(&self) -> bool {
        match self {
            PointSpectrum::All => true,
            PointSpectrum::Finite(_) => !self.nonreal().is_empty(),
        }
    }
}

/// Eigenvalues of a relation from its graph pencil `Yα = zXα`.
///
/// A shift `w` with `Y - wX` injective turns the pencil into the ordinary
/// eigenproblem `(Y - wX)^+ X α = μ α`, `z = w + 1/μ`; each candidate is
/// confirmed by a rank test.
pub fn point_spectrum(t: &Relation) -> PointSpectrum {
    let (x, y) = (t.top(), t.bottom());
    let k = t.dim();
    if k == 0 {
        return PointSpectrum::Finite(Vec::new());
    }
    let tol = Tol::current();
    let shifts = [c(0.3141, 0.2718), c(-1.234, 0.577), c(2.71, -1.41), c(0.0, 3.3), c(-0.6, -2.2)];
    let Some(w) = shifts.into_iter().find(|&w| regular_type(t, w)) else {
        return PointSpectrum::All;
    };
    let m = &y - &x * w;
    let pencil = linalg::pinv(&m, &tol) * &x;
    let mut found: Vec<C64> = Vec::new();
    for mu in linalg::eigenvalues(&pencil) {
        if mu.norm() <= 1e-12 * (1.0 + linalg::op_norm(&pencil)) {
            continue;
        }
        let z = w + mu.inv();
        if !regular_type(t, z) && !found.iter().any(|f| (f - z).norm() <= 1e-8 * (1.0 + z.norm()))
        {
            found.push(z);
        }
    }
    PointSpectrum::Finite(found)
}

/// Property (P): `dom T + ran T` is the whole space.
pub fn property_p(t: &Relation) -> bool {
    subspace::sum(&t.domain(), &t.range()).dim() == t.src().dim()
}

#[derive(Debug, Clone)]
pub struct SimpleReport {
    /// No non-real eigenvalue on the grid.
    pub grid_eigen_free: bool,
    /// No non-real eigenvalue at all (exact pencil computation).
    pub eigen_free: bool,
    /// Dimension of the span of `𝔑_z(T^+)` over the grid.
    pub span_dim: usize,
    pub simple: bool,
}

pub fn simple_check(t: &Relation, grid: &[C64]) -> Result<SimpleReport> {
    ensure_symmetric(t)?;
    let grid_eigen_free = grid.iter().filter(|z| nonreal(**z)).all(|&z| regular_type(t, z));
    let eigen_free = !point_spectrum(t).has_nonreal();
    let tp = t.adjoint();
    let n = t.src().dim();
    let mut span = Subspace::zero(n);
    for &z in grid {
        span = subspace::sum(&span, &tp.eigenspace(z));
    }
    let span_dim = span.dim();
    Ok(SimpleReport {
        grid_eigen_free,
        eigen_free,
        span_dim,
        simple: grid_eigen_free && eigen_free && span_dim == n,
    })
}

#[derive(Debug, Clone)]
pub struct RegularSetPoint {
    pub z: C64,
    /// `z ∈ C_* ∩ ρ(T0)`.
    pub resolvent: bool,
    /// `z ∈ O_s(T, N) ∩ δ(N)`.
    pub characterised: bool,
}

/// Pointwise comparison of `C_* ∩ ρ(T ⊕ N)` with `O_s(T, N) ∩ δ(N)`.
pub fn regular_set_check(t: &Relation, n: &Relation, points: &[C64]) -> Result<Vec<RegularSetPoint>> {
    let (t0, _) = t.cw_sum(n)?;
    Ok(points
        .iter()
        .map(|&z| RegularSetPoint {
            z,
            resolvent: nonreal(z) && regular(&t0, z),
            characterised: in_os(t, n, z) && in_delta(n, z),
        })
        .collect())
}

#[derive(Debug, Clone)]
pub struct ExtensionRegularity {
    /// Grid points in `δ(T)` that are not regular for `T0`.
    pub violations: Vec<C64>,
    /// Non-real eigenvalues of `T0` that lie in `δ(T)` (off-grid probe).
    pub offgrid_violations: Vec<C64>,
    /// `dom T` is the whole space.
    pub densely_defined: bool,
    pub property_p: bool,
}

/// Checks `ρ(T0) ⊇ grid ∩ δ(T)` and reports the hypotheses that hold.
pub fn extension_regularity_check(t: &Relation, t0: &Relation, grid: &[C64]) -> Result<ExtensionRegularity> {
    ensure_symmetric(t)?;
    let violations =
        grid.iter().copied().filter(|&z| in_delta(t, z) && !regular(t0, z)).collect();
    let offgrid_violations =
        point_spectrum(t0).nonreal().into_iter().filter(|&z| in_delta(t, z)).collect();
    Ok(ExtensionRegularity {
        violations,
        offgrid_violations,
        densely_defined: t.domain().dim() == t.src().dim(),
        property_p: property_p(t),
    })
}

#[derive(Debug, Clone)]
pub struct Delta0Estimate {
    pub points: Vec<C64>,
    pub witnesses: usize,
    /// Always true: the intersection over all witnesses is sampled.
    pub approximate: bool,
}

/// Grid points in `O_s(T, N)` with `z, z̄ ∉ σ_p(N)` for every sampled witness.
pub fn delta0_estimate(t: &Relation, witnesses: &[Relation], grid: &[C64]) -> Delta0Estimate {
    let points = grid
        .iter()
        .copied()
        .filter(|&z| {
            witnesses.iter().all(|n| {
                in_os(t, n, z) && regular_type(n, z) && regular_type(n, z.conj())
            })
        })
        .collect();
    Delta0Estimate { points, witnesses: witnesses.len(), approximate: true }
}

#[derive(Debug, Clone)]
pub struct WitnessRegularity {
    pub operator: bool,
    pub eigen_free: bool,
    pub grid_eigen_free: bool,
    /// `𝔑_{±i}(N)` agrees with `dom N ∩ ((H_+ ∩ 𝔑_{±i}) ⊕ (H_- ∩ 𝔑_{∓i}))`.
    pub eigenspace_formula: [bool; 2],
    pub densely_defined: bool,
    pub property_p: bool,
}

/// Eigenvalue-freeness of a witness `N`, with the hypotheses observed.
pub fn witness_regularity_check(t: &Relation, n: &Relation, grid: &[C64]) -> Result<WitnessRegularity> {
    ensure_symmetric(t)?;
    let space = t.src();
    let (plus, minus) = space.canonical_frames();
    let hp = Subspace::span(&plus)?;
    let hm = Subspace::span(&minus)?;
    let dom_n = n.domain();
    let mut eigenspace_formula = [false; 2];
    for (k, z) in [linalg::IM, -linalg::IM].into_iter().enumerate() {
        let a = subspace::intersect(&hp, &defect_subspace(t, z));
        let b = subspace::intersect(&hm, &defect_subspace(t, -z));
        let formula = subspace::intersect(&dom_n, &subspace::sum(&a, &b));
        eigenspace_formula[k] = subspace::equal(&formula, &n.eigenspace(z));
    }
    Ok(WitnessRegularity {
        operator: n.is_operator(),
        eigen_free: point_spectrum(n).is_empty(),
        grid_eigen_free: grid.iter().all(|&z| regular_type(n, z)),
        eigenspace_formula,
        densely_defined: t.domain().dim() == space.dim(),
        property_p: property_p(t),
    })
}
