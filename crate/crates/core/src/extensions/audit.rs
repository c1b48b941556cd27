//! Dimension counts and subspace identities relating `T`, a witness `N` and
//! the defect spaces of `𝔗 = J T`.

use super::probes::{default_grid, regular};
use super::{
    cayley_on_defect, companion_part, defect_numbers, defect_subspace, ensure_symmetric, flip,
    hilbert_form,
};
use crate::error::{Error, Result};
use crate::linalg::{self, c, C64, IM};
use crate::relation::Relation;
use crate::subspace::{self, Subspace};

#[derive(Debug, Clone)]
pub struct SigmaDecomposition {
    /// `Σ = T^+ ∩ T^⊥`.
    pub sigma: Subspace,
    /// `N ⊕ Ĵ(N)`.
    pub witness_sum: Subspace,
    /// `𝔐̂ = 𝔑̂_i(𝔗^*) ⊕ 𝔑̂_{-i}(𝔗^*)`.
    pub m_hat: Subspace,
    /// `diag(I, J) 𝔐̂`.
    pub sigma_from_m_hat: Subspace,
    /// Distance between `Σ` and `N ⊕ Ĵ(N)`.
    pub witness_residual: f64,
    /// Distance between `Σ` and `diag(I, J) 𝔐̂`.
    pub m_hat_residual: f64,
    /// Distance between `T^+` and `T ⊕ Σ`.
    pub tplus_residual: f64,
    /// Whether `N` and `Ĵ(N)` are orthogonal.
    pub orthogonal: bool,
}

pub fn sigma_decomposition(t: &Relation, n: &Relation) -> Result<SigmaDecomposition> {
    ensure_symmetric(t)?;
    let space = t.src();
    let sigma = companion_part(t);
    let jn = flip(space, n.graph());
    let witness_sum = subspace::sum(n.graph(), &jn);
    let th = hilbert_form(t).hilbert_adjoint();
    let m_hat = subspace::sum(&th.graph_eigenspace(IM), &th.graph_eigenspace(-IM));
    let dim = space.dim();
    let lift = linalg::block_diag(&linalg::eye(dim), space.j());
    let sigma_from_m_hat = subspace::image(&lift, &m_hat);
    let tplus_split = subspace::sum(t.graph(), &sigma);
    Ok(SigmaDecomposition {
        witness_residual: subspace::distance(&sigma, &witness_sum),
        m_hat_residual: subspace::distance(&sigma, &sigma_from_m_hat),
        tplus_residual: subspace::distance(t.adjoint().graph(), &tplus_split),
        orthogonal: subspace::orthogonal(n.graph(), &jn),
        sigma,
        witness_sum,
        m_hat,
        sigma_from_m_hat,
    })
}

#[derive(Debug, Clone)]
pub struct PropNAudit {
    pub dim_h: usize,
    /// Defect `d` of `T`.
    pub defect_t: usize,
    /// Defect numbers of `N`.
    pub defect_n: (usize, usize),
    pub dim_t: usize,
    pub dim_n: usize,
    /// `d + n = dim H`.
    pub defect_sum_ok: bool,
    /// `dim N = d` and `dim T = n`.
    pub dims_ok: bool,
    pub sigma: SigmaDecomposition,
    /// The three descriptions of `dom N` and the direct one.
    pub dom_n: [Subspace; 4],
    /// Largest pairwise distance among the `dom N` descriptions.
    pub dom_n_spread: f64,
    /// Gram matrix of `N` in the coordinates of `𝔑_i ⊕ 𝔑_{-i}` with
    /// fundamental symmetry `diag(1, -1)`.
    pub dom_n_gram_residual: f64,
    /// `dom N` is hyper-maximal neutral in `𝔐`.
    pub dom_n_hyper_maximal: bool,
    /// Grid points in `ρ(T0)` where `dim 𝔑_z(T^+) ≠ d`.
    pub regular_point_failures: Vec<C64>,
}

impl PropNAudit {
    pub fn passed(&self, tol: f64) -> bool {
        self.defect_sum_ok
            && self.dims_ok
            && self.sigma.witness_residual < tol
            && self.sigma.m_hat_residual < tol
            && self.sigma.tplus_residual < tol
            && self.dom_n_spread < tol
            && self.dom_n_hyper_maximal
            && self.regular_point_failures.is_empty()
    }
}

pub fn prop_n_audit(t: &Relation, n: &Relation) -> Result<PropNAudit> {
    ensure_symmetric(t)?;
    let (d, dm) = defect_numbers(t)?;
    if d != dm {
        return Err(Error::Hypothesis(format!("unequal defect numbers ({d}, {dm})")));
    }
    let defect_n = defect_numbers(n)?;
    let dim_h = t.src().dim();
    let (t0, _) = t.cw_sum(n)?;

    let sigma = sigma_decomposition(t, n)?;

    let t0h = hilbert_form(&t0);
    let plus = defect_subspace(t, IM);
    let minus = defect_subspace(t, -IM);
    // (𝔗0 ± i)^{-1} applied to 𝔑_{±i}: {f : (f, g) ∈ 𝔗0, g ± i f ∈ 𝔑_{±i}}.
    let via_plus = t0h.shift(-IM).inverse().restrict(&plus).range();
    let via_minus = t0h.shift(IM).inverse().restrict(&minus).range();
    let (cn, _) = cayley_on_defect(&t0, t)?;
    let via_cayley = subspace::image(&(cn - linalg::eye(dim_h)), &plus);
    let direct = n.domain();
    let dom_n = [via_plus, via_minus, via_cayley, direct];
    let mut spread: f64 = 0.0;
    for a in 0..4 {
        for b in a + 1..4 {
            spread = spread.max(subspace::distance(&dom_n[a], &dom_n[b]));
        }
    }

    // Coordinates of 𝔑 = JN in 𝔑̂_i ⊕ 𝔑̂_{-i}: (f, g) = (a, ia) + (b, -ib).
    let nh = hilbert_form(n);
    let (f, g) = (nh.top(), nh.bottom());
    let a = (&f - &g * IM) * c(0.5, 0.0);
    let b = (&f + &g * IM) * c(0.5, 0.0);
    let coords_ok = (0..a.ncols()).all(|k| {
        plus.contains_vector(&a.column(k).into_owned())
            && minus.contains_vector(&b.column(k).into_owned())
    });
    let gram = a.adjoint() * &a - b.adjoint() * &b;
    let gram_residual = linalg::max_abs(&gram);
    let hyper = coords_ok
        && gram_residual <= crate::tol::neutral_threshold(1.0)
        && n.dim() == d
        && plus.dim() == d
        && minus.dim() == d;

    let tp = t.adjoint();
    let regular_point_failures = default_grid()
        .into_iter()
        .filter(|&z| regular(&t0, z) && tp.eigenspace(z).dim() != d)
        .collect();

    Ok(PropNAudit {
        dim_h,
        defect_t: d,
        defect_n,
        dim_t: t.dim(),
        dim_n: n.dim(),
        defect_sum_ok: defect_n.0 == defect_n.1 && d + defect_n.0 == dim_h,
        dims_ok: n.dim() == d && t.dim() == defect_n.0,
        sigma,
        dom_n,
        dom_n_spread: spread,
        dom_n_gram_residual: gram_residual,
        dom_n_hyper_maximal: hyper,
        regular_point_failures,
    })
}
