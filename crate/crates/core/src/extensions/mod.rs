//! Self-adjoint extensions `T0 = T ⊕ N` of a closed symmetric relation and
//! the witness subspaces `N` that produce them.

mod audit;
mod cayley;
mod probes;

pub use audit::{prop_n_audit, sigma_decomposition, PropNAudit, SigmaDecomposition};
pub use cayley::{angular_operator, cayley, cayley_on_defect, inverse_cayley, v_operator, witness_from_angular};
pub use probes::{
    default_grid, delta0_estimate, in_delta, in_o, in_os, witness_regularity_check, regular_set_check,
    point_spectrum, property_p, regular, regular_type, simple_check, extension_regularity_check,
    Delta0Estimate, WitnessRegularity, RegularSetPoint, PointSpectrum, SimpleReport, ExtensionRegularity,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::krein::{self, KreinSpace};
use crate::linalg::{self, C64, IM};
use crate::relation::Relation;
use crate::subspace::{self, Subspace};

/// `𝔗 = J T`, a relation in the Euclidean space `(C^n, I)`.
pub fn hilbert_form(t: &Relation) -> Relation {
    let n = t.src().dim();
    let e = KreinSpace::euclidean(n);
    t.transform(&linalg::eye(n), t.tgt().j(), &e, &e)
}

/// Inverse of [`hilbert_form`]: `T = J 𝔗` over `space`.
pub fn krein_form(th: &Relation, space: &KreinSpace) -> Relation {
    th.transform(&linalg::eye(space.dim()), space.j(), space, space)
}

pub fn ensure_symmetric(t: &Relation) -> Result<()> {
    if !t.src().same_as(t.tgt()) {
        return Err(Error::HostMismatch);
    }
    if !t.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(())
}

/// `𝔑_z(𝔗^*) = ker(𝔗^* - z)`.
pub fn defect_subspace(t: &Relation, z: C64) -> Subspace {
    hilbert_form(t).hilbert_adjoint().eigenspace(z)
}

/// `(dim ker(𝔗^* - i), dim ker(𝔗^* + i))`.
pub fn defect_numbers(t: &Relation) -> Result<(usize, usize)> {
    ensure_symmetric(t)?;
    Ok((defect_subspace(t, IM).dim(), defect_subspace(t, -IM).dim()))
}

/// `Σ = T^+ ∩ T^⊥`.
pub fn companion_part(t: &Relation) -> Subspace {
    subspace::intersect(t.adjoint().graph(), &subspace::complement(t.graph()))
}

/// `Ĵ(A)` for a subspace of the doubled space.
pub fn flip(space: &KreinSpace, a: &Subspace) -> Subspace {
    subspace::image(space.doubled().j(), a)
}

#[derive(Debug, Clone)]
pub struct NClassReport {
    /// `N ⊆ T^+ ∩ T^⊥`.
    pub in_companion: bool,
    /// `ran(𝔑 ± i) = 𝔑_{±i}(𝔗^*)` with `𝔑 = J N`.
    pub range_conditions: [bool; 2],
    pub neutral: bool,
    /// `T ⊕ N` is hyper-maximal neutral in the doubled space.
    pub hyper_maximal: bool,
    /// Membership by the range characterisation.
    pub accepted: bool,
    /// Whether both characterisations agree.
    pub criteria_agree: bool,
}

impl NClassReport {
    pub fn reason(&self) -> Option<String> {
        if !self.in_companion {
            Some("N is not contained in T^+ ∩ T^⊥".into())
        } else if !self.range_conditions[0] {
            Some("ran(JN + i) differs from the defect space at i".into())
        } else if !self.range_conditions[1] {
            Some("ran(JN - i) differs from the defect space at -i".into())
        } else {
            None
        }
    }
}

pub fn n_class_check(t: &Relation, n: &Relation) -> Result<NClassReport> {
    ensure_symmetric(t)?;
    if !t.src().same_as(n.src()) || !t.tgt().same_as(n.tgt()) {
        return Err(Error::HostMismatch);
    }
    let space = t.src();
    let doubled = space.doubled();
    let in_companion = subspace::contains(&companion_part(t), n.graph());
    let nh = hilbert_form(n);
    let mut range_conditions = [false; 2];
    for (k, z) in [IM, -IM].into_iter().enumerate() {
        // ran(𝔑 + z) = ran(𝔑 - (-z))
        let ran = nh.shifted_range(-z);
        range_conditions[k] = subspace::equal(&ran, &defect_subspace(t, z));
    }
    let neutral = krein::neutrality(&doubled, n.graph()).neutral;
    let total = subspace::sum(t.graph(), n.graph());
    let hyper_maximal = krein::neutrality(&doubled, &total).hyper_maximal
        && total.dim() == t.dim() + n.dim();
    let accepted = in_companion && range_conditions[0] && range_conditions[1];
    let alternative = in_companion && neutral && hyper_maximal;
    Ok(NClassReport {
        in_companion,
        range_conditions,
        neutral,
        hyper_maximal,
        accepted,
        criteria_agree: accepted == alternative,
    })
}

/// `T0 = T ⊕ N` for a witness `N`.
pub fn extend(t: &Relation, n: &Relation) -> Result<Relation> {
    let report = n_class_check(t, n)?;
    if !report.accepted {
        return Err(Error::NotInClass(report.reason().unwrap_or_default()));
    }
    let (sum, _) = t.cw_sum(n)?;
    Ok(sum)
}

/// `N = T0 ∩ T^⊥` for a self-adjoint extension `T0 ⊇ T`.
pub fn reduce(t: &Relation, t0: &Relation) -> Result<Relation> {
    ensure_symmetric(t)?;
    if !t0.src().same_as(t.src()) {
        return Err(Error::HostMismatch);
    }
    if !t0.is_self_adjoint() {
        return Err(Error::NotSelfAdjoint);
    }
    if !subspace::contains(t0.graph(), t.graph()) {
        return Err(Error::NotInClass("T0 does not extend T".into()));
    }
    Ok(t0.with_graph(subspace::intersect(t0.graph(), &subspace::complement(t.graph()))))
}

/// Self-adjoint extension from a unitary `w` between the defect spaces,
/// given in their orthonormal frames: `𝔗0 = 𝔗 ∔ {(x + Ux, ix - iUx)}`.
pub fn extension_from_unitary(t: &Relation, w: &linalg::CMat) -> Result<Relation> {
    ensure_symmetric(t)?;
    let plus = defect_subspace(t, IM);
    let minus = defect_subspace(t, -IM);
    if plus.dim() != minus.dim() || w.nrows() != minus.dim() || w.ncols() != plus.dim() {
        return Err(Error::Invalid("defect spaces and unitary do not match".into()));
    }
    let x = plus.frame().clone();
    let ux = minus.frame() * w;
    let extra_top = &x + &ux;
    let extra_bottom = (&x - &ux) * IM;
    let th = hilbert_form(t);
    let e = th.src().clone();
    let extra = Relation::from_pairs(&e, &e, &extra_top, &extra_bottom)?;
    let (t0h, _) = th.cw_sum(&extra)?;
    Ok(krein_form(&t0h, t.src()))
}

/// Random witness `N` via a random unitary between the defect spaces.
pub fn sample_witness<R: Rng + ?Sized>(t: &Relation, rng: &mut R) -> Result<Relation> {
    let (dp, dm) = defect_numbers(t)?;
    if dp != dm {
        return Err(Error::Hypothesis(format!("unequal defect numbers ({dp}, {dm})")));
    }
    let w = crate::generate::random_unitary(dp, rng);
    let t0 = extension_from_unitary(t, &w)?;
    reduce(t, &t0)
}
