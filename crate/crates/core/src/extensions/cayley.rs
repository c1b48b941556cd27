use super::{defect_subspace, ensure_symmetric, hilbert_form};
use crate::error::{Error, Result};
use crate::krein::KreinSpace;
use crate::linalg::{self, c, CMat, C64, IM};
use crate::relation::Relation;
use crate::subspace::{self, Subspace};

fn ensure_hilbert_self_adjoint(t0h: &Relation) -> Result<()> {
    let n = t0h.src().dim();
    if t0h.tgt().dim() != n || t0h.dim() != n {
        return Err(Error::NotSelfAdjoint);
    }
    if !subspace::equal(t0h.hilbert_adjoint().graph(), t0h.graph()) {
        return Err(Error::NotSelfAdjoint);
    }
    Ok(())
}

/// `C = {(f' + if, f' - if) : (f, f') ∈ 𝔗0}` for a self-adjoint relation
/// `𝔗0` in the Euclidean metric.
pub fn cayley(t0h: &Relation) -> Result<CMat> {
    ensure_hilbert_self_adjoint(t0h)?;
    let (x, y) = (t0h.top(), t0h.bottom());
    let input = &y + &x * IM;
    let output = &y - &x * IM;
    let inv = linalg::inverse(&input).ok_or(Error::NotSelfAdjoint)?;
    Ok(output * inv)
}

/// Self-adjoint relation (Euclidean metric) with Cayley transform `c`.
pub fn inverse_cayley(cm: &CMat) -> Result<Relation> {
    let n = cm.nrows();
    if cm.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: cm.ncols() });
    }
    let e = KreinSpace::euclidean(n);
    let id = linalg::eye(n);
    let top = (&id - cm) * c(0.0, -0.5);
    let bottom = (&id + cm) * c(0.5, 0.0);
    Relation::from_pairs(&e, &e, &top, &bottom)
}

/// `V_z = I + 2z (𝔗0 - z)^{-1}`.
pub fn v_operator(t0h: &Relation, z: C64) -> Result<CMat> {
    ensure_hilbert_self_adjoint(t0h)?;
    let n = t0h.src().dim();
    Ok(linalg::eye(n) + t0h.resolvent(z)? * (z * 2.0))
}

/// `C_𝔑`: the Cayley transform of `J T0` restricted to `𝔑_i(𝔗^*)`,
/// returned together with that defect space.
pub fn cayley_on_defect(t0: &Relation, t: &Relation) -> Result<(CMat, Subspace)> {
    let cm = cayley(&hilbert_form(t0))?;
    let plus = defect_subspace(t, IM);
    Ok((cm * plus.projector(), plus))
}

/// Angular operator of `T0` with respect to `𝔎_± = {(f, ±iJf)}`, as a map
/// on the doubled space that vanishes on `𝔎_-`.
pub fn angular_operator(t0: &Relation, t: &Relation) -> Result<CMat> {
    ensure_symmetric(t)?;
    if !subspace::contains(t0.graph(), t.graph()) {
        return Err(Error::NotInClass("T0 does not extend T".into()));
    }
    let cm = cayley(&hilbert_form(t0))?;
    let (plus, minus) = canonical_halves(t0.src());
    Ok(&minus * (-cm) * plus.adjoint())
}

/// `N = (I + K)(𝔎_+ restricted to 𝔑_i(𝔗^*))`.
pub fn witness_from_angular(t0: &Relation, t: &Relation) -> Result<Relation> {
    let k = angular_operator(t0, t)?;
    let (plus, _) = canonical_halves(t0.src());
    let defect = defect_subspace(t, IM);
    let lifted = &plus * defect.frame();
    let n2 = k.nrows();
    let graph = Subspace::span(&((linalg::eye(n2) + k) * lifted))?;
    let n = Relation::in_space(t0.src(), graph)?;
    // Cross-check membership in T0: the angular form must land inside it.
    if !subspace::contains(t0.graph(), n.graph()) {
        return Err(Error::NotInClass("angular reconstruction left T0".into()));
    }
    Ok(n)
}

/// Orthonormal frames `[I; ±iJ] / sqrt 2` of the canonical halves.
fn canonical_halves(space: &KreinSpace) -> (CMat, CMat) {
    let n = space.dim();
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let id = linalg::eye(n);
    let plus = linalg::vcat(&id, &(space.j() * IM)) * s;
    let minus = linalg::vcat(&id, &(space.j() * -IM)) * s;
    (plus, minus)
}
