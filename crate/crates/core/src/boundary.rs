//! Boundary triples `(L, Γ0, Γ1)` for `T^+`, their Weyl families, gamma
//! fields, inverse boundary maps and transforms.

use crate::error::{Error, Result};
use crate::extensions::{self, ensure_symmetric};
use crate::krein::{self, KreinSpace};
use crate::linalg::{self, CMat, C64, IM};
use crate::relation::{self, Relation};
use crate::subspace::{self, Subspace};
use crate::tol::Tol;

/// `Γ = (Γ0, Γ1): T^+ → L^2` with `L = C^d`.
///
/// `gamma` is stored in the coordinates of the orthonormal frame of `T^+`;
/// [`BoundaryTriple::ambient`] extends it by zero to the doubled space.
#[derive(Debug, Clone)]
pub struct BoundaryTriple {
    t: Relation,
    tplus: Relation,
    gamma: CMat,
    d: usize,
}

/// `[[0, I], [-I, 0]]`, the form `⟨Γ0 f, Γ1 g⟩ - ⟨Γ1 f, Γ0 g⟩` on `L^2`.
pub fn green_form(d: usize) -> CMat {
    linalg::block2(
        &linalg::zeros(d, d),
        &linalg::eye(d),
        &(-linalg::eye(d)),
        &linalg::zeros(d, d),
    )
}

impl BoundaryTriple {
    /// Validates `gamma` given relative to an arbitrary basis of `T^+`.
    pub fn validate(t: &Relation, gamma: &CMat, basis: &CMat) -> Result<Self> {
        ensure_symmetric(t)?;
        let tplus = t.adjoint();
        let two_n = 2 * t.src().dim();
        if basis.nrows() != two_n {
            return Err(Error::DimensionMismatch { expected: two_n, found: basis.nrows() });
        }
        if gamma.ncols() != basis.ncols() {
            return Err(Error::DimensionMismatch { expected: basis.ncols(), found: gamma.ncols() });
        }
        if !linalg::is_finite(gamma) || !linalg::is_finite(basis) {
            return Err(Error::NonFinite);
        }
        let tol = Tol::current();
        if linalg::rank(basis, &tol) != basis.ncols() || basis.ncols() != tplus.dim() {
            return Err(Error::Invalid(format!(
                "basis must have {} independent columns spanning T^+",
                tplus.dim()
            )));
        }
        let spanned = Subspace::span(basis)?;
        if !subspace::equal(&spanned, tplus.graph()) {
            return Err(Error::Invalid("basis does not span T^+".into()));
        }
        Self::check_green(t, gamma, basis)?;
        let ambient = gamma * linalg::pinv(basis, &tol);
        Self::from_ambient(t, &ambient)
    }

    fn check_green(t: &Relation, gamma: &CMat, basis: &CMat) -> Result<()> {
        if gamma.nrows() % 2 != 0 {
            return Err(Error::Invalid("gamma must have an even number of rows".into()));
        }
        let d = gamma.nrows() / 2;
        let jhat = t.src().doubled();
        let lhs = basis.adjoint() * jhat.j() * basis * IM;
        let rhs = gamma.adjoint() * green_form(d) * gamma;
        let diff = lhs - rhs;
        let scale = 1.0 + linalg::op_norm(gamma).powi(2) + linalg::op_norm(basis).powi(2);
        let mut worst = (0.0, 0, 0);
        for i in 0..diff.nrows() {
            for j in 0..diff.ncols() {
                if diff[(i, j)].norm() > worst.0 {
                    worst = (diff[(i, j)].norm(), i, j);
                }
            }
        }
        if worst.0 > 1e-9 * scale {
            return Err(Error::GreenIdentity { residual: worst.0, i: worst.1, j: worst.2 });
        }
        Ok(())
    }

    /// Builds a triple from a `2d × 2n` matrix acting on the doubled space;
    /// only its restriction to `T^+` matters.
    pub fn from_ambient(t: &Relation, gamma_ambient: &CMat) -> Result<Self> {
        ensure_symmetric(t)?;
        let two_n = 2 * t.src().dim();
        if gamma_ambient.ncols() != two_n {
            return Err(Error::DimensionMismatch { expected: two_n, found: gamma_ambient.ncols() });
        }
        let tplus = t.adjoint();
        let frame = tplus.graph().frame().clone();
        let gamma = gamma_ambient * &frame;
        Self::check_green(t, &gamma, &frame)?;
        let d = gamma.nrows() / 2;
        let rank = linalg::rank(&gamma, &Tol::current());
        if rank != 2 * d {
            return Err(Error::NotSurjective { rank, expected: 2 * d });
        }
        let triple = BoundaryTriple { t: t.clone(), tplus, gamma, d };
        if !triple.t0().is_self_adjoint() {
            return Err(Error::KernelNotSelfAdjoint("Γ0"));
        }
        if !triple.t1().is_self_adjoint() {
            return Err(Error::KernelNotSelfAdjoint("Γ1"));
        }
        Ok(triple)
    }

    pub fn space(&self) -> &KreinSpace {
        self.t.src()
    }

    pub fn t(&self) -> &Relation {
        &self.t
    }

    pub fn tplus(&self) -> &Relation {
        &self.tplus
    }

    pub fn boundary_dim(&self) -> usize {
        self.d
    }

    /// Orthonormal frame of `T^+` used for the stored coordinates.
    pub fn frame(&self) -> &CMat {
        self.tplus.graph().frame()
    }

    /// `Γ` in frame coordinates, `2d × dim T^+`.
    pub fn gamma(&self) -> &CMat {
        &self.gamma
    }

    /// `Γ` as a map on the doubled space, zero on `(T^+)^⊥`.
    pub fn ambient(&self) -> CMat {
        &self.gamma * self.frame().adjoint()
    }

    pub fn gamma0(&self) -> CMat {
        linalg::rows(&self.ambient(), 0, self.d)
    }

    pub fn gamma1(&self) -> CMat {
        linalg::rows(&self.ambient(), self.d, self.d)
    }

    /// The boundary space `L^2` with its fundamental symmetry.
    pub fn boundary_space(&self) -> KreinSpace {
        KreinSpace::euclidean(self.d).doubled()
    }

    /// `Γ` as a relation from the doubled space to `L^2`.
    pub fn as_relation(&self) -> Relation {
        let graph = Subspace::span_unchecked(&linalg::vcat(self.frame(), &self.gamma));
        Relation::new(self.space().doubled(), self.boundary_space(), graph).expect("shapes agree")
    }

    fn kernel_of_rows(&self, start: usize) -> Relation {
        let coeffs = subspace::kernel(&linalg::rows(&self.gamma, start, self.d));
        let graph = Subspace::span_unchecked(&(self.frame() * coeffs.frame()));
        Relation::in_space(self.space(), graph).expect("graph lives in the doubled space")
    }

    /// `T0 = ker Γ0`.
    pub fn t0(&self) -> Relation {
        self.kernel_of_rows(0)
    }

    /// `T1 = ker Γ1`.
    pub fn t1(&self) -> Relation {
        self.kernel_of_rows(self.d)
    }

    /// `N = T0 ∩ T^⊥`.
    pub fn witness(&self) -> Relation {
        extensions::reduce(&self.t, &self.t0()).expect("T0 is a self-adjoint extension of T")
    }

    /// `Ĵ(N)`.
    pub fn flipped_witness(&self) -> Subspace {
        extensions::flip(self.space(), self.witness().graph())
    }

    /// Weyl family `M(z) = Γ(zI ∩ T^+)` as a relation in `L`.
    pub fn weyl(&self, z: C64) -> Relation {
        let eig = self.tplus.graph_eigenspace(z);
        let image = Subspace::span_unchecked(&(self.ambient() * eig.frame()));
        let l = KreinSpace::euclidean(self.d);
        Relation::in_space(&l, image).expect("image lives in L^2")
    }

    /// `M(z)` as a matrix when it is an everywhere defined operator.
    pub fn weyl_matrix(&self, z: C64) -> Result<CMat> {
        self.weyl(z).to_matrix().ok_or(Error::NotRegular { z })
    }

    /// `γ̂(z) = (Γ0 restricted to zI ∩ T^+)^{-1}`, a `2n × d` matrix.
    pub fn gamma_hat(&self, z: C64) -> Result<CMat> {
        let eig = self.tplus.graph_eigenspace(z);
        if eig.dim() != self.d {
            return Err(Error::NotRegular { z });
        }
        let g0 = self.gamma0() * eig.frame();
        let inv = linalg::inverse(&g0).ok_or(Error::NotRegular { z })?;
        Ok(eig.frame() * inv)
    }

    /// Gamma field `γ(z)`, an `n × d` matrix.
    pub fn gamma_field(&self, z: C64) -> Result<CMat> {
        Ok(linalg::rows(&self.gamma_hat(z)?, 0, self.space().dim()))
    }

    /// `(Γ0 restricted to Ĵ(N))^{-1}`, `(Γ1 restricted to N)^{-1}` and
    /// `β = Γ1 Γ0^{(-1)}`.
    pub fn inverse_maps(&self) -> Result<(CMat, CMat, CMat)> {
        let n = self.witness();
        let fj = self.flipped_witness().frame().clone();
        let fnn = n.graph().frame().clone();
        let g0 = self.gamma0() * &fj;
        let g1 = self.gamma1() * &fnn;
        let inv0 = fj * linalg::inverse(&g0).ok_or(Error::RestrictedSingular)?;
        let inv1 = fnn * linalg::inverse(&g1).ok_or(Error::RestrictedSingular)?;
        let beta = self.gamma1() * &inv0;
        Ok((inv0, inv1, beta))
    }

    pub fn beta(&self) -> Result<CMat> {
        Ok(self.inverse_maps()?.2)
    }

    /// `T_Θ = Γ^{-1}(Θ)` for a relation `Θ` in `L`.
    pub fn extension_for(&self, theta: &Relation) -> Result<Relation> {
        if theta.src().dim() != self.d || theta.tgt().dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: theta.src().dim() });
        }
        let coeffs = subspace::preimage(&self.gamma, theta.graph());
        let graph = Subspace::span_unchecked(&(self.frame() * coeffs.frame()));
        Relation::in_space(self.space(), graph)
    }

    /// `Γ' = X Γ` for a unitary `X` of the boundary form.
    pub fn transform(&self, x: &CMat) -> Result<BoundaryTriple> {
        let two_d = 2 * self.d;
        if x.nrows() != two_d || x.ncols() != two_d {
            return Err(Error::DimensionMismatch { expected: two_d, found: x.nrows() });
        }
        let form = green_form(self.d);
        let residual = linalg::max_abs(&(x.adjoint() * &form * x - &form));
        if residual > 1e-9 * (1.0 + linalg::op_norm(x).powi(2)) {
            return Err(Error::NotBoundaryUnitary(residual));
        }
        Ok(BoundaryTriple {
            t: self.t.clone(),
            tplus: self.tplus.clone(),
            gamma: x * &self.gamma,
            d: self.d,
        })
    }

    /// `Γ^β = [[I, 0], [-β, I]] Γ`.
    pub fn beta_shift(&self) -> Result<BoundaryTriple> {
        self.k_shift(&self.beta()?)
    }

    /// `(Γ1, -Γ0)`.
    pub fn transpose(&self) -> Result<BoundaryTriple> {
        self.transform(&green_form(self.d))
    }

    /// `(Γ0, Γ1 - K Γ0)` for Hermitian `K`.
    pub fn k_shift(&self, k: &CMat) -> Result<BoundaryTriple> {
        let d = self.d;
        self.transform(&linalg::block2(&linalg::eye(d), &linalg::zeros(d, d), &(-k), &linalg::eye(d)))
    }

    /// `Γ' = diag(κ^{-1}, κ) Γ`.
    pub fn scaled(&self, kappa: f64) -> Result<BoundaryTriple> {
        let d = self.d;
        let x = linalg::block_diag(
            &(linalg::eye(d) * linalg::c(1.0 / kappa, 0.0)),
            &(linalg::eye(d) * linalg::c(kappa, 0.0)),
        );
        self.transform(&x)
    }

    /// The triple `Γ Ũ^{-1}` for `T' = Ũ(T)` in `tgt`, where `Ũ = diag(U, U)`.
    pub fn transport(&self, u: &CMat, tgt: &KreinSpace) -> Result<BoundaryTriple> {
        let src = self.space();
        if !krein::is_standard_unitary(src, tgt, u) {
            return Err(Error::Invalid("transport needs a standard unitary".into()));
        }
        let ut = linalg::block_diag(u, u);
        let t_new = self.t.transform(u, u, tgt, tgt);
        let ut_inv = linalg::inverse(&ut).ok_or(Error::Invalid("singular unitary".into()))?;
        let gamma_ambient = self.ambient() * ut_inv;
        BoundaryTriple::from_ambient(&t_new, &gamma_ambient)
    }

    /// Max entry of `i F^H Ĵ F - Γ^H [[0, I], [-I, 0]] Γ` over the frame of `T^+`.
    pub fn green_residual(&self) -> f64 {
        let f = self.frame();
        let lhs = f.adjoint() * self.space().doubled().j() * f * IM;
        let rhs = self.gamma.adjoint() * green_form(self.d) * &self.gamma;
        linalg::max_abs(&(lhs - rhs))
    }

    /// Residual of the isometric boundary pair condition `Γ^{-1} ⊆ Γ^+`.
    pub fn boundary_pair_residual(&self) -> f64 {
        let rel = self.as_relation();
        subspace::containment_angle(rel.adjoint().graph(), rel.inverse().graph())
    }
}

/// `M(z)^* = M(z̄)`: distance between the two relations.
pub fn weyl_symmetry_residual(triple: &BoundaryTriple, z: C64) -> f64 {
    let m = triple.weyl(z);
    relation::distance(&m.hilbert_adjoint(), &triple.weyl(z.conj()))
}

/// `γ(z) - γ(z0) - (z - z0)(T0 - z)^{-1} γ(z0)`.
pub fn gamma_difference_residual(triple: &BoundaryTriple, z: C64, z0: C64) -> Result<f64> {
    let gz = triple.gamma_field(z)?;
    let g0 = triple.gamma_field(z0)?;
    let res = triple.t0().resolvent(z)?;
    Ok(linalg::max_abs(&(&gz - &g0 - res * &g0 * (z - z0))))
}

/// `(T1 - z)^{-1} - (T0 - z)^{-1} + γ(z) M(z)^{-1} γ(z̄)^+`.
pub fn krein_naimark_residual(triple: &BoundaryTriple, z: C64) -> Result<f64> {
    let r1 = triple.t1().resolvent(z)?;
    let r0 = triple.t0().resolvent(z)?;
    let gz = triple.gamma_field(z)?;
    let gbar = triple.gamma_field(z.conj())?;
    let m = triple.weyl_matrix(z)?;
    let m_inv = linalg::inverse(&m).ok_or(Error::NotRegular { z })?;
    let gbar_plus = gbar.adjoint() * triple.space().j();
    Ok(linalg::max_abs(&(r1 - r0 + gz * m_inv * gbar_plus)))
}

/// `(z̄ - z0)[γ(z) ·, γ(z0) ·] - (M(z̄) - M(z0))`.
pub fn isometry_residual(triple: &BoundaryTriple, z: C64, z0: C64) -> Result<f64> {
    let gz = triple.gamma_field(z)?;
    let g0 = triple.gamma_field(z0)?;
    let lhs = gz.adjoint() * triple.space().j() * g0 * (z.conj() - z0);
    let rhs = triple.weyl_matrix(z.conj())? - triple.weyl_matrix(z0)?;
    Ok(linalg::max_abs(&(lhs - rhs)))
}

/// `ρ̂_s(T) = ρ̂(T) ∩ ρ̂(T)^*`.
pub fn in_rho_hat_s(t: &Relation, z: C64) -> bool {
    extensions::regular_type(t, z) && extensions::regular_type(t, z.conj())
}

#[derive(Debug, Clone)]
pub struct TransferPoint {
    pub z: C64,
    pub index: usize,
    /// Membership in the three sets that must coincide.
    pub sets: [bool; 3],
}

impl TransferPoint {
    pub fn consistent(&self) -> bool {
        self.sets[0] == self.sets[1] && self.sets[1] == self.sets[2]
    }
}

/// Regular-point transfer between two triples whose Weyl families agree on
/// the symmetric set `grid`, for `i = 0, 1`.
pub fn transfer_check(a: &BoundaryTriple, b: &BoundaryTriple, grid: &[C64]) -> Vec<TransferPoint> {
    let kernels = [(a.t0(), b.t0()), (a.t1(), b.t1())];
    let mut out = Vec::new();
    for (index, (ai, bi)) in kernels.iter().enumerate() {
        let any_a = grid.iter().any(|&z| extensions::regular(ai, z));
        let any_b = grid.iter().any(|&z| extensions::regular(bi, z));
        if !(any_a && any_b) {
            continue;
        }
        for &z in grid {
            let ra = extensions::regular(ai, z);
            let rb = extensions::regular(bi, z);
            out.push(TransferPoint {
                z,
                index,
                sets: [ra && rb, ra && in_rho_hat_s(b.t(), z), rb && in_rho_hat_s(a.t(), z)],
            });
        }
    }
    out
}

/// Hermitian `K` with `Γ'0 = Γ0`, `Γ'1 = Γ1 - K Γ0`, when it exists.
pub fn k_shift_between(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<Option<CMat>> {
    if !relation::equal(a.t(), b.t()) || a.boundary_dim() != b.boundary_dim() {
        return Err(Error::Invalid("K-shift compares triples of the same relation".into()));
    }
    let scale = 1.0 + linalg::op_norm(&a.ambient());
    if linalg::max_abs(&(a.gamma0() - b.gamma0())) > 1e-9 * scale {
        return Ok(None);
    }
    let n = a.witness();
    let on_n = (a.gamma1() - b.gamma1()) * n.graph().frame();
    if linalg::max_abs(&on_n) > 1e-9 * scale {
        return Ok(None);
    }
    let (inv0, _, beta) = a.inverse_maps()?;
    let beta0 = b.gamma1() * inv0;
    Ok(Some(beta - beta0))
}
