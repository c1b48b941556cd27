//! Standard unitaries between doubled spaces that intertwine two boundary
//! triples, and reconstruction of a similarity from matching Weyl families.

use crate::boundary::BoundaryTriple;
use crate::error::{Error, Result};
use crate::extensions::{self, default_grid};
use crate::krein::{self, KreinSpace};
use crate::linalg::{self, CMat, C64, IM};
use crate::relation::{self, Relation};
use crate::subspace::{self, Subspace};
use crate::tol::Tol;

/// Orthonormal frames of `T`, `N`, `Ĵ(N)`, `Ĵ(T)` for a triple.
#[derive(Debug, Clone)]
pub struct Frames {
    pub t: CMat,
    pub n: CMat,
    pub jn: CMat,
    pub jt: CMat,
}

impl Frames {
    pub fn of(triple: &BoundaryTriple) -> Frames {
        let jhat = triple.space().doubled();
        let t = triple.t().graph().frame().clone();
        let n = triple.witness().graph().frame().clone();
        Frames { jn: jhat.j() * &n, jt: jhat.j() * &t, t, n }
    }

    /// `[T N]`, a frame of `T0`.
    pub fn t0(&self) -> CMat {
        linalg::hcat(&self.t, &self.n)
    }

    /// `[ĴT ĴN]`, a frame of `Ĵ(T0)`.
    pub fn jt0(&self) -> CMat {
        linalg::hcat(&self.jt, &self.jn)
    }

    /// `[T N ĴN ĴT]`, a unitary matrix.
    pub fn all(&self) -> CMat {
        linalg::hcat(&linalg::hcat(&self.t0(), &self.jn), &self.jt)
    }
}

fn check_pair(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<()> {
    if a.space().signature() != b.space().signature() {
        return Err(Error::SignatureMismatch(a.space().signature(), b.space().signature()));
    }
    if a.boundary_dim() != b.boundary_dim() || a.t().dim() != b.t().dim() {
        return Err(Error::Invalid("triples have different dimensions".into()));
    }
    Ok(())
}

/// `V0 = Γ'^{-1} Γ` as a relation between the doubled spaces.
pub fn v0(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<Relation> {
    b.as_relation().inverse().compose(&a.as_relation())
}

/// `Γ'0^{(-1)} Γ0 + Γ'1^{(-1)}(Γ1 - β' Γ0)`, a `2n' × 2n` matrix meaningful on `T^+`.
pub fn v0_singular_formula(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<CMat> {
    let (inv0b, inv1b, betab) = b.inverse_maps()?;
    Ok(inv0b * a.gamma0() + inv1b * (a.gamma1() - betab * a.gamma0()))
}

/// Graph of [`v0_singular_formula`] restricted to `T^+`.
pub fn v0_singular_relation(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<Relation> {
    let m = v0_singular_formula(a, b)?;
    let f = a.frame();
    let graph = Subspace::span(&linalg::vcat(f, &(m * f)))?;
    Relation::new(a.space().doubled(), b.space().doubled(), graph)
}

/// Canonical operator part of [`v0`]: its graph with the multivalued part
/// `T'` split off orthogonally.
pub fn v0_operator_part(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<Relation> {
    Ok(v0(a, b)?.operator_part())
}

/// `Γ0^{(-1)} Γ'0 + Γ1^{(-1)}(Γ'1 - β Γ'0)`, the inverse of `(V0)_s` on `Σ`.
pub fn v0_singular_inverse_formula(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<CMat> {
    v0_singular_formula(b, a)
}

#[derive(Debug, Clone)]
pub struct SigmaUnitarity {
    /// `max |[V f, V g]' - [f, g]|` over an orthonormal basis of `Σ`.
    pub gram: f64,
    /// Distance between `V(Σ)` and `Σ'`.
    pub image_distance: f64,
    /// `max |V^{-1} V f - f|` for `f` in `Σ`, with the displayed inverse.
    pub inverse: f64,
}

/// Checks that `(V0)_s` restricted to `Σ = T^+ ∩ T^⊥` is a standard unitary
/// onto `Σ'`, and that the inverse formula inverts it.
pub fn sigma_unitary_check(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<SigmaUnitarity> {
    check_pair(a, b)?;
    let v = v0_singular_formula(a, b)?;
    let v_inv = v0_singular_inverse_formula(a, b)?;
    let sigma = extensions::companion_part(a.t());
    let sigma_b = extensions::companion_part(b.t());
    let f = sigma.frame();
    let vf = &v * f;
    let lhs = vf.adjoint() * b.space().doubled().j() * &vf;
    let rhs = f.adjoint() * a.space().doubled().j() * f;
    Ok(SigmaUnitarity {
        gram: linalg::max_abs(&(lhs - rhs)),
        image_distance: subspace::distance(&Subspace::span_unchecked(&vf), &sigma_b),
        inverse: linalg::max_abs(&(v_inv * &vf - f)),
    })
}

/// `V = (V0)_s + τ P_T` on `T^+`, zero on its complement. `τ` is given in
/// the orthonormal frames of `T` and `T'`.
pub fn build_v_from_tau(a: &BoundaryTriple, b: &BoundaryTriple, tau: &CMat) -> Result<CMat> {
    check_pair(a, b)?;
    let (ft, ftb) = (a.t().graph().frame(), b.t().graph().frame());
    if tau.shape() != (ftb.ncols(), ft.ncols()) {
        return Err(Error::DimensionMismatch { expected: ft.ncols(), found: tau.ncols() });
    }
    if linalg::rank(tau, &Tol::current()) != ftb.ncols() {
        return Err(Error::TauNotBijective);
    }
    let l = ftb * tau * ft.adjoint();
    Ok((v0_singular_formula(a, b)? + l) * a.tplus().graph().projector())
}

/// `Γ' = Γ V^{-1}` as an equality of relations, for `V` given by its graph.
pub fn membership_relation(v: &Relation, a: &BoundaryTriple, b: &BoundaryTriple) -> Result<bool> {
    if !v.src().same_as(&a.space().doubled()) || !v.tgt().same_as(&b.space().doubled()) {
        return Err(Error::HostMismatch);
    }
    let composed = a.as_relation().compose(&v.inverse())?;
    Ok(relation::equal(&composed, &b.as_relation()))
}

/// Graph of the matrix `v` restricted to `T^+`.
pub fn restricted_graph(v: &CMat, a: &BoundaryTriple, b: &BoundaryTriple) -> Result<Relation> {
    let f = a.frame();
    let graph = Subspace::span(&linalg::vcat(f, &(v * f)))?;
    Relation::new(a.space().doubled(), b.space().doubled(), graph)
}

/// Operator criterion for `V` on `T^+` with `T ⊆ dom V`:
/// `V(T) = T'` and `ran((V0)_s - V) ⊆ T'`.
pub fn operator_membership_criterion(v: &CMat, a: &BoundaryTriple, b: &BoundaryTriple) -> Result<bool> {
    check_pair(a, b)?;
    let t_image = subspace::image(v, a.t().graph());
    let diff = (v0_singular_formula(a, b)? - v) * a.frame();
    let diff_range = Subspace::span_unchecked(&diff);
    Ok(subspace::equal(&t_image, b.t().graph())
        && subspace::contains(b.t().graph(), &diff_range))
}

#[derive(Debug, Clone)]
pub struct WMaps {
    /// `w0 = Ĵ' Γ'0^{(-1)} Γ0 Ĵ` on `N`, in frame coordinates.
    pub w0: CMat,
    /// `w1 = Γ'1^{(-1)} Γ1` on `N`.
    pub w1: CMat,
    /// `w01 = Γ'1^{(-1)}(β - β') Γ0` from `Ĵ(N)` to `N'`.
    pub w01: CMat,
}

pub fn w_maps(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<WMaps> {
    check_pair(a, b)?;
    let fa = Frames::of(a);
    let fb = Frames::of(b);
    let (_, _, beta) = a.inverse_maps()?;
    let (inv0b, inv1b, betab) = b.inverse_maps()?;
    let ja = a.space().doubled();
    let jb = b.space().doubled();
    let w0 = fb.n.adjoint() * jb.j() * &inv0b * a.gamma0() * ja.j() * &fa.n;
    let w1 = fb.n.adjoint() * &inv1b * a.gamma1() * &fa.n;
    let w01 = fb.n.adjoint() * inv1b * (beta - betab) * a.gamma0() * &fa.jn;
    Ok(WMaps { w0, w1, w01 })
}

/// `[Γ0^{(-1)} l, Γ1^{(-1)} l'] - [Γ'0^{(-1)} l, Γ'1^{(-1)} l']'` over all `l, l'`.
pub fn llp_residual(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<f64> {
    let (inv0a, inv1a, _) = a.inverse_maps()?;
    let (inv0b, inv1b, _) = b.inverse_maps()?;
    let lhs = inv0a.adjoint() * a.space().doubled().j() * inv1a;
    let rhs = inv0b.adjoint() * b.space().doubled().j() * inv1b;
    Ok(linalg::max_abs(&(lhs - rhs)))
}

/// `E0` on `Ĵ'(N')` in frame coordinates, `-i Ĵ' Γ'1^{(-1)}(β - β')Γ'0`.
pub fn e0(a: &BoundaryTriple, b: &BoundaryTriple) -> Result<CMat> {
    let fb = Frames::of(b);
    let (_, _, beta) = a.inverse_maps()?;
    let (_, inv1b, betab) = b.inverse_maps()?;
    Ok(fb.n.adjoint() * inv1b * (beta - betab) * b.gamma0() * &fb.jn * -IM)
}

/// `E0 = -i Ĵ' w01 Ĵ w0^{-1} Ĵ'`, from the maps on the witnesses.
pub fn e0_from_w(w: &WMaps) -> Result<CMat> {
    let w0_inv = linalg::inverse(&w.w0).ok_or(Error::SingularB)?;
    Ok(&w.w01 * w0_inv * -IM)
}

/// Standard unitary `V ∈ 𝒱(Γ, Γ')` with `V|_T = τ`, `P_{T'} V|_N = σ` and
/// free self-adjoint parameter `Θ` on `Ĵ'(T')`. All three are given in the
/// orthonormal frame coordinates of [`Frames`].
pub fn build_standard_v(
    a: &BoundaryTriple,
    b: &BoundaryTriple,
    tau: &CMat,
    sigma: &CMat,
    theta: &CMat,
) -> Result<CMat> {
    let cross = linalg::zeros(a.t().dim(), a.boundary_dim());
    build_standard_v_with_cross(a, b, tau, sigma, theta, &cross)
}

/// [`build_standard_v`] with the block of `E` coupling `Ĵ'(N')` to `T'` set
/// to `cross` instead of zero. Every such `V` is again in `𝒱(Γ, Γ')`.
pub fn build_standard_v_with_cross(
    a: &BoundaryTriple,
    b: &BoundaryTriple,
    tau: &CMat,
    sigma: &CMat,
    theta: &CMat,
    cross: &CMat,
) -> Result<CMat> {
    check_pair(a, b)?;
    let r = a.t().dim();
    let d = a.boundary_dim();
    if tau.shape() != (r, r)
        || sigma.shape() != (r, d)
        || theta.shape() != (r, r)
        || cross.shape() != (r, d)
    {
        return Err(Error::Invalid("parameter shapes do not match dim T and d".into()));
    }
    if linalg::inverse(tau).is_none() {
        return Err(Error::TauNotBijective);
    }
    let herm = linalg::max_abs(&(theta - theta.adjoint()));
    if herm > 1e-10 * (1.0 + linalg::max_abs(theta)) {
        return Err(Error::ThetaNotSelfAdjoint(herm));
    }
    let fa = Frames::of(a);
    let fb = Frames::of(b);
    let w = w_maps(a, b)?;
    // V on T0 in the frames [T N] -> [T' N']: [[τ, σ], [0, w1]].
    let a0 = linalg::block2(tau, sigma, &linalg::zeros(d, r), &w.w1);
    let b_inv = linalg::inverse(&a0.adjoint()).ok_or(Error::SingularB)?;
    let e = linalg::block2(theta, cross, &cross.adjoint(), &e0(a, b)?);
    let p_b = fb.t0();
    let q_b = fb.jt0();
    let on_t0 = &p_b * &a0 * fa.t0().adjoint();
    let on_jt0 = (&q_b + &p_b * e * IM) * b_inv * fa.jt0().adjoint();
    Ok(on_t0 + on_jt0)
}

#[derive(Debug, Clone)]
pub struct Membership {
    /// `max |Γ' V - Γ|` on `T^+`.
    pub intertwining: f64,
    /// `V(T^+) = T'^+` as a subspace distance.
    pub tplus_distance: f64,
    /// `max |V^H Ĵ' V - Ĵ|`.
    pub isometry: f64,
    pub member: bool,
}

/// Whether `V` is a standard unitary with `Γ' = Γ V^{-1}`.
pub fn membership(v: &CMat, a: &BoundaryTriple, b: &BoundaryTriple) -> Membership {
    let ja = a.space().doubled();
    let jb = b.space().doubled();
    let f = a.frame();
    let intertwining = linalg::max_abs(&(b.ambient() * v * f - a.ambient() * f));
    let image = Subspace::span_unchecked(&(v * f));
    let tplus_distance = subspace::distance(&image, b.tplus().graph());
    let isometry = krein::isometry_residual(&ja, &jb, v);
    let scale = 1.0 + linalg::op_norm(v).powi(2) + linalg::op_norm(&a.ambient()).powi(2);
    Membership {
        member: intertwining <= 1e-8 * scale
            && tplus_distance <= Tol::current().angle
            && isometry <= 1e-8 * scale,
        intertwining,
        tplus_distance,
        isometry,
    }
}

#[derive(Debug, Clone)]
pub struct Blocks {
    pub a: CMat,
    pub b: CMat,
    pub c: CMat,
    pub d: CMat,
    /// Residuals of the six identities satisfied by a standard unitary.
    pub residuals: [f64; 6],
}

/// Splits `V: H^2 → H'^2` into `[[A, B], [C, D]]` and evaluates
/// `A^+D - C^+B = I`, `AD^+ - BC^+ = I'`, `A^+C = C^+A`, `AB^+ = BA^+`,
/// `B^+D = D^+B`, `CD^+ = DC^+`.
pub fn vabcd(v: &CMat, src: &KreinSpace, tgt: &KreinSpace) -> Blocks {
    let (n, m) = (src.dim(), tgt.dim());
    let a = v.view((0, 0), (m, n)).into_owned();
    let b = v.view((0, n), (m, n)).into_owned();
    let c = v.view((m, 0), (m, n)).into_owned();
    let d = v.view((m, n), (m, n)).into_owned();
    let plus = |x: &CMat| src.j() * x.adjoint() * tgt.j();
    let (ap, bp, cp, dp) = (plus(&a), plus(&b), plus(&c), plus(&d));
    let residuals = [
        linalg::max_abs(&(&ap * &d - &cp * &b - linalg::eye(n))),
        linalg::max_abs(&(&a * &dp - &b * &cp - linalg::eye(m))),
        linalg::max_abs(&(&ap * &c - &cp * &a)),
        linalg::max_abs(&(&a * &bp - &b * &ap)),
        linalg::max_abs(&(&bp * &d - &dp * &b)),
        linalg::max_abs(&(&c * &dp - &d * &cp)),
    ];
    Blocks { a, b, c, d, residuals }
}

/// `p_V(z) = z^2 B + z(A - D) - C`.
pub fn pencil(blocks: &Blocks, z: C64) -> CMat {
    &blocks.b * (z * z) + (&blocks.a - &blocks.d) * z - &blocks.c
}

#[derive(Debug, Clone)]
pub struct WeylCriterion {
    pub z: C64,
    /// `𝔑_z(T^+) ⊆ 𝔑_z(T ∔ V^{-1}(zI))`.
    pub containment: bool,
    /// `M_Γ(z) = M_Γ'(z)` compared directly.
    pub direct: bool,
    /// `𝔑_z(T^+) ⊆ ker p_V(z)`; sufficient for equality, not necessary.
    pub pencil: bool,
}

pub fn weyl_equality_criterion(
    a: &BoundaryTriple,
    b: &BoundaryTriple,
    v: &CMat,
    z: C64,
) -> Result<WeylCriterion> {
    check_pair(a, b)?;
    let space = a.space();
    let scalar_b = Relation::scalar(b.space(), z);
    let pre = subspace::preimage(v, scalar_b.graph());
    let combined = Relation::in_space(space, subspace::sum(a.t().graph(), &pre))?;
    let eig = a.tplus().eigenspace(z);
    let containment = subspace::contains(&combined.eigenspace(z), &eig);
    let direct = relation::equal(&a.weyl(z), &b.weyl(z));
    let blocks = vabcd(v, space, b.space());
    let pencil_ok = subspace::contains(&subspace::kernel(&pencil(&blocks, z)), &eig);
    Ok(WeylCriterion { z, containment, direct, pencil: pencil_ok })
}

#[derive(Debug, Clone)]
pub struct InvarianceAudit {
    /// `W(T) = T` with `W = Ũ^{-1} V`.
    pub preserves_t: bool,
    /// `W(𝔑̂_z(T^+)) = 𝔑̂_z(T^+)` at each grid point.
    pub preserves_eigenspaces: bool,
    /// Norms of `B_W`, `C_W`, `A_W - D_W`.
    pub off_diagonal: [f64; 3],
}

pub fn w_invariance_audit(
    a: &BoundaryTriple,
    u: &CMat,
    v: &CMat,
    grid: &[C64],
) -> Result<InvarianceAudit> {
    let ut = linalg::block_diag(u, u);
    let ut_inv = linalg::inverse(&ut).ok_or(Error::Invalid("singular unitary".into()))?;
    let w = ut_inv * v;
    let t = a.t().graph();
    let preserves_t = subspace::equal(&subspace::image(&w, t), t);
    let tp = a.tplus();
    let preserves_eigenspaces = grid.iter().all(|&z| {
        let e = tp.graph_eigenspace(z);
        subspace::equal(&subspace::image(&w, &e), &e)
    });
    let space = a.space();
    let blocks = vabcd(&w, space, space);
    Ok(InvarianceAudit {
        preserves_t,
        preserves_eigenspaces,
        off_diagonal: [
            linalg::op_norm(&blocks.b),
            linalg::op_norm(&blocks.c),
            linalg::op_norm(&(&blocks.a - &blocks.d)),
        ],
    })
}

/// Parameters of a standard unitary `V ∈ 𝒱(Γ, Γ')` read off its blocks.
#[derive(Debug, Clone)]
pub struct Parameters {
    pub tau: CMat,
    pub sigma: CMat,
    pub theta: CMat,
    /// Block of `E` from `Ĵ'(N')` to `T'`.
    pub cross: CMat,
    /// Full `E` on `Ĵ'(T0')`.
    pub e: CMat,
    /// `|E - E^H|`.
    pub e_hermitian: f64,
    /// `|E restricted to Ĵ'(N') - E0|`.
    pub e0_mismatch: f64,
    /// `|P_{Ĵ'T0'} V restricted to Ĵ(T0) - B^{-1}|`.
    pub b_inverse_mismatch: f64,
    /// Components of `V(T0)` outside `T0'`.
    pub leak: f64,
}

pub fn extract_parameters(a: &BoundaryTriple, b: &BoundaryTriple, v: &CMat) -> Result<Parameters> {
    check_pair(a, b)?;
    let r = a.t().dim();
    let d = a.boundary_dim();
    let fa = Frames::of(a);
    let fb = Frames::of(b);
    let a0 = fb.t0().adjoint() * v * fa.t0();
    let leak = linalg::max_abs(&(fb.jt0().adjoint() * v * fa.t0()));
    let tau = a0.view((0, 0), (r, r)).into_owned();
    let sigma = a0.view((0, r), (r, d)).into_owned();
    let b_inv = linalg::inverse(&a0.adjoint()).ok_or(Error::SingularB)?;
    let b_inverse_mismatch = linalg::max_abs(&(fb.jt0().adjoint() * v * fa.jt0() - &b_inv));
    let e = fb.t0().adjoint() * v * fa.jt0() * a0.adjoint() * -IM;
    let theta = e.view((0, 0), (r, r)).into_owned();
    let e0_block = e.view((r, r), (d, d)).into_owned();
    let cross = e.view((0, r), (r, d)).into_owned();
    let e0_mismatch = linalg::max_abs(&(e0_block - e0(a, b)?));
    Ok(Parameters {
        e_hermitian: linalg::max_abs(&(&e - e.adjoint())),
        tau,
        sigma,
        theta: linalg::hermitian_part(&theta),
        cross,
        e,
        e0_mismatch,
        b_inverse_mismatch,
        leak,
    })
}

#[derive(Debug, Clone)]
pub struct Similarity {
    /// Standard unitary `U: H → H'` with `Γ' = Γ Ũ^{-1}`.
    pub u: CMat,
    /// Relative residual of the joint solve `U γ(z) = γ'(z)` over the grid.
    pub solve_residual: f64,
    /// `max |U^H J' U - J|`.
    pub isometry: f64,
    /// Distances of `Ũ(T0)`, `Ũ(T1)`, `Ũ(T)` to `T0'`, `T1'`, `T'`.
    pub kernel_distances: [f64; 3],
    pub parameters: Parameters,
    /// Off-diagonal size of `W = Ũ^{-1} V` (`B_W`, `C_W`, `A_W - D_W`) for
    /// `V` rebuilt from all extracted parameters.
    pub off_diagonal: [f64; 3],
    /// The same for `V` rebuilt with the cross block of `E` set to zero.
    pub off_diagonal_zero_cross: [f64; 3],
    /// `max |Γ' Ũ_total - Γ|` on `T^+`.
    pub intertwining: f64,
}

#[derive(Debug, Clone)]
pub enum SimilarityOutcome {
    Similar(Box<Similarity>),
    /// Weyl families differ at `z`.
    NotSimilar { z: C64, discrepancy: f64 },
}

/// Size of the difference between `M(z)` and `M'(z)`: matrix entries when
/// both are operators, otherwise the subspace angle.
pub fn weyl_discrepancy(a: &BoundaryTriple, b: &BoundaryTriple, z: C64) -> f64 {
    let (ma, mb) = (a.weyl(z), b.weyl(z));
    match (ma.to_matrix(), mb.to_matrix()) {
        (Some(x), Some(y)) => linalg::max_abs(&(x - y)),
        _ => relation::distance(&ma, &mb),
    }
}

fn minimal(t: &Relation, grid: &[C64]) -> bool {
    let tp = t.adjoint();
    let n = t.src().dim();
    let mut span = Subspace::zero(n);
    for &z in grid {
        span = subspace::sum(&span, &tp.eigenspace(z));
    }
    span.dim() == n
}

/// Decides similarity of two triples from their Weyl families on `grid`
/// and, when they agree, reconstructs the standard unitary.
pub fn reconstruct_similarity(
    a: &BoundaryTriple,
    b: &BoundaryTriple,
    grid: &[C64],
) -> Result<SimilarityOutcome> {
    check_pair(a, b)?;
    let grid: Vec<C64> = if grid.is_empty() { default_grid() } else { grid.to_vec() };
    for &z in &grid {
        if !relation::equal(&a.weyl(z), &b.weyl(z)) {
            return Ok(SimilarityOutcome::NotSimilar { z, discrepancy: weyl_discrepancy(a, b, z) });
        }
    }
    for (name, tr) in [("first", a), ("second", b)] {
        let (t0, t1) = (tr.t0(), tr.t1());
        if let Some(&z) =
            grid.iter().find(|&&z| !extensions::regular(&t0, z) || !extensions::regular(&t1, z))
        {
            return Err(Error::Hypothesis(format!(
                "{z} is not in the resolvent sets of both kernels of the {name} triple"
            )));
        }
        if !minimal(tr.t(), &grid) {
            return Err(Error::Hypothesis(format!(
                "defect spaces of the {name} triple do not span the space over the grid"
            )));
        }
    }

    let mut g = linalg::zeros(a.space().dim(), 0);
    let mut gp = linalg::zeros(b.space().dim(), 0);
    for &z in &grid {
        g = linalg::hcat(&g, &a.gamma_field(z)?);
        gp = linalg::hcat(&gp, &b.gamma_field(z)?);
    }
    let tol = Tol::current();
    let u = &gp * linalg::pinv(&g, &tol);
    let solve_residual = linalg::op_norm(&(&u * &g - &gp)) / (1.0 + linalg::op_norm(&gp));
    let isometry = krein::isometry_residual(a.space(), b.space(), &u);
    if !krein::is_standard_unitary(a.space(), b.space(), &u) {
        return Err(Error::Hypothesis(format!(
            "reconstructed map is not a standard unitary (isometry residual {isometry:.3e})"
        )));
    }

    let ut = linalg::block_diag(&u, &u);
    let moved = |r: &Relation, s: &Relation| {
        subspace::distance(&subspace::image(&ut, r.graph()), s.graph())
    };
    let kernel_distances = [moved(&a.t0(), &b.t0()), moved(&a.t1(), &b.t1()), moved(a.t(), b.t())];

    let parameters = extract_parameters(a, b, &ut)?;
    let Parameters { tau, sigma, theta, cross, .. } = &parameters;
    let ut_inv = linalg::inverse(&ut).ok_or(Error::Invalid("singular unitary".into()))?;
    let split = |v: &CMat| {
        let blocks = vabcd(&(&ut_inv * v), a.space(), a.space());
        let off = [
            linalg::op_norm(&blocks.b),
            linalg::op_norm(&blocks.c),
            linalg::op_norm(&(&blocks.a - &blocks.d)),
        ];
        (blocks, off)
    };
    let (_, off_diagonal_zero_cross) = split(&build_standard_v(a, b, tau, sigma, theta)?);
    let (blocks, off_diagonal) =
        split(&build_standard_v_with_cross(a, b, tau, sigma, theta, cross)?);
    let u_total = &u * &blocks.a;
    let ut_total = linalg::block_diag(&u_total, &u_total);
    let f = a.frame();
    let intertwining = linalg::max_abs(&(b.ambient() * ut_total * f - a.ambient() * f));
    Ok(SimilarityOutcome::Similar(Box::new(Similarity {
        u: u_total,
        solve_residual,
        isometry,
        kernel_distances,
        parameters,
        off_diagonal,
        off_diagonal_zero_cross,
        intertwining,
    })))
}
