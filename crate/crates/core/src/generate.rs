//! Seeded random instances: fundamental symmetries, symmetric relations,
//! boundary triples and standard unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::boundary::BoundaryTriple;
use crate::error::{Error, Result};
use crate::extensions::{self, default_grid};
use crate::krein::KreinSpace;
use crate::linalg::{self, c, CMat, C64};
use crate::relation::Relation;
use crate::subspace::Subspace;

/// Independent stream `index` of the master seed.
pub fn trial_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    linalg::hermitian_part(&gaussian(n, n, rng))
}

pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    if n == 0 {
        return linalg::zeros(0, 0);
    }
    let qr = gaussian(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        let col = q.column(k) * phase;
        q.set_column(k, &col);
    }
    q
}

/// Invertible matrix with condition number bounded by roughly `4`.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let s = CMat::from_fn(n, n, |i, j| {
        if i == j {
            c(rng.gen_range(0.5..2.0), 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    u * s * v
}

/// `U diag(I_p, -I_q) U^H` for a random unitary `U`.
pub fn random_fundamental_symmetry<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> CMat {
    let u = random_unitary(p + q, rng);
    let d = KreinSpace::diagonal(p, q);
    let j = &u * d.j() * u.adjoint();
    linalg::hermitian_part(&j)
}

pub fn random_space<R: Rng + ?Sized>(p: usize, q: usize, rng: &mut R) -> KreinSpace {
    KreinSpace::new(random_fundamental_symmetry(p, q, rng)).expect("valid fundamental symmetry")
}

/// Self-adjoint relation in `space`: `J 𝔗0` with `𝔗0` the inverse Cayley
/// transform of a random unitary. With `multivalued`, the unitary is given
/// the eigenvalue `1`, which produces a nontrivial multivalued part.
pub fn random_self_adjoint<R: Rng + ?Sized>(
    space: &KreinSpace,
    multivalued: bool,
    rng: &mut R,
) -> Result<Relation> {
    let n = space.dim();
    let u = random_unitary(n, rng);
    let phases = CMat::from_fn(n, n, |i, j| {
        if i != j {
            c(0.0, 0.0)
        } else if multivalued && i == 0 {
            c(1.0, 0.0)
        } else {
            C64::from_polar(1.0, rng.gen_range(0.2..(2.0 * std::f64::consts::PI - 0.2)))
        }
    });
    let cm = &u * phases * u.adjoint();
    let t0h = extensions::inverse_cayley(&cm)?;
    Ok(extensions::krein_form(&t0h, space))
}

#[derive(Debug, Clone)]
pub struct SymmetricSpec {
    pub p: usize,
    pub q: usize,
    /// Defect `d`; the generated relation has `dim T = p + q - d`.
    pub defect: usize,
    pub require_simple: bool,
    pub require_property_p: bool,
    /// Use `J = diag(I_p, -I_q)` instead of a random rotation of it.
    pub diagonal_j: bool,
    pub max_attempts: usize,
}

impl SymmetricSpec {
    pub fn new(p: usize, q: usize, defect: usize) -> Self {
        SymmetricSpec {
            p,
            q,
            defect,
            require_simple: false,
            require_property_p: false,
            diagonal_j: false,
            max_attempts: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetricInstance {
    pub space: KreinSpace,
    pub t: Relation,
    /// The hyper-maximal neutral relation `T` was cut from.
    pub t0: Relation,
}

/// A `(dim - d)`-dimensional subspace `T` of a random hyper-maximal neutral
/// subspace of the doubled space, with optional rejection filters.
pub fn gen_symmetric<R: Rng + ?Sized>(spec: &SymmetricSpec, rng: &mut R) -> Result<SymmetricInstance> {
    let n = spec.p + spec.q;
    if spec.defect > n {
        return Err(Error::Invalid(format!("defect {} exceeds dimension {n}", spec.defect)));
    }
    let grid = default_grid();
    for _ in 0..spec.max_attempts.max(1) {
        let space = if spec.diagonal_j {
            KreinSpace::diagonal(spec.p, spec.q)
        } else {
            random_space(spec.p, spec.q, rng)
        };
        let t0 = random_self_adjoint(&space, false, rng)?;
        let coeffs = gaussian(n, n - spec.defect, rng);
        let graph = Subspace::span(&(t0.graph().frame() * coeffs))?;
        let t = Relation::in_space(&space, graph)?;
        if t.dim() != n - spec.defect {
            continue;
        }
        if spec.require_property_p && !extensions::property_p(&t) {
            continue;
        }
        if spec.require_simple && !extensions::simple_check(&t, &grid)?.simple {
            continue;
        }
        return Ok(SymmetricInstance { space, t, t0 });
    }
    Err(Error::SamplingExhausted(spec.max_attempts))
}

/// Boundary triple built from a witness `N`: with `ψ: N → L` invertible and
/// `φ` on `Ĵ(N)` fixed by `⟨φ v, ψ u⟩ = i[v, u]`, set `Γ0 = φ`, `Γ1 = ψ`
/// (both zero on `T`), then apply a random boundary unitary that keeps
/// `ker Γ0 = T ⊕ N`.
pub fn gen_triple_with_witness<R: Rng + ?Sized>(
    t: &Relation,
    n: &Relation,
    mix: bool,
    rng: &mut R,
) -> Result<BoundaryTriple> {
    let space = t.src();
    let d = n.dim();
    if d == 0 {
        return Err(Error::Invalid("relation is self-adjoint; the boundary space would be trivial".into()));
    }
    let fnn = n.graph().frame().clone();
    let fj = space.doubled().j() * &fnn;
    let psi = random_invertible(d, rng);
    let psi_inv = linalg::inverse(&psi).ok_or(Error::RestrictedSingular)?;
    let phi = psi_inv.adjoint() * c(0.0, -1.0);
    let gamma = linalg::vcat(&(phi * fj.adjoint()), &(psi * fnn.adjoint()));
    let gamma = if mix {
        let k = random_hermitian(d, rng);
        let a = random_invertible(d, rng);
        let a_inv_h = linalg::inverse(&a).ok_or(Error::RestrictedSingular)?.adjoint();
        let shift = linalg::block2(&linalg::eye(d), &linalg::zeros(d, d), &k, &linalg::eye(d));
        let scale = linalg::block_diag(&a, &a_inv_h);
        scale * shift * gamma
    } else {
        gamma
    };
    BoundaryTriple::from_ambient(t, &gamma)
}

/// Random boundary triple for `T^+`.
pub fn gen_triple<R: Rng + ?Sized>(t: &Relation, rng: &mut R) -> Result<BoundaryTriple> {
    let n = extensions::sample_witness(t, rng)?;
    gen_triple_with_witness(t, &n, true, rng)
}

/// Standard unitary `Π (I - A)(I + A)^{-1}` from `src` to `tgt`, where `A`
/// is skew-adjoint for `J` and `Π` maps the canonical halves of `J` onto
/// those of `J'`.
pub fn gen_standard_unitary<R: Rng + ?Sized>(
    src: &KreinSpace,
    tgt: &KreinSpace,
    rng: &mut R,
) -> Result<CMat> {
    if src.signature() != tgt.signature() {
        return Err(Error::SignatureMismatch(src.signature(), tgt.signature()));
    }
    let n = src.dim();
    let (p, m) = src.canonical_frames();
    let (pp, mm) = tgt.canonical_frames();
    let pi = linalg::hcat(&pp, &mm) * linalg::hcat(&p, &m).adjoint();
    for _ in 0..16 {
        let s = random_hermitian(n, rng) * c(0.0, 0.6);
        let a = src.j() * s;
        let id = linalg::eye(n);
        if let Some(inv) = linalg::inverse(&(&id + &a)) {
            return Ok(&pi * (&id - &a) * inv);
        }
    }
    Err(Error::SamplingExhausted(16))
}
