//! Finite-dimensional Krein spaces `(C^n, [f, g] = f^H J g)`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, C64, IM};
use crate::subspace::{self, Subspace};
use crate::tol::{self, Tol};

/// `C^n` with a fundamental symmetry `J` (Hermitian, `J^2 = I`).
#[derive(Debug, Clone)]
pub struct KreinSpace {
    j: CMat,
    p: usize,
    q: usize,
}

impl KreinSpace {
    pub fn new(j: CMat) -> Result<Self> {
        if j.nrows() != j.ncols() {
            return Err(Error::DimensionMismatch { expected: j.nrows(), found: j.ncols() });
        }
        if !linalg::is_finite(&j) {
            return Err(Error::NonFinite);
        }
        let n = j.nrows();
        let herm = linalg::max_abs(&(&j - j.adjoint()));
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let inv = linalg::max_abs(&(&j * &j - linalg::eye(n)));
        if inv > 1e-10 {
            return Err(Error::NotInvolution(inv));
        }
        let (vals, _) = linalg::hermitian_eigen(&j);
        let p = vals.iter().filter(|&&v| v > 0.0).count();
        Ok(KreinSpace { j, p, q: n - p })
    }

    /// Hilbert space: `J = I`.
    pub fn euclidean(n: usize) -> Self {
        KreinSpace { j: linalg::eye(n), p: n, q: 0 }
    }

    /// `J = diag(I_p, -I_q)`.
    pub fn diagonal(p: usize, q: usize) -> Self {
        let mut j = linalg::eye(p + q);
        for k in p..p + q {
            j[(k, k)] = c(-1.0, 0.0);
        }
        KreinSpace { j, p, q }
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn j(&self) -> &CMat {
        &self.j
    }

    pub fn is_hilbert(&self) -> bool {
        self.q == 0
    }

    /// `[f, g] = f^H J g`, conjugate-linear in `f`.
    pub fn inner(&self, f: &CVec, g: &CVec) -> C64 {
        (f.adjoint() * &self.j * g)[(0, 0)]
    }

    /// Gram matrix `F^H J F` of the frame of `a`.
    pub fn gram(&self, a: &Subspace) -> CMat {
        a.frame().adjoint() * &self.j * a.frame()
    }

    /// The doubled space `H^2` with `Ĵ = [[0, -iJ], [iJ, 0]]`.
    pub fn doubled(&self) -> KreinSpace {
        let n = self.dim();
        KreinSpace { j: doubled_symmetry(&self.j), p: n, q: n }
    }

    /// Orthonormal eigenframes of `J` for `+1` and `-1`.
    pub fn canonical_frames(&self) -> (CMat, CMat) {
        let (_, vecs) = linalg::hermitian_eigen(&self.j);
        let minus = linalg::cols(&vecs, 0, self.q);
        let plus = linalg::cols(&vecs, self.q, self.p);
        (plus, minus)
    }

    pub fn same_as(&self, other: &KreinSpace) -> bool {
        self.dim() == other.dim() && linalg::max_abs(&(&self.j - &other.j)) <= 1e-10
    }
}

/// `[[0, -iJ], [iJ, 0]]`.
pub fn doubled_symmetry(j: &CMat) -> CMat {
    let n = j.nrows();
    linalg::block2(&linalg::zeros(n, n), &(j * -IM), &(j * IM), &linalg::zeros(n, n))
}

/// Symmetry of the boundary space `L^2` with `L = C^d` Hilbert.
pub fn boundary_symmetry(d: usize) -> CMat {
    doubled_symmetry(&linalg::eye(d))
}

/// `A^{[⊥]}`: Euclidean complement of `J A`.
pub fn ortho_companion(space: &KreinSpace, a: &Subspace) -> Subspace {
    subspace::complement(&subspace::image(space.j(), a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Positive,
    Negative,
    Neutral,
    /// Gram matrix has eigenvalues of both signs.
    Indefinite,
    /// Semidefinite but degenerate.
    Mixed,
}

pub fn classify(space: &KreinSpace, a: &Subspace) -> Classification {
    if a.is_zero() {
        return Classification::Neutral;
    }
    let g = space.gram(a);
    let thr = tol::neutral_threshold(1.0);
    let (vals, _) = linalg::hermitian_eigen(&g);
    let pos = vals.iter().filter(|&&v| v > thr).count();
    let neg = vals.iter().filter(|&&v| v < -thr).count();
    let k = vals.len();
    match (pos, neg) {
        (0, 0) => Classification::Neutral,
        (p, 0) if p == k => Classification::Positive,
        (0, q) if q == k => Classification::Negative,
        (p, q) if p > 0 && q > 0 => Classification::Indefinite,
        _ => Classification::Mixed,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neutrality {
    pub neutral: bool,
    pub maximal: bool,
    pub hyper_maximal: bool,
    pub dim: usize,
    /// Largest entry of the Gram matrix.
    pub residual: f64,
}

pub fn neutrality(space: &KreinSpace, a: &Subspace) -> Neutrality {
    let residual = if a.is_zero() { 0.0 } else { linalg::max_abs(&space.gram(a)) };
    let neutral = residual <= tol::neutral_threshold(linalg::op_norm(a.frame()));
    let (p, q) = space.signature();
    Neutrality {
        neutral,
        maximal: neutral && a.dim() == p.min(q),
        hyper_maximal: neutral && a.dim() == p && p == q,
        dim: a.dim(),
        residual,
    }
}

/// `max |U^H J' U - J|`; zero iff `U` preserves the indefinite forms.
pub fn isometry_residual(src: &KreinSpace, tgt: &KreinSpace, u: &CMat) -> f64 {
    linalg::max_abs(&(u.adjoint() * tgt.j() * u - src.j()))
}

/// Standard unitary: isometric and bijective.
pub fn is_standard_unitary(src: &KreinSpace, tgt: &KreinSpace, u: &CMat) -> bool {
    u.nrows() == tgt.dim()
        && u.ncols() == src.dim()
        && src.dim() == tgt.dim()
        && isometry_residual(src, tgt, u) <= 1e-9 * (1.0 + linalg::op_norm(u).powi(2))
        && linalg::rank(u, &Tol::current()) == src.dim()
}
