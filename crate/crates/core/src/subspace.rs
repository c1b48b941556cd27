//! Subspaces of `C^n` stored as orthonormal frames.

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, CVec};
use crate::tol::Tol;

/// A subspace of `C^ambient`. The frame has orthonormal columns; the zero
/// subspace has no columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    frame: CMat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { frame: linalg::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { frame: linalg::eye(ambient) }
    }

    /// Column span of `m`.
    pub fn span(m: &CMat) -> Result<Self> {
        if !linalg::is_finite(m) {
            return Err(Error::NonFinite);
        }
        Ok(Self::span_unchecked(m))
    }

    pub fn from_vectors(ambient: usize, vectors: &[CVec]) -> Result<Self> {
        let mut m = linalg::zeros(ambient, vectors.len());
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: v.len() });
            }
            m.set_column(k, v);
        }
        Self::span(&m)
    }

    pub(crate) fn span_unchecked(m: &CMat) -> Self {
        Subspace { frame: linalg::range_basis(m, &Tol::current()) }
    }

    /// Wraps a frame that is already orthonormal.
    pub(crate) fn from_frame(frame: CMat) -> Self {
        Subspace { frame }
    }

    pub fn ambient(&self) -> usize {
        self.frame.nrows()
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.frame * self.frame.adjoint()
    }

    /// Sine of the angle between `v` and the subspace.
    pub fn residual(&self, v: &CVec) -> f64 {
        let nv = v.norm();
        if nv == 0.0 {
            return 0.0;
        }
        let r = v - &self.frame * (self.frame.adjoint() * v);
        r.norm() / nv
    }

    pub fn contains_vector(&self, v: &CVec) -> bool {
        self.residual(v) <= Tol::current().angle.sin()
    }
}

/// Null space of `m`.
pub fn kernel(m: &CMat) -> Subspace {
    Subspace::from_frame(linalg::null_space(m, &Tol::current()))
}

pub fn complement(a: &Subspace) -> Subspace {
    if a.dim() == 0 {
        return Subspace::full(a.ambient());
    }
    kernel(&a.frame.adjoint())
}

pub fn sum(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient(), b.ambient(), "ambient mismatch in sum");
    Subspace::span_unchecked(&linalg::hcat(&a.frame, &b.frame))
}

/// `A ∩ B` as the common null space of the projections onto both complements.
pub fn intersect(a: &Subspace, b: &Subspace) -> Subspace {
    assert_eq!(a.ambient(), b.ambient(), "ambient mismatch in intersect");
    if a.is_zero() || b.is_zero() {
        return Subspace::zero(a.ambient());
    }
    let ac = complement(a);
    let bc = complement(b);
    let stacked = linalg::vcat(&ac.frame.adjoint(), &bc.frame.adjoint());
    kernel(&stacked)
}

pub fn image(m: &CMat, a: &Subspace) -> Subspace {
    assert_eq!(m.ncols(), a.ambient(), "image: shape mismatch");
    Subspace::span_unchecked(&(m * &a.frame))
}

/// `{x : m x ∈ A}`.
pub fn preimage(m: &CMat, a: &Subspace) -> Subspace {
    assert_eq!(m.nrows(), a.ambient(), "preimage: shape mismatch");
    let ac = complement(a);
    if ac.is_zero() {
        return Subspace::full(m.ncols());
    }
    kernel(&(ac.frame.adjoint() * m))
}

/// Largest principal angle; infinite when the dimensions differ.
pub fn distance(a: &Subspace, b: &Subspace) -> f64 {
    assert_eq!(a.ambient(), b.ambient(), "ambient mismatch in distance");
    if a.dim() != b.dim() {
        return f64::INFINITY;
    }
    if a.dim() == 0 {
        return 0.0;
    }
    let cross = a.frame.adjoint() * &b.frame;
    let sine = linalg::op_norm(&(&b.frame - &a.frame * &cross));
    let cosine = linalg::min_singular(&cross);
    sine.atan2(cosine)
}

pub fn equal(a: &Subspace, b: &Subspace) -> bool {
    distance(a, b) <= Tol::current().angle
}

/// `B ⊆ A` up to the angle tolerance: every direction of `B` lies within
/// `angle` of `A`, i.e. `B` is within `angle` of `A ∩ B`.
pub fn contains(a: &Subspace, b: &Subspace) -> bool {
    containment_angle(a, b) <= Tol::current().angle
}

/// Largest angle between a unit vector of `B` and the subspace `A`.
pub fn containment_angle(a: &Subspace, b: &Subspace) -> f64 {
    assert_eq!(a.ambient(), b.ambient(), "ambient mismatch in contains");
    if b.is_zero() {
        return 0.0;
    }
    let outside = &b.frame - &a.frame * (a.frame.adjoint() * &b.frame);
    linalg::op_norm(&outside).min(1.0).asin()
}

/// Whether `A` and `B` are orthogonal in the Euclidean metric.
pub fn orthogonal(a: &Subspace, b: &Subspace) -> bool {
    if a.is_zero() || b.is_zero() {
        return true;
    }
    linalg::op_norm(&(a.frame.adjoint() * &b.frame)) <= Tol::current().angle.sin()
}
