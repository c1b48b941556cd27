//! Linear relations: subspaces of `src × tgt` read as multivalued maps.

use crate::error::{Error, Result};
use crate::krein::KreinSpace;
use crate::linalg::{self, CMat, C64};
use crate::subspace::{self, Subspace};

/// A linear relation from `src` to `tgt`. The graph lives in
/// `C^{src.dim() + tgt.dim()}` with the domain block first.
#[derive(Debug, Clone)]
pub struct Relation {
    src: KreinSpace,
    tgt: KreinSpace,
    graph: Subspace,
}

impl Relation {
    pub fn new(src: KreinSpace, tgt: KreinSpace, graph: Subspace) -> Result<Self> {
        let expected = src.dim() + tgt.dim();
        if graph.ambient() != expected {
            return Err(Error::DimensionMismatch { expected, found: graph.ambient() });
        }
        Ok(Relation { src, tgt, graph })
    }

    /// Relation in a single space.
    pub fn in_space(space: &KreinSpace, graph: Subspace) -> Result<Self> {
        Self::new(space.clone(), space.clone(), graph)
    }

    /// Graph spanned by the columns of `[x; y]`.
    pub fn from_pairs(src: &KreinSpace, tgt: &KreinSpace, x: &CMat, y: &CMat) -> Result<Self> {
        if x.nrows() != src.dim() {
            return Err(Error::DimensionMismatch { expected: src.dim(), found: x.nrows() });
        }
        if y.nrows() != tgt.dim() {
            return Err(Error::DimensionMismatch { expected: tgt.dim(), found: y.nrows() });
        }
        Self::new(src.clone(), tgt.clone(), Subspace::span(&linalg::vcat(x, y))?)
    }

    /// Graph of the everywhere defined operator `a`.
    pub fn from_operator(src: &KreinSpace, tgt: &KreinSpace, a: &CMat) -> Result<Self> {
        Self::from_pairs(src, tgt, &linalg::eye(src.dim()), a)
    }

    /// `zI` on `space`.
    pub fn scalar(space: &KreinSpace, z: C64) -> Self {
        let n = space.dim();
        Self::from_operator(space, space, &(linalg::eye(n) * z)).expect("square operator")
    }

    pub fn zero_relation(src: &KreinSpace, tgt: &KreinSpace) -> Self {
        Relation { src: src.clone(), tgt: tgt.clone(), graph: Subspace::zero(src.dim() + tgt.dim()) }
    }

    pub fn src(&self) -> &KreinSpace {
        &self.src
    }

    pub fn tgt(&self) -> &KreinSpace {
        &self.tgt
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub(crate) fn with_graph(&self, graph: Subspace) -> Relation {
        Relation { src: self.src.clone(), tgt: self.tgt.clone(), graph }
    }

    /// Domain block of the graph frame.
    pub fn top(&self) -> CMat {
        linalg::rows(self.graph.frame(), 0, self.src.dim())
    }

    /// Range block of the graph frame.
    pub fn bottom(&self) -> CMat {
        linalg::rows(self.graph.frame(), self.src.dim(), self.tgt.dim())
    }

    fn lift(&self, coeffs: &Subspace) -> Subspace {
        Subspace::span_unchecked(&(self.graph.frame() * coeffs.frame()))
    }

    pub fn domain(&self) -> Subspace {
        Subspace::span_unchecked(&self.top())
    }

    pub fn range(&self) -> Subspace {
        Subspace::span_unchecked(&self.bottom())
    }

    pub fn kernel(&self) -> Subspace {
        let coeffs = subspace::kernel(&self.bottom());
        Subspace::span_unchecked(&(self.top() * coeffs.frame()))
    }

    pub fn multivalued(&self) -> Subspace {
        let coeffs = subspace::kernel(&self.top());
        Subspace::span_unchecked(&(self.bottom() * coeffs.frame()))
    }

    pub fn is_operator(&self) -> bool {
        self.multivalued().is_zero()
    }

    /// Matrix of an everywhere defined operator.
    pub fn to_matrix(&self) -> Option<CMat> {
        if self.dim() != self.src.dim() {
            return None;
        }
        let x_inv = linalg::inverse(&self.top())?;
        Some(self.bottom() * x_inv)
    }

    pub fn inverse(&self) -> Relation {
        let (a, b) = (self.src.dim(), self.tgt.dim());
        let swap = linalg::block2(
            &linalg::zeros(b, a),
            &linalg::eye(b),
            &linalg::eye(a),
            &linalg::zeros(a, b),
        );
        Relation {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            graph: subspace::image(&swap, &self.graph),
        }
    }

    /// Image of the graph under `diag(a, b)`, with new host spaces.
    pub fn transform(&self, a: &CMat, b: &CMat, src: &KreinSpace, tgt: &KreinSpace) -> Relation {
        let m = linalg::block_diag(a, b);
        Relation { src: src.clone(), tgt: tgt.clone(), graph: subspace::image(&m, &self.graph) }
    }

    /// `{(f, m f') : (f, f') ∈ T}`.
    pub fn map_range(&self, m: &CMat, tgt: &KreinSpace) -> Relation {
        self.transform(&linalg::eye(self.src.dim()), m, &self.src, tgt)
    }

    /// `T|_L = T ∩ (L × tgt)`.
    pub fn restrict(&self, l: &Subspace) -> Relation {
        let coeffs = subspace::preimage(&self.top(), l);
        self.with_graph(self.lift(&coeffs))
    }

    /// `T ∩ (src × L)`.
    pub fn restrict_range(&self, l: &Subspace) -> Relation {
        let coeffs = subspace::preimage(&self.bottom(), l);
        self.with_graph(self.lift(&coeffs))
    }

    /// `self ∘ r = {(x, z) : (x, y) ∈ r, (y, z) ∈ self}`.
    pub fn compose(&self, r: &Relation) -> Result<Relation> {
        if r.tgt.dim() != self.src.dim() {
            return Err(Error::DimensionMismatch { expected: self.src.dim(), found: r.tgt.dim() });
        }
        let (kr, ks) = (r.dim(), self.dim());
        let joint = subspace::kernel(&linalg::hcat(&r.bottom(), &(-self.top())));
        let alpha = linalg::rows(joint.frame(), 0, kr);
        let beta = linalg::rows(joint.frame(), kr, ks);
        let pairs = linalg::vcat(&(r.top() * alpha), &(self.bottom() * beta));
        Ok(Relation {
            src: r.src.clone(),
            tgt: self.tgt.clone(),
            graph: Subspace::span_unchecked(&pairs),
        })
    }

    /// `T - zI`.
    pub fn shift(&self, z: C64) -> Relation {
        let (a, b) = (self.src.dim(), self.tgt.dim());
        assert_eq!(a, b, "shift needs an endorelation");
        let m = linalg::block2(
            &linalg::eye(a),
            &linalg::zeros(a, a),
            &(linalg::eye(a) * -z),
            &linalg::eye(a),
        );
        self.with_graph(subspace::image(&m, &self.graph))
    }

    /// Operatorwise sum `{(f, f' + g') : (f, f') ∈ T, (f, g') ∈ S}`.
    pub fn op_sum(&self, other: &Relation) -> Result<Relation> {
        self.check_hosts(other)?;
        let (k1, k2) = (self.dim(), other.dim());
        let joint = subspace::kernel(&linalg::hcat(&self.top(), &(-other.top())));
        let alpha = linalg::rows(joint.frame(), 0, k1);
        let beta = linalg::rows(joint.frame(), k1, k2);
        let pairs =
            linalg::vcat(&(self.top() * &alpha), &(self.bottom() * alpha + other.bottom() * beta));
        Ok(self.with_graph(Subspace::span_unchecked(&pairs)))
    }

    /// Componentwise sum of graphs; the flag reports Euclidean orthogonality.
    pub fn cw_sum(&self, other: &Relation) -> Result<(Relation, bool)> {
        self.check_hosts(other)?;
        let orth = subspace::orthogonal(&self.graph, &other.graph);
        Ok((self.with_graph(subspace::sum(&self.graph, &other.graph)), orth))
    }

    pub fn intersect(&self, other: &Relation) -> Result<Relation> {
        self.check_hosts(other)?;
        Ok(self.with_graph(subspace::intersect(&self.graph, &other.graph)))
    }

    /// Restriction to the orthogonal complement of the multivalued part.
    pub fn operator_part(&self) -> Relation {
        self.restrict_range(&subspace::complement(&self.multivalued()))
    }

    /// Adjoint with respect to the Euclidean metrics of both spaces.
    pub fn hilbert_adjoint(&self) -> Relation {
        let (a, b) = (self.src.dim(), self.tgt.dim());
        // (h, k) is adjoint iff it is orthogonal to every (v', -v).
        let rot = linalg::block2(
            &linalg::zeros(b, a),
            &linalg::eye(b),
            &(-linalg::eye(a)),
            &linalg::zeros(a, b),
        );
        Relation {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            graph: subspace::complement(&subspace::image(&rot, &self.graph)),
        }
    }

    /// Adjoint with respect to the indefinite forms of the host spaces:
    /// `S_src T^* S_tgt`.
    pub fn adjoint(&self) -> Relation {
        let star = self.hilbert_adjoint();
        star.transform(self.tgt.j(), self.src.j(), &self.tgt, &self.src)
    }

    /// `ker(T - z)`.
    pub fn eigenspace(&self, z: C64) -> Subspace {
        let coeffs = subspace::kernel(&(self.bottom() - self.top() * z));
        Subspace::span_unchecked(&(self.top() * coeffs.frame()))
    }

    /// `zI ∩ T`, as a subspace of the graph space.
    pub fn graph_eigenspace(&self, z: C64) -> Subspace {
        let coeffs = subspace::kernel(&(self.bottom() - self.top() * z));
        self.lift(&coeffs)
    }

    /// `ran(T - z)`.
    pub fn shifted_range(&self, z: C64) -> Subspace {
        Subspace::span_unchecked(&(self.bottom() - self.top() * z))
    }

    /// `(T - z)^{-1}` as a matrix when `z` is a regular point.
    pub fn resolvent(&self, z: C64) -> Result<CMat> {
        let n = self.src.dim();
        if self.tgt.dim() != n || self.dim() != n {
            return Err(Error::NotRegular { z });
        }
        let m = self.bottom() - self.top() * z;
        let inv = linalg::inverse(&m).ok_or(Error::NotRegular { z })?;
        Ok(self.top() * inv)
    }

    pub fn is_symmetric(&self) -> bool {
        subspace::contains(self.adjoint().graph(), &self.graph)
    }

    pub fn is_self_adjoint(&self) -> bool {
        subspace::equal(self.adjoint().graph(), &self.graph)
    }

    fn check_hosts(&self, other: &Relation) -> Result<()> {
        if self.src.same_as(&other.src) && self.tgt.same_as(&other.tgt) {
            Ok(())
        } else {
            Err(Error::HostMismatch)
        }
    }
}

/// Same hosts and graphs equal within the angle tolerance.
pub fn equal(a: &Relation, b: &Relation) -> bool {
    a.src.same_as(&b.src) && a.tgt.same_as(&b.tgt) && subspace::equal(&a.graph, &b.graph)
}

pub fn distance(a: &Relation, b: &Relation) -> f64 {
    subspace::distance(&a.graph, &b.graph)
}

/// `A ⊆ B` for relations over the same spaces.
pub fn contained_in(a: &Relation, b: &Relation) -> bool {
    subspace::contains(&b.graph, &a.graph)
}

#[derive(Debug, Clone)]
pub struct SpectralProbe {
    /// `ker(T - z) = {0}`.
    pub regular_type: bool,
    /// Regular type and `ran(T - z)` is the whole space.
    pub regular: bool,
    pub eigenspace: Subspace,
}

pub fn spectral_probe(t: &Relation, z: C64) -> SpectralProbe {
    let eigenspace = t.eigenspace(z);
    let regular_type = eigenspace.is_zero();
    let regular = regular_type && t.shifted_range(z).dim() == t.tgt.dim();
    SpectralProbe { regular_type, regular, eigenspace }
}

