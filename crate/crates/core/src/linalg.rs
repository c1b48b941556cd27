//! Dense complex matrix helpers. Storage and arithmetic use nalgebra;
//! SVD and eigendecompositions use faer.

use faer::linalg::solvers::Svd;
use faer::{Mat, MatRef, Side};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::tol::Tol;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const IM: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

/// Builds a matrix from real entries given row by row.
pub fn real(rows: usize, cols: usize, data: &[f64]) -> CMat {
    assert_eq!(data.len(), rows * cols);
    CMat::from_fn(rows, cols, |i, j| c(data[i * cols + j], 0.0))
}

pub fn is_finite(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn hcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.nrows(), b.nrows(), "hcat row mismatch");
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vcat(a: &CMat, b: &CMat) -> CMat {
    assert_eq!(a.ncols(), b.ncols(), "vcat column mismatch");
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// `[[a, b], [c, d]]`.
pub fn block2(a: &CMat, b: &CMat, cc: &CMat, d: &CMat) -> CMat {
    vcat(&hcat(a, b), &hcat(cc, d))
}

pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    block2(a, &zeros(a.nrows(), b.ncols()), &zeros(b.nrows(), a.ncols()), b)
}

pub fn rows(m: &CMat, start: usize, len: usize) -> CMat {
    m.rows(start, len).into_owned()
}

pub fn cols(m: &CMat, start: usize, len: usize) -> CMat {
    m.columns(start, len).into_owned()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn to_faer(m: &CMat) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `(U, σ, V)` with `σ` nonincreasing; thin or full.
fn svd(m: &CMat, thin: bool) -> (CMat, Vec<f64>, CMat) {
    let f = to_faer(m);
    let dec = if thin { Svd::new_thin(f.as_ref()) } else { Svd::new(f.as_ref()) };
    let dec = dec.expect("SVD converges");
    let sigma = dec.S().column_vector().iter().map(|z| z.re).collect();
    (from_faer(dec.U()), sigma, from_faer(dec.V()))
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD converges")
}

/// Spectral norm; zero for empty matrices.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value over `min(rows, cols)` values.
pub fn min_singular(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

fn numerical_rank(sigma: &[f64], tol: &Tol) -> usize {
    match sigma.first() {
        None => 0,
        Some(&smax) => {
            let cut = tol.cutoff(smax);
            sigma.iter().filter(|&&s| s > cut).count()
        }
    }
}

/// Orthonormal basis of the null space.
pub fn null_space(m: &CMat, tol: &Tol) -> CMat {
    let (r, n) = m.shape();
    if n == 0 {
        return zeros(0, 0);
    }
    if r == 0 {
        return eye(n);
    }
    let (_, sigma, v) = svd(m, false);
    let rank = numerical_rank(&sigma, tol);
    v.columns(rank, n - rank).into_owned()
}

/// Orthonormal basis of the column space.
pub fn range_basis(m: &CMat, tol: &Tol) -> CMat {
    let (r, n) = m.shape();
    if r == 0 || n == 0 {
        return zeros(r, 0);
    }
    let (u, sigma, _) = svd(m, true);
    let rank = numerical_rank(&sigma, tol);
    u.columns(0, rank).into_owned()
}

pub fn rank(m: &CMat, tol: &Tol) -> usize {
    numerical_rank(&singular_values(m), tol)
}

/// Moore-Penrose pseudo-inverse with the rank cutoff of `tol`.
pub fn pinv(m: &CMat, tol: &Tol) -> CMat {
    let (r, n) = m.shape();
    if r == 0 || n == 0 {
        return zeros(n, r);
    }
    let (u, sigma, v) = svd(m, true);
    let rank = numerical_rank(&sigma, tol);
    let mut out = zeros(n, r);
    for k in 0..rank {
        out += v.column(k) * u.column(k).adjoint() * c(1.0 / sigma[k], 0.0);
    }
    out
}

pub fn inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() != m.ncols() {
        return None;
    }
    if m.nrows() == 0 {
        return Some(zeros(0, 0));
    }
    let sv = singular_values(m);
    let smax = sv[0];
    let smin = *sv.last().unwrap();
    if smin <= Tol::current().cutoff(smax) || smax == 0.0 {
        return None;
    }
    m.clone().try_inverse()
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    if m.nrows() == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let dec = to_faer(&hermitian_part(m))
        .self_adjoint_eigen(Side::Lower)
        .expect("Hermitian eigensolver converges");
    let vals = dec.S().column_vector().iter().map(|z| z.re).collect();
    (vals, from_faer(dec.U()))
}

/// Eigenvalues of a general square complex matrix.
pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigensolver converges")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_deficient_svd_recomposes() {
        // A rank-one complex 4×3 matrix of the kind that broke nalgebra's SVD.
        let u = CMat::from_fn(4, 1, |i, _| c(1.0 + i as f64, 0.3 * i as f64 - 0.5));
        let v = CMat::from_fn(1, 3, |_, j| c(0.7 - j as f64, 0.2 + j as f64));
        let m = &u * &v;
        let sv = singular_values(&m);
        assert!((sv[0] - u.norm() * v.norm()).abs() < 1e-12 * sv[0]);
        assert!(sv[1..].iter().all(|s| *s < 1e-12));
        let tol = Tol::DEFAULT;
        assert_eq!(rank(&m, &tol), 1);
        let r = range_basis(&m, &tol);
        assert!(max_abs(&(&r * r.adjoint() * &u - &u)) < 1e-12);
        assert_eq!(null_space(&m, &tol).ncols(), 2);
    }

    #[test]
    fn pinv_of_projection_is_itself() {
        let p = real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(max_abs(&(pinv(&p, &Tol::DEFAULT) - &p)) < 1e-15);
        assert!(inverse(&p).is_none());
    }

    #[test]
    fn empty_matrices() {
        let e = zeros(3, 0);
        assert_eq!(rank(&e, &Tol::DEFAULT), 0);
        assert_eq!(null_space(&zeros(0, 2), &Tol::DEFAULT).ncols(), 2);
        assert!(eigenvalues(&zeros(0, 0)).is_empty());
    }
}
