//! Ranks, kernels, sums and intersections of integer matrices against
//! exact Gaussian elimination over `Q(i)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use kreinrel::linalg::{self, c, CMat};
use kreinrel::{subspace, KreinSpace, Relation, Subspace, Tol};

#[derive(Clone, Debug, PartialEq)]
struct Gi {
    re: BigRational,
    im: BigRational,
}

impl Gi {
    fn int(re: i64, im: i64) -> Self {
        Gi { re: BigRational::from_integer(BigInt::from(re)), im: BigRational::from_integer(BigInt::from(im)) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &Gi) -> Gi {
        Gi { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn sub(&self, o: &Gi) -> Gi {
        Gi { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn inv(&self) -> Gi {
        let n = &self.re * &self.re + &self.im * &self.im;
        Gi { re: &self.re / &n, im: -&self.im / &n }
    }
}

/// Row-reduce in place and return the rank.
fn exact_rank(mut m: Vec<Vec<Gi>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let inv = m[rank][col].inv();
        for r in 0..rows {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].mul(&inv);
                for k in col..cols {
                    let t = f.mul(&m[rank][k]);
                    m[r][k] = m[r][k].sub(&t);
                }
            }
        }
        rank += 1;
    }
    rank
}

type IntMat = Vec<Vec<(i64, i64)>>;

fn product(a: &IntMat, b: &IntMat) -> IntMat {
    let (m, r, n) = (a.len(), b.len(), b[0].len());
    (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..r).fold((0, 0), |(sr, si), k| {
                        let (x, y) = (a[i][k], b[k][j]);
                        (sr + x.0 * y.0 - x.1 * y.1, si + x.0 * y.1 + x.1 * y.0)
                    })
                })
                .collect()
        })
        .collect()
}

fn to_exact(m: &IntMat) -> Vec<Vec<Gi>> {
    m.iter().map(|r| r.iter().map(|&(a, b)| Gi::int(a, b)).collect()).collect()
}

fn to_float(m: &IntMat) -> CMat {
    CMat::from_fn(m.len(), m[0].len(), |i, j| c(m[i][j].0 as f64, m[i][j].1 as f64))
}

fn hcat(a: &IntMat, b: &IntMat) -> IntMat {
    a.iter().zip(b).map(|(x, y)| x.iter().chain(y).copied().collect()).collect()
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMat> {
    proptest::collection::vec(proptest::collection::vec((-3i64..=3, -3i64..=3), cols), rows)
}

/// Integer matrix of rank at most `r`, as a product of integer factors.
fn low_rank(rows: usize, cols: usize) -> impl Strategy<Value = IntMat> {
    (0..=rows.min(cols)).prop_flat_map(move |r| {
        let r = r.max(1);
        (int_matrix(rows, r), int_matrix(r, cols)).prop_map(|(a, b)| product(&a, &b))
    })
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=6, 1usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_matches_exact(m in shape().prop_flat_map(|(r, c)| low_rank(r, c))) {
        let tol = Tol::current();
        prop_assert_eq!(linalg::rank(&to_float(&m), &tol), exact_rank(to_exact(&m)));
    }

    #[test]
    fn null_space_has_exact_dimension(m in shape().prop_flat_map(|(r, c)| low_rank(r, c))) {
        let tol = Tol::current();
        let a = to_float(&m);
        let ns = linalg::null_space(&a, &tol);
        prop_assert_eq!(ns.ncols(), a.ncols() - exact_rank(to_exact(&m)));
        if ns.ncols() > 0 {
            prop_assert!(linalg::max_abs(&(&a * &ns)) < 1e-9 * (1.0 + linalg::max_abs(&a)));
            prop_assert!(linalg::max_abs(&(ns.adjoint() * &ns - linalg::eye(ns.ncols()))) < 1e-12);
        }
    }

    #[test]
    fn sum_and_intersection_dimensions(
        (a, b) in (1usize..=6).prop_flat_map(|n| (low_rank(n, 3), low_rank(n, 4)))
    ) {
        let ra = exact_rank(to_exact(&a));
        let rb = exact_rank(to_exact(&b));
        let rab = exact_rank(to_exact(&hcat(&a, &b)));
        let sa = Subspace::span(&to_float(&a)).unwrap();
        let sb = Subspace::span(&to_float(&b)).unwrap();
        prop_assert_eq!(sa.dim(), ra);
        prop_assert_eq!(subspace::sum(&sa, &sb).dim(), rab);
        let meet = subspace::intersect(&sa, &sb);
        prop_assert_eq!(meet.dim(), ra + rb - rab);
        prop_assert!(subspace::contains(&sa, &meet) && subspace::contains(&sb, &meet));
        prop_assert_eq!(subspace::complement(&sa).dim(), a.len() - ra);
    }

    #[test]
    fn relation_parts_have_exact_dimensions(
        (n, basis) in (1usize..=4).prop_flat_map(|n| (Just(n), low_rank(2 * n, 2 * n)))
    ) {
        let space = KreinSpace::euclidean(n);
        let graph = Subspace::span(&to_float(&basis)).unwrap();
        let t = Relation::in_space(&space, graph).unwrap();
        let top: IntMat = basis[..n].to_vec();
        let bottom: IntMat = basis[n..].to_vec();
        let dim = exact_rank(to_exact(&basis));
        let rtop = exact_rank(to_exact(&top));
        let rbot = exact_rank(to_exact(&bottom));
        prop_assert_eq!(t.dim(), dim);
        prop_assert_eq!(t.domain().dim(), rtop);
        prop_assert_eq!(t.range().dim(), rbot);
        prop_assert_eq!(t.multivalued().dim(), dim - rtop);
        prop_assert_eq!(t.kernel().dim(), dim - rbot);
        prop_assert_eq!(t.adjoint().dim(), 2 * n - dim);
        prop_assert_eq!(t.is_operator(), dim == rtop);
    }
}

#[test]
fn exact_rank_sanity() {
    let m: IntMat = vec![vec![(1, 0), (0, 1)], vec![(0, 1), (-1, 0)]];
    assert_eq!(exact_rank(to_exact(&m)), 1);
    let id: IntMat = vec![vec![(1, 0), (0, 0)], vec![(0, 0), (1, 0)]];
    assert_eq!(exact_rank(to_exact(&id)), 2);
    assert!(Gi::int(1, 0).mul(&Gi::int(1, 0)).re.is_one());
}
