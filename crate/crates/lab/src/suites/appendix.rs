//! Auxiliary lemmas on pairs of relations: range/eigenspace inclusions for
//! `H ⊆ G^+ ∩ G^⊥`, eigenspaces of componentwise sums, disjointness of the
//! eigenspaces of an adjoint, and the relation between property (P) and
//! dense definedness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kreinrel::extensions::{hilbert_form, in_o, point_spectrum, property_p, regular_type, PointSpectrum};
use kreinrel::generate::{gaussian, random_self_adjoint, random_space, trial_rng, SymmetricSpec};
use kreinrel::linalg::{self, c, C64, IM};
use kreinrel::subspace::{self, containment_angle};
use kreinrel::{krein, KreinSpace, Relation, Subspace};

use super::{angle, part_seed, run_trials, RESIDUAL};
use crate::report::{Check, Report};

pub fn run(trials: usize, seed: u64, grid: &[C64]) -> Report {
    let parts: [(&str, u64, fn(&mut ChaCha8Rng, &[C64]) -> Vec<Check>); 5] = [
        ("eqgh", 1, eqgh_trial),
        ("sum_eigenspace", 2, sum_eigenspace_trial),
        ("orthogonal_sum", 3, orthogonal_sum_trial),
        ("disjoint_eigenspaces", 4, disjoint_trial),
        ("dense_domain", 5, dense_domain_trial),
    ];
    let reports = parts
        .iter()
        .map(|&(name, tag, f)| run_trials(name, trials, part_seed(seed, tag), |rng, _| f(rng, grid)))
        .collect();
    Report::merge("appendix", seed, reports)
}

fn random_relation(space: &KreinSpace, k: usize, rng: &mut ChaCha8Rng) -> Relation {
    let g = Subspace::span(&gaussian(2 * space.dim(), k, rng)).expect("finite entries");
    Relation::in_space(space, g).expect("dimensions match")
}

/// Random `k`-dimensional subspace of `s` (all of `s` if `k ≥ dim s`).
fn random_part(s: &Subspace, k: usize, rng: &mut ChaCha8Rng) -> Subspace {
    if k >= s.dim() {
        return s.clone();
    }
    Subspace::span(&(s.frame() * gaussian(s.dim(), k, rng))).expect("finite entries")
}

fn random_point(rng: &mut ChaCha8Rng) -> C64 {
    c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

/// Grid, a few real points and one random point.
fn sample_points(grid: &[C64], rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut pts = grid.to_vec();
    pts.extend([c(0.0, 0.0), c(1.0, 0.0), c(-2.5, 0.0)]);
    pts.push(random_point(rng));
    pts
}

fn random_krein(n: usize, rng: &mut ChaCha8Rng) -> KreinSpace {
    let p = rng.gen_range(0..=n);
    random_space(p, n - p, rng)
}

/// `ran(J R + z)`.
fn shifted_range_j(r: &Relation, z: C64) -> Subspace {
    hilbert_form(r).shifted_range(-z)
}

/// `𝔑_z(J R^+)`.
fn adjoint_eigenspace_j(r: &Relation, z: C64) -> Subspace {
    hilbert_form(&r.adjoint()).eigenspace(z)
}

fn eqgh_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut a = Check::new("eqgh_orthogonal_domains");
    let mut bi = Check::new("eqgh_neutral_inclusions");
    let mut bii = Check::new("eqgh_neutral_equalities");
    eqgh_orthogonal_domains(rng, grid, &mut a);
    eqgh_neutral(rng, &mut bi, &mut bii);
    vec![a, bi, bii]
}

/// `dom G ⊥ dom H`: both inclusions at every sample point.
fn eqgh_orthogonal_domains(rng: &mut ChaCha8Rng, grid: &[C64], check: &mut Check) {
    for _ in 0..32 {
        let n = rng.gen_range(3..=7);
        let space = random_krein(n, rng);
        let g = random_relation(&space, rng.gen_range(1..=n / 2), rng);
        let dom_perp = subspace::complement(&g.domain());
        let pairs = Subspace::span(&linalg::block_diag(dom_perp.frame(), &linalg::eye(n))).expect("frame");
        let admissible = subspace::intersect(
            &subspace::intersect(g.adjoint().graph(), &subspace::complement(g.graph())),
            &pairs,
        );
        if admissible.is_zero() {
            continue;
        }
        let k = rng.gen_range(1..=admissible.dim());
        let h = Relation::in_space(&space, random_part(&admissible, k, rng)).expect("dims");
        for z in sample_points(grid, rng) {
            let r1 = containment_angle(&adjoint_eigenspace_j(&g, z), &shifted_range_j(&h, z));
            let r2 = containment_angle(&adjoint_eigenspace_j(&h, z), &shifted_range_j(&g, z));
            check.bound(r1.max(r2), RESIDUAL, || {
                format!("n {n} dim G {} dim H {} z {z}: angles {r1:.2e} {r2:.2e}", g.dim(), h.dim())
            });
        }
        return;
    }
    check.record(false, 0.0, || "no admissible H found in 32 draws".into());
}

/// Maximal neutrality of `K` from the projections onto the spectral
/// subspaces of the doubled symmetry: `(P+(K) full, P-(K) full)`.
fn projection_ranks_full(space: &KreinSpace, k: &Subspace) -> (bool, bool) {
    let n = space.dim();
    let jhat = space.doubled().j().clone();
    let id = linalg::eye(2 * n);
    let half = c(0.5, 0.0);
    let plus = (&id + &jhat) * half * k.frame();
    let minus = (&id - &jhat) * half * k.frame();
    let tol = kreinrel::Tol::current();
    (linalg::rank(&plus, &tol) == n, linalg::rank(&minus, &tol) == n)
}

/// `G ⊕ H` neutral: inclusions at `±i`, and equality at `±i` exactly when
/// `G ⊕ H` is maximal neutral.
fn eqgh_neutral(rng: &mut ChaCha8Rng, inclusions: &mut Check, equalities: &mut Check) {
    let n = rng.gen_range(2..=7);
    let space = random_krein(n, rng);
    let l = random_self_adjoint(&space, rng.gen_bool(0.2), rng).expect("self-adjoint relation");
    let want_maximal = rng.gen_bool(0.5);
    let kg = rng.gen_range(1..n);
    let kh = if want_maximal { n - kg } else { rng.gen_range(0..n - kg) };
    let g = Relation::in_space(&space, random_part(l.graph(), kg, rng)).expect("dims");
    let rest = subspace::intersect(l.graph(), &subspace::complement(g.graph()));
    let h_graph = if kh == 0 { Subspace::zero(2 * n) } else { random_part(&rest, kh, rng) };
    let h = Relation::in_space(&space, h_graph).expect("dims");
    let k = subspace::sum(g.graph(), h.graph());
    let neutral = krein::neutrality(&space.doubled(), &k).neutral;
    let (plus_full, minus_full) = projection_ranks_full(&space, &k);
    let maximal = neutral && (plus_full || minus_full);
    let hyper = neutral && plus_full && minus_full;
    let desc = |extra: String| format!("n {n} dim G {kg} dim H {kh} maximal {maximal}: {extra}");
    inclusions.record(neutral, 0.0, || desc("G ⊕ H not neutral".into()));
    let mut equal_at = [true, true];
    for (idx, z) in [IM, -IM].into_iter().enumerate() {
        let (ran_h, eig_g) = (shifted_range_j(&h, z), adjoint_eigenspace_j(&g, z));
        let (ran_g, eig_h) = (shifted_range_j(&g, z), adjoint_eigenspace_j(&h, z));
        let r1 = containment_angle(&eig_g, &ran_h);
        let r2 = containment_angle(&eig_h, &ran_g);
        inclusions.bound(r1.max(r2), RESIDUAL, || desc(format!("z {z}: angles {r1:.2e} {r2:.2e}")));
        let e1 = angle(&ran_h, &eig_g) <= RESIDUAL;
        let e2 = angle(&ran_g, &eig_h) <= RESIDUAL;
        equalities.record(e1 == e2, 0.0, || desc(format!("z {z}: the two equalities disagree ({e1}, {e2})")));
        equal_at[idx] = e1;
        equalities.record(e1 == maximal, if e1 { angle(&ran_h, &eig_g) } else { 0.0 }, || {
            desc(format!("z {z}: equality {e1}"))
        });
    }
    let both = equal_at[0] && equal_at[1];
    equalities.record(both == hyper, 0.0, || desc(format!("equality at both ±i {both}, hyper-maximal {hyper}")));
}

/// `ran((G - z)^{-1}(zI - H) + I)` through relation composition.
fn composed_range(g: &Relation, h: &Relation, z: C64) -> Subspace {
    let space = g.src();
    let n = space.dim();
    let g_inv = g.shift(z).inverse();
    let z_minus_h = h.shift(z).map_range(&(-linalg::eye(n)), space);
    let comp = g_inv.compose(&z_minus_h).expect("same space");
    comp.op_sum(&Relation::scalar(space, c(1.0, 0.0))).expect("same space").range()
}

/// `ran((G - z)^{-1} - (H - z)^{-1})` through the operatorwise sum.
fn resolvent_difference_range(g: &Relation, h: &Relation, z: C64) -> Subspace {
    let n = g.src().dim();
    let neg = h.shift(z).inverse().map_range(&(-linalg::eye(n)), g.src());
    g.shift(z).inverse().op_sum(&neg).expect("same space").range()
}

/// `X^{-1} Y ⊆ ker Y × ker X` for `X = G - z`, `Y = H - z`.
fn o_by_composition(g: &Relation, h: &Relation, z: C64) -> bool {
    let (x, y) = (g.shift(z), h.shift(z));
    let comp = x.inverse().compose(&y).expect("same space");
    let kernels = linalg::block_diag(y.kernel().frame(), x.kernel().frame());
    let target = if kernels.ncols() == 0 {
        Subspace::zero(2 * g.src().dim())
    } else {
        Subspace::span(&kernels).expect("frame")
    };
    subspace::contains(&target, comp.graph())
}

fn spectrum_points(rels: &[&Relation]) -> Vec<C64> {
    rels.iter()
        .filter_map(|r| match point_spectrum(r) {
            PointSpectrum::Finite(v) => Some(v),
            PointSpectrum::All => None,
        })
        .flatten()
        .collect()
}

/// Eigenspace formula for `G ∔ H` and its refinement on `O(G, H)`.
fn sum_eigenspace_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut formula = Check::new("sum_eigenspace_formula");
    let mut on_o = Check::new("sum_eigenspace_on_o");
    let n = rng.gen_range(2..=6);
    let space = random_krein(n, rng);
    let g = planted(&space, rng.gen_range(1..=n), rng);
    let h = planted(&space, rng.gen_range(0..=n), rng);
    let (sum, _) = g.cw_sum(&h).expect("same space");
    let mut pts = sample_points(grid, rng);
    pts.extend(spectrum_points(&[&g, &h, &sum]));
    for z in pts {
        let eig = sum.eigenspace(z);
        let via_comp = composed_range(&g, &h, z);
        let via_diff = resolvent_difference_range(&g, &h, z);
        let parts = subspace::sum(&g.eigenspace(z), &h.eigenspace(z));
        let (d1, d2, d3) = (angle(&eig, &via_comp), angle(&eig, &via_diff), containment_angle(&eig, &parts));
        formula.bound(d1.max(d2).max(d3), RESIDUAL, || {
            format!("n {n} dim G {} dim H {} z {z}: {d1:.2e} {d2:.2e} {d3:.2e}", g.dim(), h.dim())
        });
        let o = in_o(&g, &h, z);
        let o_alt = o_by_composition(&g, &h, z);
        on_o.record(o == o_alt, 0.0, || format!("z {z}: range test {o}, composition test {o_alt}"));
        if o {
            let d = angle(&eig, &parts);
            on_o.bound(d, RESIDUAL, || format!("z {z} in O: eigenspace differs from the sum by {d:.2e}"));
            let in_sum = !eig.is_zero();
            let in_parts = !regular_type(&g, z) || !regular_type(&h, z);
            on_o.record(in_sum == in_parts, 0.0, || {
                format!("z {z} in O: eigenvalue of G ∔ H {in_sum}, of G or H {in_parts}")
            });
        }
    }
    vec![formula, on_o]
}

/// Random relation of dimension `k`, with an eigenpair planted half the time.
fn planted(space: &KreinSpace, k: usize, rng: &mut ChaCha8Rng) -> Relation {
    let n = space.dim();
    if k == 0 {
        return Relation::zero_relation(space, space);
    }
    let mut basis = gaussian(2 * n, k, rng);
    if rng.gen_bool(0.5) {
        let lambda = random_point(rng);
        let v = gaussian(n, 1, rng);
        basis.view_mut((0, 0), (n, 1)).copy_from(&v);
        basis.view_mut((n, 0), (n, 1)).copy_from(&(v * lambda));
    }
    Relation::in_space(space, Subspace::span(&basis).expect("finite")).expect("dims")
}

/// Point spectrum of an orthogonal sum `G ⊕ H`: eigenvalues of `G` or `H`
/// inside `O`, together with every point outside `O`.
fn orthogonal_sum_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut check = Check::new("orthogonal_sum_spectrum");
    let n = rng.gen_range(2..=6);
    let space = random_krein(n, rng);
    let kg = rng.gen_range(1..=n);
    let g = planted(&space, kg, rng);
    let budget = if rng.gen_bool(0.5) { n.saturating_sub(kg) } else { 2 * n - kg };
    let kh = rng.gen_range(0..=budget);
    let h_graph = if kh == 0 {
        Subspace::zero(2 * n)
    } else {
        random_part(&subspace::complement(g.graph()), kh, rng)
    };
    let h = Relation::in_space(&space, h_graph).expect("dims");
    let (sum, orth) = g.cw_sum(&h).expect("same space");
    check.record(orth, 0.0, || "summands not orthogonal".into());
    let mut pts = sample_points(grid, rng);
    pts.extend(spectrum_points(&[&g, &h, &sum]));
    for z in pts {
        let lhs = !regular_type(&sum, z);
        let o = in_o(&g, &h, z);
        let from_parts = !regular_type(&g, z) || !regular_type(&h, z);
        let rhs = (o && from_parts) || !o;
        check.record(lhs == rhs, 0.0, || {
            format!("n {n} dim G {kg} dim H {kh} z {z}: eigenvalue {lhs}, in O {o}, of G or H {from_parts}")
        });
    }
    vec![check]
}

/// Disjointness of the eigenspaces of `G^+` versus `dom G + ran G = H`, on
/// generic relations and on relations squeezed into a hyperplane
/// `w^{[⊥]}`.
fn disjoint_trial(rng: &mut ChaCha8Rng, grid: &[C64]) -> Vec<Check> {
    let mut identity = Check::new("mul_ker_identity");
    let mut equivalence = Check::new("disjoint_eigenspaces");
    let n = rng.gen_range(2..=7);
    let space = random_krein(n, rng);
    let squeeze = rng.gen_bool(0.5);
    let k = rng.gen_range(1..=2 * n - 1);
    let (g, w) = if squeeze {
        let w = gaussian(n, 1, rng);
        let hyper = krein::ortho_companion(&space, &Subspace::span(&w).expect("finite"));
        let pairs = Subspace::span(&linalg::block_diag(hyper.frame(), hyper.frame())).expect("frame");
        let g = Relation::in_space(&space, random_part(&pairs, k.min(pairs.dim()), rng)).expect("dims");
        (g, Some(w))
    } else {
        (random_relation(&space, k, rng), None)
    };
    let gp = g.adjoint();
    let mul_ker = subspace::intersect(&gp.multivalued(), &gp.kernel());
    let dom_ran = subspace::sum(&g.domain(), &g.range());
    let companion = krein::ortho_companion(&space, &dom_ran);
    let d = angle(&mul_ker, &companion);
    let desc = |s: String| format!("n {n} dim G {} squeezed {squeeze}: {s}", g.dim());
    identity.bound(d, RESIDUAL, || desc(format!("mul ∩ ker vs companion {d:.2e}")));
    let dense = property_p(&g);
    let mut pts: Vec<C64> = grid.iter().copied().take(4).collect();
    pts.extend([c(0.0, 0.0), c(1.5, 0.0)]);
    let eigs: Vec<Subspace> = pts.iter().map(|&z| gp.eigenspace(z)).collect();
    let mut disjoint = true;
    let mut witness_angle: f64 = 0.0;
    for i in 0..eigs.len() {
        for j in i + 1..eigs.len() {
            let meet = subspace::intersect(&eigs[i], &eigs[j]);
            disjoint &= meet.is_zero();
            if let Some(w) = &w {
                witness_angle = witness_angle.max(containment_angle(&meet, &Subspace::span(w).expect("finite")));
            }
        }
    }
    equivalence.record(disjoint == dense, 0.0, || desc(format!("disjoint {disjoint}, dom + ran full {dense}")));
    if squeeze {
        equivalence.bound(witness_angle, RESIDUAL, || {
            desc(format!("planted vector not common to the eigenspaces ({witness_angle:.2e})"))
        });
    }
    vec![identity, equivalence]
}

/// Closed symmetric operators in `C^n` with the Euclidean metric: property
/// (P) against `T^*` being an operator, and against `mul T^* ∩ ker T^* = {0}`.
fn dense_domain_trial(rng: &mut ChaCha8Rng, _grid: &[C64]) -> Vec<Check> {
    let mut as_operator = Check::new("property_p_vs_operator_adjoint");
    let mut kernel_form = Check::new("property_p_vs_mul_ker");
    let n = rng.gen_range(2..=8);
    let d = rng.gen_range(0..n);
    let seed = rng.gen();
    let t = symmetric_operator(n, d, seed);
    let Some(t) = t else {
        as_operator.record(false, 0.0, || format!("n {n} d {d}: no symmetric operator sampled"));
        return vec![as_operator, kernel_form];
    };
    let star = t.adjoint();
    let p = property_p(&t);
    let op = star.is_operator();
    let trivial = subspace::intersect(&star.multivalued(), &star.kernel()).is_zero();
    as_operator.record(p == op, 0.0, || {
        format!(
            "n {n} dim T {}: dom T + ran T full {p}, adjoint an operator {op} (dim mul T* = {})",
            t.dim(),
            star.multivalued().dim()
        )
    });
    kernel_form.record(p == trivial, 0.0, || format!("n {n} dim T {}: (P) {p}, mul ∩ ker trivial {trivial}", t.dim()));
    vec![as_operator, kernel_form]
}

fn symmetric_operator(n: usize, d: usize, seed: u64) -> Option<Relation> {
    let spec = SymmetricSpec { diagonal_j: true, ..SymmetricSpec::new(n, 0, d) };
    for attempt in 0..16 {
        let mut rng = trial_rng(seed, attempt);
        let inst = kreinrel::generate::gen_symmetric(&spec, &mut rng).ok()?;
        if inst.t.is_operator() {
            return Some(inst.t);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use kreinrel::extensions::{self, default_grid};
    use kreinrel::linalg::CMat;

    #[test]
    fn sum_with_zero_relation_keeps_eigenspaces() {
        let mut rng = trial_rng(5, 0);
        let space = random_krein(4, &mut rng);
        let g = planted(&space, 3, &mut rng);
        let zero = Relation::zero_relation(&space, &space);
        let (sum, _) = g.cw_sum(&zero).unwrap();
        for z in default_grid() {
            assert!(angle(&sum.eigenspace(z), &g.eigenspace(z)) < 1e-12);
            assert!(angle(&composed_range(&g, &zero, z), &g.eigenspace(z)) < 1e-9);
        }
    }

    #[test]
    fn hyper_maximal_sum_gives_equalities_at_both_points() {
        let mut rng = trial_rng(6, 0);
        let inst = kreinrel::generate::gen_symmetric(&SymmetricSpec::new(2, 3, 2), &mut rng).unwrap();
        let n = extensions::sample_witness(&inst.t, &mut rng).unwrap();
        for z in [IM, -IM] {
            assert!(angle(&shifted_range_j(&n, z), &adjoint_eigenspace_j(&inst.t, z)) < 1e-9);
        }
    }

    #[test]
    fn squeezed_relation_has_common_eigenvector() {
        let space = KreinSpace::diagonal(1, 2);
        let mut rng = trial_rng(7, 0);
        let w = CMat::from_column_slice(3, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let hyper = krein::ortho_companion(&space, &Subspace::span(&w).unwrap());
        let pairs = Subspace::span(&linalg::block_diag(hyper.frame(), hyper.frame())).unwrap();
        let g = Relation::in_space(&space, random_part(&pairs, 3, &mut rng)).unwrap();
        let gp = g.adjoint();
        let meet = subspace::intersect(&gp.eigenspace(IM), &gp.eigenspace(c(2.0, 0.0)));
        assert!(containment_angle(&meet, &Subspace::span(&w).unwrap()) < 1e-10);
        assert!(!property_p(&g));
    }

    #[test]
    fn two_dimensional_shift_has_p_but_multivalued_adjoint() {
        let e = KreinSpace::euclidean(2);
        let v = CMat::from_column_slice(4, 1, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let t = Relation::in_space(&e, Subspace::span(&v).unwrap()).unwrap();
        assert!(t.is_symmetric() && t.is_operator());
        assert!(property_p(&t));
        assert!(!t.adjoint().is_operator());
    }
}
