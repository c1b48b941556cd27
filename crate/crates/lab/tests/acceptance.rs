//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line with the measured quantities before asserting.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use kreinrel::extensions::{self, default_grid};
use kreinrel::linalg::{self, c, CMat, C64};
use kreinrel::{subspace, Subspace};
use kreinrel_lab::io;
use kreinrel_lab::report::Report;
use kreinrel_lab::suites::{appendix, boundary, extensions as ext_suite, similarity, Suite, RESIDUAL};

const SEED: u64 = 1;

fn verdict(criterion: &str, ok: bool, detail: String) {
    println!("{} criterion {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion}: {detail}");
}

/// Per-check summary `name failures/evaluated max-residual`, and whether all
/// listed checks are clean with residual below `bound`.
fn summarise(report: &Report, names: &[&str], bound: f64) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in names {
        match report.check(name) {
            Some(s) => {
                ok &= s.failures == 0 && s.evaluated > 0 && s.max_residual < bound;
                parts.push(format!("{name} {}/{} max {:.1e}", s.failures, s.evaluated, s.max_residual));
            }
            None => {
                ok = false;
                parts.push(format!("{name} missing"));
            }
        }
    }
    if !ok {
        if let Some(f) = report.failures.iter().find(|f| names.contains(&f.check.as_str())) {
            parts.push(format!("first failure: trial {} {}", f.trial, f.detail));
        }
    }
    (ok, parts.join("; "))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn span(params: usize, param: impl Fn(&[C64]) -> Vec<C64>) -> Subspace {
    let cols: Vec<Vec<C64>> = (0..params)
        .map(|k| {
            let mut p = vec![c(0.0, 0.0); params];
            p[k] = c(1.0, 0.0);
            param(&p)
        })
        .collect();
    Subspace::span(&CMat::from_fn(cols[0].len(), params, |i, j| cols[j][i])).unwrap()
}

fn pair(f: [C64; 4], g: [C64; 4]) -> Vec<C64> {
    f.into_iter().chain(g).collect()
}

fn golden() -> Vec<(String, f64)> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/ex4.json");
    let loaded = io::load(path.to_str().unwrap()).unwrap();
    let t = loaded.relation.as_ref().unwrap();
    let tr = loaded.triple.as_ref().unwrap();
    let o = c(0.0, 0.0);
    let dist = |a: &Subspace, b: &Subspace| if a.dim() == b.dim() { subspace::distance(a, b) } else { f64::INFINITY };

    let mut out = Vec::new();
    let tplus = span(7, |p| pair([p[0], p[1], p[2], p[3]], [p[4], p[5], p[6], p[2]]));
    out.push(("T+".to_string(), dist(t.adjoint().graph(), &tplus)));
    for z in [c(0.0, 1.0), c(1.0, 2.0)] {
        let defect = span(3, |p| vec![p[0], p[1], z * p[2], p[2]]);
        out.push((format!("N_{z}(T+)"), dist(&t.adjoint().eigenspace(z), &defect)));
    }
    let t0 = span(4, |p| pair([p[0], o, p[1], o], [p[2], p[0], p[3], p[1]]));
    let t1 = span(4, |p| pair([p[0], p[1], o, p[2]], [o, p[3], o, o]));
    let n = span(3, |p| pair([o, o, p[2], o], [p[0], o, p[1], p[2]]));
    let jn = span(3, |p| pair([p[0], p[1], o, p[2]], [o, -p[0], o, o]));
    out.push(("T0".into(), dist(tr.t0().graph(), &t0)));
    out.push(("T1".into(), dist(tr.t1().graph(), &t1)));
    out.push(("N".into(), dist(tr.witness().graph(), &n)));
    out.push(("J(N)".into(), dist(&tr.flipped_witness(), &jn)));
    let reduced = extensions::reduce(t, &tr.t0()).unwrap();
    out.push(("reduce(T0)".into(), dist(reduced.graph(), &n)));

    let (g0, g1, beta) = tr.inverse_maps().unwrap();
    let (one, half) = (c(1.0, 0.0), c(0.5, 0.0));
    let mut e0 = linalg::zeros(8, 3);
    e0[(0, 0)] = half;
    e0[(5, 0)] = -half;
    e0[(1, 1)] = one;
    e0[(3, 2)] = one;
    let mut e1 = linalg::zeros(8, 3);
    e1[(2, 0)] = one;
    e1[(4, 2)] = one;
    e1[(6, 1)] = one;
    e1[(7, 0)] = one;
    out.push(("Γ0 inverse".into(), linalg::max_abs(&(g0 - e0))));
    out.push(("Γ1 inverse".into(), linalg::max_abs(&(g1 - e1))));
    out.push(("β".into(), linalg::max_abs(&beta)));
    out
}

#[test]
fn criterion_1_flip_example_golden() {
    let (rows, elapsed) = timed(golden);
    let worst_subspace = rows.iter().filter(|(n, _)| n != "β").map(|r| r.1).fold(0.0, f64::max);
    let beta = rows.iter().find(|(n, _)| n == "β").unwrap().1;
    let ok = worst_subspace < 1e-10 && beta < 1e-12 && elapsed < Duration::from_secs(1);
    let failing: Vec<&str> = rows.iter().filter(|(n, d)| *d >= if n == "β" { 1e-12 } else { 1e-10 }).map(|r| r.0.as_str()).collect();
    verdict(
        "1 (flip example golden)",
        ok,
        format!(
            "{} objects, max distance {worst_subspace:.1e}, |β| {beta:.1e}, {:.3} s, off: {failing:?}",
            rows.len(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_2_extension_roundtrip() {
    let (report, elapsed) = timed(|| ext_suite::witnesses(200, SEED));
    let (ok, detail) = summarise(&report, &["reduce_extend_roundtrip"], RESIDUAL);
    let ok = ok && report.trials == 200 && elapsed < Duration::from_secs(30);
    verdict("2 (reduce/extend roundtrip)", ok, format!("{detail}; {:.1} s", elapsed.as_secs_f64()));
}

#[test]
fn criterion_3_witness_audit() {
    let report = ext_suite::witnesses(200, SEED);
    let (ok, detail) = summarise(&report, &["witness_structure_audit"], RESIDUAL);
    verdict("3 (witness structure audit)", ok, detail);
}

#[test]
fn criterion_4_green_and_weyl_identities() {
    let report = boundary::run(200, SEED, &default_grid());
    let (green, d1) = summarise(&report, &["green_identity"], 1e-10);
    let (weyl, d2) = summarise(&report, &["weyl_conjugate_symmetry", "beta_shifted_weyl"], RESIDUAL);
    verdict("4 (Green identity, Weyl symmetry, β shift)", green && weyl, format!("{d1}; {d2}"));
}

#[test]
fn criterion_5_singular_part() {
    let report = similarity::pairs(100, SEED);
    let names = ["singular_part_formula", "singular_part_unitary", "w_maps_adjoint_inverse"];
    let (ok, detail) = summarise(&report, &names, 1e-9);
    verdict("5 (singular part of V0)", ok && report.trials == 100, detail);
}

#[test]
fn criterion_6_weyl_criterion_agreement() {
    let report = similarity::weyl_agreement(100, SEED, &default_grid());
    let (ok, detail) = summarise(&report, &["weyl_criterion_agreement", "planted_v_membership"], RESIDUAL);
    verdict("6 (containment criterion vs Weyl equality)", ok && report.trials == 100, detail);
}

#[test]
fn criterion_7_similarity_reconstruction() {
    let report = similarity::reconstruction(50, SEED, &default_grid());
    let (ok, detail) = summarise(&report, &["similarity_reconstruction", "scaled_triple_rejected"], 1e-7);
    verdict("7 (similarity reconstruction)", ok && report.trials == 50, detail);
}

#[test]
fn criterion_8_regular_points_of_extensions() {
    let report = ext_suite::spectral(100, SEED, &default_grid());
    let (ok, detail) = summarise(&report, &["extension_regular_on_grid", "regular_set_characterisation"], RESIDUAL);
    verdict("8 (extension regular on grid, regular-set identity)", ok && report.trials == 100, detail);
}

fn appendix_report() -> Report {
    appendix::run(200, SEED, &default_grid())
}

#[test]
fn criterion_9a_orthogonal_and_neutral_parts() {
    let names = ["eqgh_orthogonal_domains", "eqgh_neutral_inclusions", "eqgh_neutral_equalities"];
    let (ok, detail) = summarise(&appendix_report(), &names, RESIDUAL);
    verdict("9a (eigenspaces of orthogonal and neutral parts)", ok, detail);
}

#[test]
fn criterion_9b_sum_eigenspaces() {
    let names = ["sum_eigenspace_formula", "sum_eigenspace_on_o", "orthogonal_sum_spectrum"];
    let (ok, detail) = summarise(&appendix_report(), &names, RESIDUAL);
    verdict("9b (eigenspaces and point spectrum of sums)", ok, detail);
}

#[test]
fn criterion_9c_disjoint_eigenspaces() {
    let (ok, detail) = summarise(&appendix_report(), &["mul_ker_identity", "disjoint_eigenspaces"], RESIDUAL);
    verdict("9c (disjoint eigenspaces ⇔ dom + ran = H)", ok, detail);
}

#[test]
fn criterion_9d_property_p_and_adjoint() {
    let (ok, detail) =
        summarise(&appendix_report(), &["property_p_vs_operator_adjoint", "property_p_vs_mul_ker"], RESIDUAL);
    verdict("9d (property (P) ⇔ adjoint is an operator)", ok, detail);
}

#[test]
fn criterion_9e_full_verification_runtime() {
    let grid = default_grid();
    let (reports, elapsed) = timed(|| Suite::ALL.iter().map(|s| s.run(200, SEED, &grid)).collect::<Vec<_>>());
    let evaluated: usize = reports.iter().flat_map(|r| &r.checks).map(|s| s.evaluated).sum();
    let ok = elapsed < Duration::from_secs(300);
    verdict(
        "9e (full verification under 5 minutes)",
        ok,
        format!("{} suites, {evaluated} evaluations, {:.1} s", reports.len(), elapsed.as_secs_f64()),
    );
}
