//! Command-line surface. Exit codes: 0 success, 1 mathematical rejection,
//! 2 input error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use kreinrel::extensions::{self, default_grid};
use kreinrel::linalg::{CMat, C64};
use kreinrel::similarity::{reconstruct_similarity, SimilarityOutcome};
use kreinrel::{BoundaryTriple, Error, Relation, Subspace, Tol};

use crate::io::{self, IoError, Loaded};
use crate::report::Report;
use crate::suites::Suite;

pub const DEFAULT_SEED: u64 = 1;
pub const SEED_VAR: &str = "KREINREL_SEED";

#[derive(Parser, Debug)]
#[command(name = "kreinrel", version, about = "Linear relations, extensions and boundary triples in Krein spaces")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, global = true)]
    pub tol_rank_rel: Option<f64>,
    /// Absolute singular-value floor for rank decisions.
    #[arg(long, global = true)]
    pub tol_rank_abs: Option<f64>,
    /// Largest principal angle at which subspaces count as equal.
    #[arg(long, global = true)]
    pub tol_angle: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Inspect a relation.
    #[command(subcommand)]
    Relation(RelationCmd),
    /// Self-adjoint extensions of a symmetric relation.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// Boundary triples.
    #[command(subcommand)]
    Triple(TripleCmd),
    /// Weyl family value `M(z)` of a triple.
    Weyl(PointArgs),
    /// Decide similarity of two triples and reconstruct the unitary.
    Similar {
        first: String,
        second: String,
        /// `default` or a comma-separated list such as `1+2i,-1+i`; closed
        /// under conjugation.
        #[arg(long, default_value = "default")]
        grid: String,
    },
    /// Run randomised verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Master seed; defaults to `KREINREL_SEED` or 1.
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<String>,
    },
    /// Re-render a saved JSON report.
    Report { file: String },
}

#[derive(Subcommand, Debug)]
pub enum RelationCmd {
    /// Dimensions of the parts and symmetry properties.
    Check { file: String },
    /// The adjoint `T^+` as a document.
    Adjoint { file: String },
    /// Bases of domain, range, kernel and multivalued part.
    Parts { file: String },
}

#[derive(Subcommand, Debug)]
pub enum ExtCmd {
    /// Defect numbers.
    Defects { file: String },
    /// Whether a witness `N` produces a self-adjoint extension.
    Nclass { file: String, witness: String },
    /// `T0 = T ⊕ N`.
    Extend { file: String, witness: String },
    /// `N = T0 ∩ T^⊥`.
    Reduce { file: String, extension: String },
    /// Structure audit of a witness.
    Audit { file: String, witness: String },
}

#[derive(Subcommand, Debug)]
pub enum TripleCmd {
    /// Validate the triple and print `T0`, `T1` and `β`.
    Validate { file: String },
    /// `M(z)`.
    Weyl(PointArgs),
    /// `γ(z)`.
    Gamma(PointArgs),
    /// Inverses of the restricted boundary maps and `β`.
    Inverse { file: String },
    /// A transformed triple.
    Transform {
        file: String,
        #[arg(long, value_enum)]
        kind: TransformKind,
        /// Scale for `--kind scale`.
        #[arg(long, default_value_t = 2.0)]
        kappa: f64,
    },
}

#[derive(Args, Debug)]
pub struct PointArgs {
    pub file: String,
    /// Spectral parameter, e.g. `1+2i`.
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformKind {
    /// `(Γ0, Γ1 - β Γ0)`.
    Beta,
    /// `(Γ1, -Γ0)`.
    Transpose,
    /// `(Γ0 / κ, κ Γ1)`.
    Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Appendix,
    Extensions,
    Boundary,
    Similarity,
    All,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Rejected(Output),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Sort library errors into input problems and mathematical rejections.
fn classify(context: &str, e: Error) -> Failure {
    let msg = format!("{context}: {e}");
    match e {
        Error::DimensionMismatch { .. }
        | Error::NonFinite
        | Error::NotHermitian(_)
        | Error::NotInvolution(_)
        | Error::HostMismatch
        | Error::SignatureMismatch(..)
        | Error::Invalid(_) => Failure::Input(msg),
        _ => Failure::Rejected(Output::message(msg)),
    }
}

#[derive(Debug)]
struct Output {
    json: Value,
    text: String,
}

impl Output {
    fn message(msg: String) -> Self {
        Output { json: json!({ "error": msg }), text: msg }
    }
}

type Outcome = Result<Output, Failure>;

/// Parse `args` (including the program name), run, write to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let mut tol = Tol::DEFAULT;
    if let Some(v) = cli.tol_rank_rel {
        tol.rank_rel = v;
    }
    if let Some(v) = cli.tol_rank_abs {
        tol.rank_abs = v;
    }
    if let Some(v) = cli.tol_angle {
        tol.angle = v;
    }
    Tol::set_current(tol);
    let format = cli.format;
    let (code, output) = match execute(cli.command) {
        Ok(o) => (0, o),
        Err(Failure::Rejected(o)) => (1, o),
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let body = match format {
        Format::Text => output.text,
        Format::Json => io::render(&output.json),
    };
    let _ = write!(out, "{body}");
    if !body.ends_with('\n') {
        let _ = writeln!(out);
    }
    code
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Relation(c) => relation_cmd(c),
        Command::Ext(c) => ext_cmd(c),
        Command::Triple(c) => triple_cmd(c),
        Command::Weyl(a) => weyl(&a),
        Command::Similar { first, second, grid } => similar(&first, &second, &grid),
        Command::Verify { suite, trials, seed, out } => verify(suite, trials, seed, out),
        Command::Report { file } => {
            let text = std::fs::read_to_string(&file).map_err(|e| Failure::Input(format!("{file}: {e}")))?;
            let report: Report =
                serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{file}:{}:{}: {e}", e.line(), e.column())))?;
            Ok(Output { json: serde_json::to_value(&report).expect("report"), text: report.to_text() })
        }
    }
}

pub fn parse_point(s: &str) -> Result<C64, String> {
    C64::from_str(s.trim()).map_err(|_| format!("cannot parse `{s}` as a complex number"))
}

/// `default`, or a comma-separated list closed under conjugation.
pub fn parse_grid(s: &str) -> Result<Vec<C64>, String> {
    if s.trim() == "default" {
        return Ok(default_grid());
    }
    let mut pts: Vec<C64> = Vec::new();
    for part in s.split(',') {
        let z = parse_point(part)?;
        for w in [z, z.conj()] {
            if !pts.iter().any(|p| (p - w).norm() == 0.0) {
                pts.push(w);
            }
        }
    }
    Ok(pts)
}

pub fn seed_or_env(seed: Option<u64>) -> u64 {
    seed.or_else(|| std::env::var(SEED_VAR).ok()?.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

fn fmt_c(z: C64) -> String {
    let re = if z.re.abs() < 5e-13 { 0.0 } else { z.re };
    let im = if z.im.abs() < 5e-13 { 0.0 } else { z.im };
    format!("{re:.6}{}{:.6}i", if im < 0.0 { "-" } else { "+" }, im.abs())
}

fn fmt_matrix(m: &CMat) -> String {
    let mut s = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:>22}", fmt_c(m[(i, j)]))).collect();
        let _ = writeln!(s, "  {}", row.join(" "));
    }
    if m.nrows() == 0 || m.ncols() == 0 {
        let _ = writeln!(s, "  ({}×{})", m.nrows(), m.ncols());
    }
    s
}

fn cpx(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mat(m: &CMat) -> Value {
    serde_json::to_value(io::matrix_doc(m)).expect("matrix")
}

fn subspace_block(name: &str, s: &Subspace) -> (Value, String) {
    let text = format!("{name} (dim {}):\n{}", s.dim(), fmt_matrix(s.frame()));
    (json!({ "dim": s.dim(), "basis": mat(&s.frame().transpose()) }), text)
}

fn load(path: &str) -> Result<Loaded, Failure> {
    Ok(io::load(path)?)
}

fn load_relation(path: &str) -> Result<Relation, Failure> {
    Ok(load(path)?.relation(path)?.clone())
}

fn load_triple(path: &str) -> Result<BoundaryTriple, Failure> {
    Ok(load(path)?.triple(path)?.clone())
}

fn same_host(path: &str, t: &Relation, other: &Relation) -> Result<(), Failure> {
    if t.src().same_as(other.src()) {
        Ok(())
    } else {
        Err(Failure::Input(format!("{path}: the space differs from that of the relation")))
    }
}

fn relation_output(r: &Relation, label: &str) -> Output {
    let doc = io::relation_document(r);
    let text = format!("{label} (dim {} in C^{}):\n{}", r.dim(), 2 * r.src().dim(), fmt_matrix(r.graph().frame()));
    Output { json: serde_json::to_value(doc).expect("document"), text }
}

fn relation_cmd(cmd: RelationCmd) -> Outcome {
    match cmd {
        RelationCmd::Check { file } => {
            let t = load_relation(&file)?;
            let symmetric = t.is_symmetric();
            let defects = if symmetric { extensions::defect_numbers(&t).ok() } else { None };
            let dims = [t.dim(), t.domain().dim(), t.range().dim(), t.kernel().dim(), t.multivalued().dim()];
            let mut text = format!(
                "dim {} dom {} ran {} ker {} mul {}\noperator {}\nsymmetric {symmetric}\nself-adjoint {}\nproperty (P) {}\n",
                dims[0],
                dims[1],
                dims[2],
                dims[3],
                dims[4],
                t.is_operator(),
                t.is_self_adjoint(),
                extensions::property_p(&t)
            );
            if let Some((p, m)) = defects {
                let _ = writeln!(text, "defect numbers ({p}, {m})");
            }
            let json = json!({
                "dim": dims[0], "dom": dims[1], "ran": dims[2], "ker": dims[3], "mul": dims[4],
                "operator": t.is_operator(), "symmetric": symmetric, "self_adjoint": t.is_self_adjoint(),
                "property_p": extensions::property_p(&t),
                "defect_numbers": defects.map(|(a, b)| json!([a, b])),
            });
            Ok(Output { json, text })
        }
        RelationCmd::Adjoint { file } => Ok(relation_output(&load_relation(&file)?.adjoint(), "adjoint")),
        RelationCmd::Parts { file } => {
            let t = load_relation(&file)?;
            let mut json = serde_json::Map::new();
            let mut text = String::new();
            for (name, s) in [("dom", t.domain()), ("ran", t.range()), ("ker", t.kernel()), ("mul", t.multivalued())] {
                let (v, s) = subspace_block(name, &s);
                json.insert(name.into(), v);
                text.push_str(&s);
            }
            Ok(Output { json: Value::Object(json), text })
        }
    }
}

fn ext_cmd(cmd: ExtCmd) -> Outcome {
    match cmd {
        ExtCmd::Defects { file } => {
            let t = load_relation(&file)?;
            let (p, m) = extensions::defect_numbers(&t).map_err(|e| classify(&file, e))?;
            Ok(Output { json: json!({ "defect_numbers": [p, m] }), text: format!("defect numbers ({p}, {m})\n") })
        }
        ExtCmd::Nclass { file, witness } => {
            let t = load_relation(&file)?;
            let n = load_relation(&witness)?;
            same_host(&witness, &t, &n)?;
            let rep = extensions::n_class_check(&t, &n).map_err(|e| classify(&file, e))?;
            let reason = rep.reason();
            let json = json!({ "accepted": rep.accepted, "reason": reason });
            let text = match &reason {
                None => "accepted: T ⊕ N is self-adjoint\n".to_string(),
                Some(r) => format!("rejected: {r}\n"),
            };
            let out = Output { json, text };
            if rep.accepted {
                Ok(out)
            } else {
                Err(Failure::Rejected(out))
            }
        }
        ExtCmd::Extend { file, witness } => {
            let t = load_relation(&file)?;
            let n = load_relation(&witness)?;
            same_host(&witness, &t, &n)?;
            let t0 = extensions::extend(&t, &n).map_err(|e| classify(&file, e))?;
            Ok(relation_output(&t0, "extension"))
        }
        ExtCmd::Reduce { file, extension } => {
            let t = load_relation(&file)?;
            let t0 = load_relation(&extension)?;
            same_host(&extension, &t, &t0)?;
            let n = extensions::reduce(&t, &t0).map_err(|e| classify(&file, e))?;
            Ok(relation_output(&n, "witness"))
        }
        ExtCmd::Audit { file, witness } => {
            let t = load_relation(&file)?;
            let n = load_relation(&witness)?;
            same_host(&witness, &t, &n)?;
            let a = extensions::prop_n_audit(&t, &n).map_err(|e| classify(&file, e))?;
            let passed = a.passed(crate::suites::RESIDUAL);
            let json = json!({
                "passed": passed,
                "dim_h": a.dim_h, "defect": a.defect_t, "dim_t": a.dim_t, "dim_n": a.dim_n,
                "defect_sum_ok": a.defect_sum_ok, "dims_ok": a.dims_ok,
                "sigma_residuals": [a.sigma.witness_residual, a.sigma.m_hat_residual, a.sigma.tplus_residual],
                "dom_n_spread": a.dom_n_spread,
                "dom_n_gram_residual": a.dom_n_gram_residual,
                "dom_n_hyper_maximal": a.dom_n_hyper_maximal,
                "regular_point_failures": a.regular_point_failures.iter().map(|z| cpx(*z)).collect::<Vec<_>>(),
            });
            let text = format!(
                "audit {}\ndim H {} = defect {} + dim T {} ({})\ndim N {} ({})\nΣ residuals {:.2e} {:.2e} {:.2e}\ndom N spread {:.2e}, hyper-maximal {}\n",
                if passed { "passed" } else { "FAILED" },
                a.dim_h,
                a.defect_t,
                a.dim_t,
                a.defect_sum_ok,
                a.dim_n,
                a.dims_ok,
                a.sigma.witness_residual,
                a.sigma.m_hat_residual,
                a.sigma.tplus_residual,
                a.dom_n_spread,
                a.dom_n_hyper_maximal
            );
            let out = Output { json, text };
            if passed {
                Ok(out)
            } else {
                Err(Failure::Rejected(out))
            }
        }
    }
}

fn point(a: &PointArgs) -> Result<C64, Failure> {
    parse_point(&a.z).map_err(Failure::Input)
}

fn weyl(a: &PointArgs) -> Outcome {
    let tr = load_triple(&a.file)?;
    let z = point(a)?;
    match tr.weyl_matrix(z) {
        Ok(m) => Ok(Output {
            json: json!({ "z": cpx(z), "M": mat(&m) }),
            text: format!("M({}) =\n{}", fmt_c(z), fmt_matrix(&m)),
        }),
        Err(_) => {
            let rel = tr.weyl(z);
            Ok(Output {
                json: json!({ "z": cpx(z), "relation": mat(&rel.graph().frame().transpose()) }),
                text: format!("M({}) is not an operator; graph basis:\n{}", fmt_c(z), fmt_matrix(rel.graph().frame())),
            })
        }
    }
}

fn triple_cmd(cmd: TripleCmd) -> Outcome {
    match cmd {
        TripleCmd::Validate { file } => {
            let doc = io::read(&file)?;
            let bare = io::Document { triple: None, ..doc.clone() };
            let t = io::interpret(&file, &bare)?.relation(&file)?.clone();
            let (gamma, basis) = io::triple_inputs(&file, &doc)?
                .ok_or_else(|| Failure::Input(format!("{file}: missing `triple` section")))?;
            let tr = BoundaryTriple::validate(&t, &gamma, &basis).map_err(|e| classify(&file, e))?;
            let beta = tr.beta().map_err(|e| classify(&file, e))?;
            let (j0, t0) = subspace_block("T0", tr.t0().graph());
            let (j1, t1) = subspace_block("T1", tr.t1().graph());
            let green = tr.green_residual();
            let json = json!({
                "valid": true, "boundary_dim": tr.boundary_dim(), "green_residual": green,
                "T0": j0, "T1": j1, "beta": mat(&beta),
            });
            let text = format!(
                "valid boundary triple, boundary dimension {}, Green residual {green:.2e}\n{t0}{t1}beta:\n{}",
                tr.boundary_dim(),
                fmt_matrix(&beta)
            );
            Ok(Output { json, text })
        }
        TripleCmd::Weyl(a) => weyl(&a),
        TripleCmd::Gamma(a) => {
            let tr = load_triple(&a.file)?;
            let z = point(&a)?;
            let g = tr.gamma_field(z).map_err(|e| classify(&a.file, e))?;
            Ok(Output {
                json: json!({ "z": cpx(z), "gamma": mat(&g) }),
                text: format!("γ({}) =\n{}", fmt_c(z), fmt_matrix(&g)),
            })
        }
        TripleCmd::Inverse { file } => {
            let tr = load_triple(&file)?;
            let (g0, g1, beta) = tr.inverse_maps().map_err(|e| classify(&file, e))?;
            Ok(Output {
                json: json!({ "gamma0_inverse": mat(&g0), "gamma1_inverse": mat(&g1), "beta": mat(&beta) }),
                text: format!(
                    "Γ0 inverse on Ĵ(N):\n{}Γ1 inverse on N:\n{}beta:\n{}",
                    fmt_matrix(&g0),
                    fmt_matrix(&g1),
                    fmt_matrix(&beta)
                ),
            })
        }
        TripleCmd::Transform { file, kind, kappa } => {
            let tr = load_triple(&file)?;
            let new = match kind {
                TransformKind::Beta => tr.beta_shift(),
                TransformKind::Transpose => tr.transpose(),
                TransformKind::Scale => tr.scaled(kappa),
            }
            .map_err(|e| classify(&file, e))?;
            let doc = io::triple_document(&new);
            Ok(Output { json: serde_json::to_value(&doc).expect("document"), text: io::render(&doc) })
        }
    }
}

fn similar(first: &str, second: &str, grid: &str) -> Outcome {
    let a = load_triple(first)?;
    let b = load_triple(second)?;
    let grid = parse_grid(grid).map_err(Failure::Input)?;
    match reconstruct_similarity(&a, &b, &grid).map_err(|e| classify(second, e))? {
        SimilarityOutcome::Similar(s) => Ok(Output {
            json: json!({
                "similar": true, "U": mat(&s.u), "intertwining": s.intertwining,
                "solve_residual": s.solve_residual, "isometry": s.isometry,
                "off_diagonal": s.off_diagonal,
            }),
            text: format!(
                "similar: Γ' = Γ Ũ^-1 with residual {:.2e}\nU =\n{}",
                s.intertwining,
                fmt_matrix(&s.u)
            ),
        }),
        SimilarityOutcome::NotSimilar { z, discrepancy } => Err(Failure::Rejected(Output {
            json: json!({ "similar": false, "z": cpx(z), "discrepancy": discrepancy }),
            text: format!("not similar: Weyl families differ at {} (discrepancy {discrepancy:.3e})\n", fmt_c(z)),
        })),
    }
}

fn verify(suite: SuiteArg, trials: usize, seed: Option<u64>, out: Option<String>) -> Outcome {
    let seed = seed_or_env(seed);
    let grid = default_grid();
    let suites: Vec<Suite> = match suite {
        SuiteArg::Appendix => vec![Suite::Appendix],
        SuiteArg::Extensions => vec![Suite::Extensions],
        SuiteArg::Boundary => vec![Suite::Boundary],
        SuiteArg::Similarity => vec![Suite::Similarity],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let reports: Vec<Report> = suites.iter().map(|s| s.run(trials, seed, &grid)).collect();
    let report = if reports.len() == 1 {
        reports.into_iter().next().expect("one report")
    } else {
        Report::merge("all", seed, reports)
    };
    if let Some(path) = out {
        std::fs::write(&path, io::render(&report)).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    let output = Output { json: serde_json::to_value(&report).expect("report"), text: report.to_text() };
    if report.passed() {
        Ok(output)
    } else {
        Err(Failure::Rejected(output))
    }
}
