//! The `relcalc` command line.
//!
//! Exit codes: 0 success with every verdict holding, 1 a verdict failed,
//! 2 bad input, 3 internal numeric inconsistency.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, FieldMode};
use crate::decomposition::{gamma, hus_constant, quotient_operator_norm};
use crate::document::RelationDocument;
use crate::error::Error;
use crate::linalg::{self, C64, DEFAULT_TOL};
use crate::probe::{truncation_probe, FamilySpec};
use crate::relation::LinearRelation;
use crate::report::{Fields, Format, Report};
use crate::spectral::point_spectrum;
use crate::stability::{self, Fault, Verdict, Verdicts};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Points sampled per pair by the sum suite.
const SUM_SAMPLES: usize = 200;

#[derive(Parser, Debug)]
#[command(name = "relcalc", version, about = "Linear relations and their Hyers-Ulam stability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FormatArg {
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatChoice::Text)]
    format: FormatChoice,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatChoice {
    Text,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Algebra,
    Equivalences,
    Hus,
    Contraction,
    Spectral,
    Sum,
    Product,
    Block,
}

const SUITES: [Suite; 8] = [
    Suite::Algebra,
    Suite::Equivalences,
    Suite::Hus,
    Suite::Contraction,
    Suite::Spectral,
    Suite::Sum,
    Suite::Product,
    Suite::Block,
];

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Algebra => "algebra",
            Suite::Equivalences => "equivalences",
            Suite::Hus => "hus",
            Suite::Contraction => "contraction",
            Suite::Spectral => "spectral",
            Suite::Sum => "sum",
            Suite::Product => "product",
            Suite::Block => "block",
        }
    }

    fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            SUITES.to_vec()
        } else {
            vec![self]
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldChoice {
    Real,
    Complex,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultChoice {
    Adjoint,
}

#[derive(Args, Debug)]
struct Binary {
    a: PathBuf,
    b: PathBuf,
    /// Output document.
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct Unary {
    a: PathBuf,
    /// Output document.
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Part dimensions, gamma, M_T, predicates and (for square relations) the spectrum.
    Analyze {
        file: PathBuf,
        /// Rank tolerance, overriding the document's.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Run property suites on one document or on a seeded random corpus.
    Verify {
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Number of random relations (replaces FILE).
        #[arg(long, conflicts_with = "file")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        #[arg(long, value_enum, default_value_t = FieldChoice::Both)]
        field: FieldChoice,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultChoice>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// A B: the product AB (B first, then A).
    Compose(Binary),
    /// A B: the operator-like sum A + B.
    Sum(Binary),
    /// A B: the span sum of the two graphs.
    Minkowski(Binary),
    /// A B: the Cartesian product A × B.
    Product(Binary),
    Adjoint(Unary),
    Inverse(Unary),
    /// Gamma and M_T along a truncation family.
    Probe {
        #[arg(long)]
        family: PathBuf,
        /// Sizes LO..HI (inclusive), overriding the family's n_range.
        #[arg(long)]
        n: Option<String>,
        /// Also write the table as CSV with columns n, gamma, M.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArg,
    },
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch(_) | Error::EmptyAmbient | Error::NonSquare { .. } | Error::Family(_) | Error::Parse(_) => EXIT_INPUT,
            _ => EXIT_NUMERIC,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<Vec<u8>> {
    std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn label(path: &Path) -> String {
    path.display().to_string()
}

fn load(path: &Path, tol: Option<f64>, report: &mut Report) -> Outcome<RelationDocument> {
    let bytes = read(path)?;
    report.input(&label(path), &bytes);
    let text = String::from_utf8(bytes).map_err(|_| input_error(format!("{}: not UTF-8", path.display())))?;
    RelationDocument::parse_with_tol(&text, tol).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn dims(t: &LinearRelation) -> Fields {
    let (d, r, n, m) = t.part_dims();
    Fields::new()
        .set("dim_h", t.dim_h())
        .set("dim_k", t.dim_k())
        .set("domain", d)
        .set("range", r)
        .set("kernel", n)
        .set("mulpart", m)
}

fn complex(z: C64) -> Fields {
    Fields::new().set("re", z.re).set("im", z.im)
}

fn analyze(t: &LinearRelation, report: &mut Report) -> Outcome<()> {
    let r = &mut report.results;
    r.insert("field", t.field().as_str());
    r.insert("dims", dims(t));
    let g = gamma(t);
    r.insert("gamma", g);
    r.insert("M_T", hus_constant(t));
    r.insert("quotient_norm", quotient_operator_norm(t));
    r.insert("near_unstable", g < t.tol());
    let square = t.is_square();
    let mut predicates = Fields::new().set("operator", t.is_operator()).set("everywhere_defined", t.is_everywhere_defined());
    predicates.insert("symmetric", square && t.is_symmetric()?);
    predicates.insert("selfadjoint", square && t.is_selfadjoint()?);
    predicates.insert("nonnegative", square && t.is_nonnegative()?);
    r.insert("predicates", predicates);
    if square {
        let s = point_spectrum(t)?;
        let eigen: Vec<Fields> = s.eigenvalues.iter().map(|e| complex(e.value).set("multiplicity", e.multiplicity)).collect();
        let spectrum = Fields::new()
            .set("eigenvalues", eigen)
            .set("every_point_eigenvalue", s.every_point_eigenvalue)
            .set("resolvent_empty", s.resolvent_empty)
            .set("infinite_multiplicity", s.multivalued_dim);
        r.insert("spectrum", spectrum);
    }
    let cert = stability::certify_hus(t, t.tol())?;
    if let Some(o) = &cert.oracle {
        report.results.insert("oracle_sup", o.sup_ratio);
    }
    for (id, v) in cert.verdicts {
        report.verdicts.insert(format!("hus: {id}"), v);
    }
    Ok(())
}

fn prefixed(suite: Suite, verdicts: Verdicts) -> impl Iterator<Item = (String, Verdict)> {
    verdicts.into_iter().map(move |(id, v)| (format!("{}: {id}", suite.name()), v))
}

fn flags(suite: Suite, hypotheses: &std::collections::BTreeMap<String, bool>) -> Verdicts {
    hypotheses
        .iter()
        .map(|(k, &ok)| (format!("{}: hypothesis {k}", suite.name()), Verdict::flag(ok, "required by the construction")))
        .collect()
}

/// Relations for the pair suites.
enum Pair<'a> {
    Sum(&'a LinearRelation, &'a LinearRelation),
    Product(&'a LinearRelation, &'a LinearRelation),
    Block([&'a LinearRelation; 4]),
}

fn pair_suite(pair: Pair, seed: u64, results: Option<&mut Fields>) -> Outcome<Verdicts> {
    let mut out = Verdicts::new();
    let mut notes = Fields::new();
    match pair {
        Pair::Sum(t, s) => {
            let r = stability::check_sum_stability(t, s, SUM_SAMPLES, seed)?;
            out.extend(flags(Suite::Sum, &r.hypotheses));
            out.insert("sum: applicable".into(), Verdict::flag(r.applicable, "hypotheses hold and b* < 1"));
            out.extend(prefixed(Suite::Sum, r.verdicts));
            notes = notes.set("b_star", r.b_star).set("M_T", r.m_t).set("M_sum", r.m_sum);
        }
        Pair::Product(t, s) => {
            let r = stability::check_product_stability(t, s)?;
            out.extend(prefixed(Suite::Product, r.verdicts));
            notes = notes.set("M_product", r.m_product);
        }
        Pair::Block([a, b, c, f]) => {
            let r = stability::block_matrix(a, b, c, f)?;
            out.extend(flags(Suite::Block, &r.hypotheses));
            out.insert("block: certified".into(), Verdict::flag(r.certified, "hypotheses hold and d < 1"));
            out.extend(prefixed(Suite::Block, r.verdicts));
            notes = notes.set("d", r.d).set("gamma_block", r.gamma);
        }
    }
    if let Some(results) = results {
        results.merge(notes);
    }
    Ok(out)
}

fn single_suite(suite: Suite, t: &LinearRelation, fault: Option<Fault>) -> Outcome<Verdicts> {
    let v = match suite {
        Suite::Algebra => stability::verify_algebra(t, fault)?,
        Suite::Equivalences => stability::verify_equivalences(t)?,
        Suite::Hus => stability::certify_hus(t, t.tol())?.verdicts,
        Suite::Contraction => stability::verify_contraction(t)?,
        Suite::Spectral => stability::verify_spectral(t)?,
        _ => unreachable!("pair suites are handled separately"),
    };
    Ok(prefixed(suite, v).collect())
}

fn verify_document(t: &LinearRelation, suites: &[Suite], fault: Option<Fault>, seed: u64, report: &mut Report) -> Outcome<()> {
    report.results.insert("dims", dims(t));
    report.results.insert("gamma", gamma(t));
    report.results.insert("M_T", hus_constant(t));
    for &suite in suites {
        let v = match suite {
            Suite::Sum => {
                let s = t.scalar_mul(linalg::c(0.5));
                pair_suite(Pair::Sum(t, &s), seed, Some(&mut report.results))?
            }
            Suite::Product => pair_suite(Pair::Product(t, t), seed, Some(&mut report.results))?,
            Suite::Block => {
                let off = t.scalar_mul(linalg::c(0.25));
                pair_suite(Pair::Block([t, &off, &off, t]), seed, Some(&mut report.results))?
            }
            _ => single_suite(suite, t, fault)?,
        };
        report.verdicts.extend(v);
    }
    Ok(())
}

/// Keeps, per verdict id, the instance with the smallest margin.
fn merge_worst(into: &mut Verdicts, item: usize, verdicts: Verdicts) -> bool {
    let mut all = true;
    for (id, mut v) in verdicts {
        all &= v.holds;
        let worse = into.get(&id).is_none_or(|cur| (cur.holds && !v.holds) || (cur.holds == v.holds && v.margin() < cur.margin()));
        if worse {
            v.detail = format!("worst at item {item}: {}", v.detail);
            into.insert(id, v);
        }
    }
    all
}

// Streams for the pair suites, so that adding a suite never shifts another's draws.
const SUM_STREAM: u64 = 0x5355_4d00;
const PRODUCT_STREAM: u64 = 0x5052_4f44;
const BLOCK_STREAM: u64 = 0x424c_4f43;

#[allow(clippy::too_many_arguments)]
fn verify_random(count: usize, seed: u64, max_dim: usize, mode: FieldMode, tol: f64, suites: &[Suite], fault: Option<Fault>, report: &mut Report) -> Outcome<()> {
    if max_dim == 0 {
        return Err(input_error("--max-dim must be at least 1"));
    }
    let mut failing = Vec::new();
    for i in 0..count {
        let field = mode.field_for(i);
        let t = corpus::random_relation(&mut corpus::item_rng(seed, i), max_dim, field).with_tol(tol);
        let mut verdicts = Verdicts::new();
        let item_seed = corpus::item_seed(seed, i);
        for &suite in suites {
            let v = match suite {
                Suite::Sum => {
                    let (t, s) = corpus::admissible_sum_pair(&mut corpus::item_rng(seed ^ SUM_STREAM, i), max_dim, field);
                    pair_suite(Pair::Sum(&t, &s), item_seed, None)
                }
                Suite::Product => {
                    let s = corpus::random_relation(&mut corpus::item_rng(seed ^ PRODUCT_STREAM, i), max_dim, field);
                    pair_suite(Pair::Product(&t, &s), item_seed, None)
                }
                Suite::Block => {
                    let [a, b, c, f] = corpus::dominated_blocks(&mut corpus::item_rng(seed ^ BLOCK_STREAM, i), max_dim, field);
                    pair_suite(Pair::Block([&a, &b, &c, &f]), item_seed, None)
                }
                _ => single_suite(suite, &t, fault),
            };
            verdicts.extend(v.map_err(|f| Failure {
                message: format!("item {i}: {}", f.message),
                ..f
            })?);
        }
        if !merge_worst(&mut report.verdicts, i, verdicts) {
            failing.push(i);
        }
    }
    report.seed = Some(seed);
    report.results.insert("items", count);
    report.results.insert("max_dim", max_dim);
    report.results.insert("field", format!("{mode:?}").to_lowercase());
    report.results.insert("failing_items", failing);
    Ok(())
}

fn write_document(doc: &RelationDocument, out: &Path, report: &mut Report) -> Outcome<()> {
    std::fs::write(out, doc.to_json()).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
    report.results.insert("output", label(out));
    report.results.insert("dims", dims(&doc.relation));
    report.results.insert("chain", doc.chain.clone());
    Ok(())
}

fn name(path: &Path) -> String {
    path.file_name().map_or_else(|| label(path), |n| n.to_string_lossy().into_owned())
}

fn binary(op: &str, args: &Binary, report: &mut Report) -> Outcome<()> {
    let a = load(&args.a, None, report)?;
    let b = load(&args.b, None, report)?;
    let (x, y) = (&a.relation, &b.relation);
    let result = match op {
        "compose" => x.compose(y)?,
        "sum" => x.sum(y)?,
        "minkowski" => x.minkowski_sum(y)?,
        "product" => x.cartesian_product(y),
        _ => unreachable!("known operation"),
    };
    let mut chain = a.chain.clone();
    chain.extend(b.chain.iter().cloned());
    chain.push(format!("{op}({}, {})", name(&args.a), name(&args.b)));
    write_document(&RelationDocument::with_chain(result, chain), &args.out, report)
}

fn unary(op: &str, args: &Unary, report: &mut Report) -> Outcome<()> {
    let a = load(&args.a, None, report)?;
    let result = match op {
        "adjoint" => a.relation.adjoint(),
        "inverse" => a.relation.inverse(),
        _ => unreachable!("known operation"),
    };
    let mut chain = a.chain.clone();
    chain.push(format!("{op}({})", name(&args.a)));
    write_document(&RelationDocument::with_chain(result, chain), &args.out, report)
}

fn parse_range(s: &str) -> Outcome<(usize, usize)> {
    let bad = || input_error(format!("--n expects LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn probe(family: &Path, n: Option<&str>, csv: Option<&Path>, report: &mut Report) -> Outcome<()> {
    let bytes = read(family)?;
    report.input(&label(family), &bytes);
    let text = String::from_utf8(bytes).map_err(|_| input_error(format!("{}: not UTF-8", family.display())))?;
    let mut spec = FamilySpec::from_json(&text).map_err(|e| input_error(format!("{}: {e}", family.display())))?;
    if let Some(n) = n {
        let (lo, hi) = parse_range(n)?;
        spec = spec.with_sizes(lo, hi);
    }
    let result = truncation_probe(&spec).map_err(|e| input_error(format!("{}: {e}", family.display())))?;
    let rows: Vec<Fields> = result
        .rows
        .iter()
        .map(|r| Fields::new().set("n", r.n).set("gamma", r.gamma).set("M", r.hus_constant))
        .collect();
    let r = &mut report.results;
    r.insert("rows", rows);
    r.insert("slope", result.slope);
    r.insert("r_squared", result.r_squared);
    r.insert("trend", result.trend.as_str());
    if let Some(path) = csv {
        let mut table = String::from("n,gamma,M\n");
        for row in &result.rows {
            table += &format!("{},{},{}\n", row.n, linalg::fmt_sci(row.gamma), linalg::fmt_sci(row.hus_constant));
        }
        std::fs::write(path, table).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        report.results.insert("csv", label(path));
    }
    Ok(())
}

fn format_of(f: &FormatArg) -> Format {
    match f.format {
        FormatChoice::Text => Format::Text,
        FormatChoice::Machine => Format::Machine,
    }
}

fn effective_tol(tol: Option<f64>) -> Outcome<f64> {
    match tol {
        Some(t) if !(t > 0.0 && t < 1.0) => Err(input_error(format!("--tol {t} must lie in (0, 1)"))),
        t => Ok(t.unwrap_or(DEFAULT_TOL)),
    }
}

fn document_op(command: String, op: &str, format: &FormatArg, run: impl FnOnce(&mut Report) -> Outcome<()>) -> Outcome<(Report, Format)> {
    let mut report = Report::new(command, DEFAULT_TOL);
    report.results.insert("operation", op);
    run(&mut report)?;
    Ok((report, format_of(format)))
}

fn execute(cli: Cli, command: String) -> Outcome<(Report, Format)> {
    match cli.command {
        Command::Analyze { file, tol, format } => {
            let mut report = Report::new(command, effective_tol(tol)?);
            let doc = load(&file, tol, &mut report)?;
            report.tol = doc.relation.tol();
            analyze(&doc.relation, &mut report)?;
            Ok((report, format_of(&format)))
        }
        Command::Verify {
            file,
            suite,
            random,
            seed,
            max_dim,
            field,
            tol,
            inject_fault,
            format,
        } => {
            let effective = effective_tol(tol)?;
            let mut report = Report::new(command, effective);
            let suites = suite.expand();
            let fault = inject_fault.map(|FaultChoice::Adjoint| Fault::Adjoint);
            report.results.insert("suites", suites.iter().map(|s| s.name()).collect::<Vec<_>>());
            match (file, random) {
                (Some(file), None) => {
                    let doc = load(&file, tol, &mut report)?;
                    report.tol = doc.relation.tol();
                    report.seed = Some(seed);
                    verify_document(&doc.relation, &suites, fault, seed, &mut report)?;
                }
                (None, Some(n)) => {
                    let mode = match field {
                        FieldChoice::Real => FieldMode::Real,
                        FieldChoice::Complex => FieldMode::Complex,
                        FieldChoice::Both => FieldMode::Both,
                    };
                    verify_random(n, seed, max_dim, mode, effective, &suites, fault, &mut report)?;
                }
                _ => return Err(input_error("verify needs FILE or --random N")),
            }
            Ok((report, format_of(&format)))
        }
        Command::Compose(a) => document_op(command, "compose", &a.format, |r| binary("compose", &a, r)),
        Command::Sum(a) => document_op(command, "sum", &a.format, |r| binary("sum", &a, r)),
        Command::Minkowski(a) => document_op(command, "minkowski", &a.format, |r| binary("minkowski", &a, r)),
        Command::Product(a) => document_op(command, "product", &a.format, |r| binary("product", &a, r)),
        Command::Adjoint(a) => document_op(command, "adjoint", &a.format, |r| unary("adjoint", &a, r)),
        Command::Inverse(a) => document_op(command, "inverse", &a.format, |r| unary("inverse", &a, r)),
        Command::Probe { family, n, csv, format } => {
            let mut report = Report::new(command, DEFAULT_TOL);
            probe(&family, n.as_deref(), csv.as_deref(), &mut report)?;
            Ok((report, format_of(&format)))
        }
    }
}

/// Runs the command line `args` (program name first), writing the report to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let echo: Vec<String> = std::iter::once("relcalc".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect();
    match execute(cli, echo.join(" ")) {
        Ok((report, format)) => {
            let _ = out.write_all(report.render(format).as_bytes());
            let failures = report.failures();
            for (id, v) in &failures {
                let _ = writeln!(err, "FAIL {id}: margin {} ({})", linalg::fmt_sci(v.margin()), v.detail);
            }
            if failures.is_empty() {
                EXIT_OK
            } else {
                EXIT_VERDICT
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
