//! The `gr` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cyclo::CycField;
use crate::greenring::{derive_tables, parse_element, DerivedTables, Presentation, RingElement, RingError};
use crate::modcat::{Catalog, IndecLabel, ModError, ModuleRep, Sign};
use crate::verify::{self, exit_code, sort_reports, CheckReport, Verifier};

pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CORRUPT: i32 = 3;
pub const EXIT_PARSE: i32 = 4;
pub const EXIT_MISSING: i32 = 5;
pub const EXIT_ORACLE: i32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Relations,
    Crosscheck,
    Basis,
    Omega,
    Robustness,
    Stable,
    All,
}

#[derive(Parser, Debug)]
#[command(name = "gr", version, about = "Green ring of the Drinfeld double of a Taft algebra")]
struct Cli {
    /// Order of the root of unity.
    #[arg(long, global = true, default_value_t = 3)]
    n: u32,
    /// Allow n = 5, which is slow.
    #[arg(long, global = true)]
    allow_large: bool,
    /// Table cache directory (default: $GR_CACHE_DIR or ./.gr-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Derive and cache the correction tables and catalog fingerprints.
    Build {
        /// Largest syzygy and band index to tabulate.
        #[arg(long)]
        max_m: Option<u32>,
    },
    /// Multiply two elements and print the normal form.
    Mul {
        a: String,
        b: String,
        #[arg(long)]
        stable: bool,
    },
    /// Normal form of a single element.
    Nf {
        a: String,
        #[arg(long)]
        stable: bool,
    },
    /// Decompose the tensor product of two indecomposables.
    Tensor { a: String, b: String },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the cached tables.
    Export,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    msg: String,
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Failure {
        let code = match &e {
            RingError::Parse(_) => EXIT_PARSE,
            RingError::MissingTableEntry(_) => EXIT_MISSING,
            RingError::Corrupt(_) => EXIT_CORRUPT,
            RingError::Oracle(ModError::Unidentified(_) | ModError::Inconclusive(_))
            | RingError::Oracle(ModError::NonSplitSemisimpleQuotient(_)) => EXIT_ORACLE,
            RingError::Oracle(ModError::Parse(_) | ModError::Range(_)) => EXIT_PARSE,
            _ => EXIT_FAIL,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<ModError> for Failure {
    fn from(e: ModError) -> Failure {
        RingError::from(e).into()
    }
}

fn fail(code: i32, msg: impl Into<String>) -> Failure {
    Failure { code, msg: msg.into() }
}

pub fn default_max_m(n: u32) -> u32 {
    match n {
        3 => 4,
        4 => 3,
        _ => 2,
    }
}

fn cache_dir(cli: &Cli) -> PathBuf {
    cli.cache_dir
        .clone()
        .or_else(|| std::env::var_os("GR_CACHE_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(".gr-cache"))
}

pub fn tables_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("tables-{n}.json"))
}

pub fn fingerprint_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("catalog-{n}.json"))
}

fn module_digest(m: &ModuleRep) -> String {
    let mut h = Sha256::new();
    for w in m.weights() {
        h.update(format!("{},{};", w.0, w.1));
    }
    for op in [m.act_a(), m.act_d()] {
        for i in 0..op.rows() {
            for j in 0..op.cols() {
                if !op[(i, j)].is_zero() {
                    h.update(format!("{i},{j}={};", op[(i, j)].to_json()));
                }
            }
        }
    }
    hex::encode(h.finalize())
}

/// Digests of the catalog models at `r = 0`.
pub fn catalog_fingerprints(n: u32, max_m: u32) -> Result<Value, RingError> {
    let cat = Catalog::get(n)?;
    let mut labels = Vec::new();
    for l in 1..=n {
        labels.push(IndecLabel::simple(n, l, 0)?);
    }
    for l in 1..n {
        labels.push(IndecLabel::proj(n, l, 0)?);
        for sign in [Sign::Plus, Sign::Minus] {
            for m in 1..=max_m {
                labels.push(IndecLabel::syz(n, sign, m, l, 0)?);
            }
        }
        for s in 1..=2 {
            for eta in verify::default_etas(n) {
                labels.push(IndecLabel::band(n, s, l, 0, eta)?);
            }
        }
    }
    let mut map = serde_json::Map::new();
    for lab in labels {
        map.insert(lab.to_string(), Value::String(module_digest(&cat.build(&lab)?)));
    }
    Ok(json!({"n": n, "max_m": max_m, "models": map}))
}

/// Cached tables, or empty tables when nothing was built yet.
fn load_tables(dir: &Path, n: u32) -> Result<(DerivedTables, bool), Failure> {
    let p = tables_path(dir, n);
    if !p.exists() {
        return Ok((DerivedTables::empty(n, 0), false));
    }
    let t = DerivedTables::load(&p).map_err(|e| match e {
        RingError::Io(e) => fail(EXIT_CORRUPT, format!("cannot read {}: {e}", p.display())),
        e => fail(EXIT_CORRUPT, format!("{}: {e}", p.display())),
    })?;
    if t.n != n {
        return Err(fail(EXIT_CORRUPT, format!("{} holds tables for n={}", p.display(), t.n)));
    }
    Ok((t, true))
}

fn require_tables(dir: &Path, n: u32) -> Result<DerivedTables, Failure> {
    match load_tables(dir, n)? {
        (t, true) => Ok(t),
        _ => Err(fail(
            EXIT_MISSING,
            format!("no tables for n={n} in {}; run `gr build --n {n}` first", dir.display()),
        )),
    }
}

/// An operand: element JSON, a module label, or a ring expression.
fn operand(t: &DerivedTables, text: &str) -> Result<RingElement, RingError> {
    let field = CycField::get(t.n);
    let s = text.trim();
    if s.starts_with('{') {
        let v: Value = serde_json::from_str(s).map_err(|e| RingError::Parse(e.to_string()))?;
        return RingElement::from_json(field, &v);
    }
    if let Ok(lab) = IndecLabel::parse(field, s) {
        return t.class_of(&lab);
    }
    parse_element(field, s, |l| t.class_of(l))
}

fn label(n: u32, text: &str) -> Result<IndecLabel, Failure> {
    IndecLabel::parse(CycField::get(n), text).map_err(|e| fail(EXIT_PARSE, e.to_string()))
}

fn print_element(out: &mut dyn Write, e: &RingElement, fmt: Format) -> std::io::Result<()> {
    match fmt {
        Format::Pretty => writeln!(out, "{e}"),
        Format::Json => writeln!(out, "{}", e.to_json()),
    }
}

fn print_reports(out: &mut dyn Write, reps: &[CheckReport], fmt: Format) -> std::io::Result<()> {
    for r in reps {
        match fmt {
            Format::Json => writeln!(out, "{}", r.to_json())?,
            Format::Pretty => writeln!(
                out,
                "{:<12} {:<5} {} {}",
                r.status.as_str().to_uppercase(),
                r.id,
                r.inputs,
                r.detail.as_deref().unwrap_or("")
            )?,
        }
    }
    Ok(())
}

fn run_suite(v: &Verifier, suite: Suite, jobs: usize, seed: u64) -> Vec<CheckReport> {
    let ms = [1, 2];
    let mut reps = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Identities {
        reps.push(verify::lemma_sweep(60));
    }
    if all || suite == Suite::Relations {
        reps.extend(v.all_relations(&ms));
    }
    if all || suite == Suite::Crosscheck {
        reps.extend(v.crosscheck_sweep(2, 2, jobs));
    }
    if all || suite == Suite::Basis {
        reps.extend(v.verify_basis(3.min(v.tables.max_m)));
    }
    if all || suite == Suite::Omega {
        reps.extend(v.verify_omega_band(2, jobs));
    }
    if all || suite == Suite::Robustness {
        reps.push(v.robustness(1000, seed));
    }
    if all || suite == Suite::Stable {
        reps.extend(v.stable_checks());
    }
    sort_reports(&mut reps);
    reps
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let n = cli.n;
    if n < 3 {
        return Err(fail(EXIT_PARSE, "n must be at least 3"));
    }
    if n > 5 {
        return Err(fail(EXIT_PARSE, "n > 5 is not supported"));
    }
    if n == 5 && !cli.allow_large {
        return Err(fail(
            EXIT_PARSE,
            "n = 5 builds large module catalogs (minutes of CPU); pass --allow-large to proceed",
        ));
    }
    let dir = cache_dir(cli);
    let io = |e: std::io::Error| fail(EXIT_FAIL, e.to_string());
    match &cli.cmd {
        Cmd::Build { max_m } => {
            let max_m = max_m.unwrap_or_else(|| default_max_m(n));
            let tp = tables_path(&dir, n);
            let fp = fingerprint_path(&dir, n);
            if let (t, true) = load_tables(&dir, n)? {
                if fp.exists() && t.max_m >= max_m {
                    let stored: Value = std::fs::read_to_string(&fp)
                        .ok()
                        .and_then(|s| serde_json::from_str(&s).ok())
                        .ok_or_else(|| fail(EXIT_CORRUPT, format!("{} is unreadable", fp.display())))?;
                    let now = catalog_fingerprints(n, t.max_m)?;
                    if stored != now {
                        return Err(fail(EXIT_CORRUPT, format!("{} does not match the catalog", fp.display())));
                    }
                    t.check_dims().map_err(|e| fail(EXIT_CORRUPT, e.to_string()))?;
                    writeln!(out, "up to date: {}", tp.display()).map_err(io)?;
                    return Ok(0);
                }
            }
            std::fs::create_dir_all(&dir).map_err(io)?;
            let t = derive_tables(n, max_m)?;
            t.save(&tp)?;
            let fps = serde_json::to_string_pretty(&catalog_fingerprints(n, max_m)?).expect("json");
            std::fs::write(&fp, fps + "\n").map_err(io)?;
            writeln!(out, "wrote {} and {}", tp.display(), fp.display()).map_err(io)?;
            Ok(0)
        }
        Cmd::Mul { a, b, stable } => {
            let (t, _) = load_tables(&dir, n)?;
            let pr = Presentation::get(n);
            let e = pr.multiply(&operand(&t, a)?, &operand(&t, b)?);
            let e = if *stable { pr.stable_normal_form(&e) } else { e };
            print_element(out, &e, cli.format.unwrap_or(Format::Pretty)).map_err(io)?;
            Ok(0)
        }
        Cmd::Nf { a, stable } => {
            let (t, _) = load_tables(&dir, n)?;
            let pr = Presentation::get(n);
            let e = operand(&t, a)?;
            let e = if *stable { pr.stable_normal_form(&e) } else { pr.normal_form(&e) };
            print_element(out, &e, cli.format.unwrap_or(Format::Pretty)).map_err(io)?;
            Ok(0)
        }
        Cmd::Tensor { a, b } => {
            let (la, lb) = (label(n, a)?, label(n, b)?);
            let parts = Catalog::get(n)?.decompose_tensor(&la, &lb)?;
            let total: usize = parts.iter().map(|(l, k)| l.dim(n) * k).sum();
            let want = la.dim(n) * lb.dim(n);
            let terms: Vec<String> = parts.iter().map(|(l, k)| (l.dim(n) * k).to_string()).collect();
            let audit = format!("{want} = {}", terms.join(" + "));
            match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let summands: Vec<Value> = parts
                        .iter()
                        .map(|(l, k)| json!({"label": l.to_string(), "module": l.to_json(), "mult": k, "dim": l.dim(n)}))
                        .collect();
                    let v = json!({
                        "n": n,
                        "a": la.to_string(),
                        "b": lb.to_string(),
                        "summands": summands,
                        "dims_check": audit,
                        "dims_ok": total == want,
                    });
                    writeln!(out, "{v}").map_err(io)?;
                }
                Format::Pretty => {
                    let s: Vec<String> = parts
                        .iter()
                        .map(|(l, k)| if *k == 1 { l.to_string() } else { format!("{k} {l}") })
                        .collect();
                    writeln!(out, "{}", s.join(" ⊕ ")).map_err(io)?;
                    writeln!(out, "dims: {audit}").map_err(io)?;
                }
            }
            Ok(if total == want { 0 } else { EXIT_FAIL })
        }
        Cmd::Verify { suite, jobs } => {
            let reps = if *suite == Suite::Identities {
                vec![verify::lemma_sweep(60)]
            } else {
                let v = Verifier::new(require_tables(&dir, n)?)?;
                run_suite(&v, *suite, *jobs, cli.seed)
            };
            print_reports(out, &reps, cli.format.unwrap_or(Format::Json)).map_err(io)?;
            Ok(exit_code(&reps))
        }
        Cmd::Export => {
            let t = require_tables(&dir, n)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&t.to_json()).expect("json")).map_err(io)?;
            Ok(0)
        }
    }
}

/// Run with the given arguments, writing results to `out` and diagnostics
/// to stderr. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("gr: {}", f.msg);
            f.code
        }
    }
}
