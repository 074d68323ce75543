//! Python bindings: ring elements, the normal form, the dictionary and the
//! tensor-product oracle.

use std::path::PathBuf;

use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use greenring::cyclo::CycField;
use greenring::greenring::{derive_tables, lemma32_check, parse_element, DerivedTables, Presentation, RingElement, RingError};
use greenring::modcat::{Catalog, IndecLabel, ModError};
use greenring::verify::{self, sort_reports, CheckReport, Verifier};

create_exception!(greenring, GreenRingError, PyException);
create_exception!(greenring, ParseError, GreenRingError);
create_exception!(greenring, MissingTableEntry, GreenRingError);
create_exception!(greenring, OracleError, GreenRingError);

fn ring_err(e: RingError) -> PyErr {
    match e {
        RingError::Parse(m) => ParseError::new_err(m),
        RingError::MissingTableEntry(m) => MissingTableEntry::new_err(m),
        RingError::Oracle(m) => OracleError::new_err(m.to_string()),
        other => GreenRingError::new_err(other.to_string()),
    }
}

fn mod_err(e: ModError) -> PyErr {
    match e {
        ModError::Range(m) => PyValueError::new_err(m),
        other => OracleError::new_err(other.to_string()),
    }
}

/// An element of the Green ring, kept as the raw polynomial it was built from.
#[pyclass(module = "greenring", frozen, from_py_object)]
#[derive(Clone)]
struct Element {
    n: u32,
    inner: RingElement,
}

#[derive(FromPyObject)]
enum Operand {
    Elem(Element),
    Text(String),
    Int(i64),
}

#[pymethods]
impl Element {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Element(n={}, {:?})", self.n, self.inner.to_string())
    }

    fn __eq__(&self, other: &Element) -> bool {
        self.n == other.n && self.inner == other.inner
    }

    fn __add__(&self, other: &Element) -> PyResult<Element> {
        self.same(other)?;
        Ok(self.with(self.inner.add(&other.inner)))
    }

    fn __sub__(&self, other: &Element) -> PyResult<Element> {
        self.same(other)?;
        Ok(self.with(self.inner.sub(&other.inner)))
    }

    fn __neg__(&self) -> Element {
        self.with(self.inner.neg())
    }

    /// Product followed by the normal form.
    fn __mul__(&self, other: &Element) -> PyResult<Element> {
        self.same(other)?;
        Ok(self.with(Presentation::get(self.n).multiply(&self.inner, &other.inner)))
    }

    #[getter]
    fn n(&self) -> u32 {
        self.n
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_normal(&self) -> bool {
        Presentation::get(self.n).is_normal_element(&self.inner)
    }

    /// Dimension of the virtual module this element represents.
    fn dim(&self) -> BigInt {
        self.inner.dimev(self.n)
    }

    /// `(monomial, coefficient)` pairs in display order.
    fn terms(&self) -> Vec<(String, BigInt)> {
        self.inner.terms().iter().map(|(m, c)| (m.to_string(), c.clone())).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }
}

impl Element {
    fn with(&self, inner: RingElement) -> Element {
        Element { n: self.n, inner }
    }

    fn same(&self, other: &Element) -> PyResult<()> {
        if self.n != other.n {
            return Err(PyValueError::new_err(format!("elements live in different rings (n={} and n={})", self.n, other.n)));
        }
        Ok(())
    }
}

/// The Green ring for one `n`, together with its derived dictionary tables.
#[pyclass(module = "greenring")]
struct GreenRing {
    n: u32,
    tables: DerivedTables,
}

#[pymethods]
impl GreenRing {
    /// Tables are loaded from `tables` when given, derived when `derive` is
    /// set, and left empty otherwise (closed-form classes still work).
    #[new]
    #[pyo3(signature = (n, tables=None, derive=false, max_m=2))]
    fn new(py: Python<'_>, n: u32, tables: Option<PathBuf>, derive: bool, max_m: u32) -> PyResult<GreenRing> {
        if !(3..=5).contains(&n) {
            return Err(PyValueError::new_err("n must be 3, 4 or 5"));
        }
        let tables = match tables {
            Some(p) => DerivedTables::load(&p).map_err(ring_err)?,
            None if derive => py.detach(|| derive_tables(n, max_m)).map_err(ring_err)?,
            None => DerivedTables::empty(n, 0),
        };
        if tables.n != n {
            return Err(PyValueError::new_err(format!("tables are for n={}, not n={n}", tables.n)));
        }
        Ok(GreenRing { n, tables })
    }

    #[getter]
    fn n(&self) -> u32 {
        self.n
    }

    #[getter]
    fn max_m(&self) -> u32 {
        self.tables.max_m
    }

    fn save_tables(&self, path: PathBuf) -> PyResult<()> {
        self.tables.save(&path).map_err(ring_err)
    }

    fn tables_checksum(&self) -> String {
        self.tables.checksum()
    }

    /// Parse without reducing. Bracketed labels become their classes.
    fn parse(&self, text: &str) -> PyResult<Element> {
        let f = CycField::get(self.n);
        let e = parse_element(f, text, |l| self.tables.class_of(l)).map_err(ring_err)?;
        Ok(self.elem(e))
    }

    fn normal_form(&self, a: Operand) -> PyResult<Element> {
        let e = self.operand(a)?;
        Ok(self.elem(Presentation::get(self.n).normal_form(&e)))
    }

    fn stable_normal_form(&self, a: Operand) -> PyResult<Element> {
        let e = self.operand(a)?;
        Ok(self.elem(Presentation::get(self.n).stable_normal_form(&e)))
    }

    fn multiply(&self, a: Operand, b: Operand) -> PyResult<Element> {
        let (a, b) = (self.operand(a)?, self.operand(b)?);
        Ok(self.elem(Presentation::get(self.n).multiply(&a, &b)))
    }

    /// Normal-form class of an indecomposable, e.g. `"M_1(2,0;-q)"`.
    fn class_of(&self, label: &str) -> PyResult<Element> {
        let l = self.label(label)?;
        Ok(self.elem(self.tables.class_of(&l).map_err(ring_err)?))
    }

    /// The polynomial `f_k` in `x` and `y`.
    fn f_poly(&self, k: usize) -> PyResult<Element> {
        if !(1..=4).contains(&k) {
            return Err(PyValueError::new_err("k must be between 1 and 4"));
        }
        Ok(self.elem(Presentation::get(self.n).f_poly(k).clone()))
    }

    /// Decompose `a ⊗ b` on the module side: `[(label, multiplicity)]`.
    fn tensor(&self, py: Python<'_>, a: &str, b: &str) -> PyResult<Vec<(String, usize)>> {
        let (a, b) = (self.label(a)?, self.label(b)?);
        let cat = py.detach(|| Catalog::get(self.n)).map_err(mod_err)?;
        let parts = py.detach(|| cat.decompose_tensor(&a, &b)).map_err(mod_err)?;
        Ok(parts.into_iter().map(|(l, k)| (l.to_string(), k)).collect())
    }

    /// Run a verification suite; returns the reports as dicts.
    #[pyo3(signature = (suite="all", seed=0))]
    fn verify<'py>(&self, py: Python<'py>, suite: &str, seed: u64) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let names = ["identities", "relations", "crosscheck", "basis", "omega", "robustness", "stable", "all"];
        if !names.contains(&suite) {
            return Err(PyValueError::new_err(format!("unknown suite {suite:?}")));
        }
        let tables = self.tables.clone();
        let reps = py.detach(|| run_suite(tables, suite, seed)).map_err(ring_err)?;
        let json = py.import("json")?;
        reps.iter().map(|r| json.call_method1("loads", (r.to_json().to_string(),))).collect()
    }
}

impl GreenRing {
    fn elem(&self, inner: RingElement) -> Element {
        Element { n: self.n, inner }
    }

    fn label(&self, text: &str) -> PyResult<IndecLabel> {
        IndecLabel::parse(CycField::get(self.n), text).map_err(|e| ParseError::new_err(e.to_string()))
    }

    fn operand(&self, a: Operand) -> PyResult<RingElement> {
        match a {
            Operand::Elem(e) if e.n == self.n => Ok(e.inner),
            Operand::Elem(e) => Err(PyValueError::new_err(format!("element is for n={}", e.n))),
            Operand::Text(t) => Ok(self.parse(&t)?.inner),
            Operand::Int(k) => Ok(RingElement::int(k)),
        }
    }
}

fn run_suite(tables: DerivedTables, suite: &str, seed: u64) -> Result<Vec<CheckReport>, RingError> {
    let on = |s: &str| suite == "all" || suite == s;
    let mut reps = Vec::new();
    if on("identities") {
        reps.push(verify::lemma_sweep(60));
    }
    let v = Verifier::new(tables)?;
    if on("relations") {
        reps.extend(v.all_relations(&[1, 2]));
    }
    if on("crosscheck") {
        reps.extend(v.crosscheck_sweep(2, 2, 1));
    }
    if on("basis") {
        reps.extend(v.verify_basis(3.min(v.tables.max_m)));
    }
    if on("omega") {
        reps.extend(v.verify_omega_band(2, 1));
    }
    if on("robustness") {
        reps.push(v.robustness(1000, seed));
    }
    if on("stable") {
        reps.extend(v.stable_checks());
    }
    sort_reports(&mut reps);
    Ok(reps)
}

/// Whether the alternating binomial identity holds at `(m, l, s)`.
#[pyfunction]
fn binomial_identity(m: i64, l: i64, s: i64) -> bool {
    lemma32_check(m, l, s)
}

#[pymodule]
#[pyo3(name = "greenring")]
fn py_greenring(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<Element>()?;
    m.add_class::<GreenRing>()?;
    m.add_function(wrap_pyfunction!(binomial_identity, m)?)?;
    m.add("GreenRingError", py.get_type::<GreenRingError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("MissingTableEntry", py.get_type::<MissingTableEntry>())?;
    m.add("OracleError", py.get_type::<OracleError>())?;
    Ok(())
}
