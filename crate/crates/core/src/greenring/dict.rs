//! Classes of indecomposables as ring elements, and the per-n tables of
//! oracle-derived corrections.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::cyclo::CycField;
use crate::modcat::{Catalog, EtaParam, IndecLabel, Sign};

use super::element::{Monomial, RingElement};
use super::rewrite::{binom, c_half, simple_poly, Presentation};
use super::RingError;

pub const SCHEMA_VERSION: u64 = 1;

/// Band corrections only depend on whether the parameter is infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EtaShape {
    Finite,
    Inf,
}

impl EtaShape {
    pub fn of(eta: &EtaParam) -> EtaShape {
        if eta.is_inf() {
            EtaShape::Inf
        } else {
            EtaShape::Finite
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EtaShape::Finite => "finite",
            EtaShape::Inf => "inf",
        }
    }

    fn parse(s: &str) -> Result<EtaShape, RingError> {
        match s {
            "finite" => Ok(EtaShape::Finite),
            "inf" => Ok(EtaShape::Inf),
            _ => Err(RingError::Corrupt(format!("eta shape {s:?}"))),
        }
    }
}

/// Per-n classes the closed forms do not cover. Entries are stored at
/// `r = 0`; other twists multiply by `x^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedTables {
    pub n: u32,
    pub max_m: u32,
    /// `l -> [P(l,0)]`.
    pub proj_poly: BTreeMap<u32, RingElement>,
    /// `(sign, m, l) -> [V(l,0)] z^m - [Omega^(±m) V(l,0)]`.
    pub syz_corr: BTreeMap<(Sign, u32, u32), RingElement>,
    /// `(m, l, shape) -> [V(l,0)] w_m - [M_m(l,0,·)]`.
    pub band_corr: BTreeMap<(u32, u32, EtaShape), RingElement>,
}

/// `[P(l,0)]` when it is one of the stated closed forms: `l = 1`, `l` even,
/// or `l = n-1`.
pub fn proj_closed_form(n: u32, l: u32) -> Option<RingElement> {
    if !(l == 1 || l % 2 == 0 || l + 1 == n) || l >= n {
        return None;
    }
    let k = (n - l) as i64;
    let mut e = RingElement::zero();
    for j in 0..=k / 2 {
        let c = BigRational::new(BigInt::from(k), BigInt::from(k - j)) * BigRational::from(binom(k - j, j));
        debug_assert!(c.is_integer());
        let c = if j % 2 == 0 { c.to_integer() } else { -c.to_integer() };
        e.add_term(Monomial::xy(l + j as u32, (k - 2 * j) as u32), c);
    }
    let pr = Presentation::get(n);
    Some(pr.multiply(&e, pr.f_poly(1)))
}

/// The stated band correction `Σ_{i=c(l)}^{l-1} m [P(n+l-2i, i)]`.
pub fn band_corr_closed_form(n: u32, m: u32, l: u32) -> Option<RingElement> {
    let mut e = RingElement::zero();
    for i in c_half(l as i64)..l as i64 {
        let pl = n + l - 2 * i as u32;
        let p = if pl == n {
            Presentation::get(n).f_poly(1).clone()
        } else {
            proj_closed_form(n, pl)?
        };
        e = e.add(&p.mul(&RingElement::xy(i as u32, 0)).scale_int(m as i64));
    }
    Some(Presentation::get(n).normal_form(&e))
}

impl DerivedTables {
    pub fn empty(n: u32, max_m: u32) -> DerivedTables {
        DerivedTables {
            n,
            max_m,
            proj_poly: BTreeMap::new(),
            syz_corr: BTreeMap::new(),
            band_corr: BTreeMap::new(),
        }
    }

    fn x_pow(&self, r: u32) -> RingElement {
        RingElement::xy(r % self.n, 0)
    }

    fn proj0(&self, l: u32) -> Result<RingElement, RingError> {
        if let Some(c) = proj_closed_form(self.n, l) {
            return Ok(c);
        }
        self.proj_poly
            .get(&l)
            .cloned()
            .ok_or_else(|| RingError::MissingTableEntry(format!("P({l},0) at n={}", self.n)))
    }

    /// The class of an indecomposable, in normal form.
    pub fn class_of(&self, label: &IndecLabel) -> Result<RingElement, RingError> {
        let n = self.n;
        let pr = Presentation::get(n);
        let raw = match label {
            IndecLabel::Simple { l, r } => simple_poly(*l).mul(&self.x_pow(*r)),
            IndecLabel::Proj { l, r } => self.proj0(*l)?.mul(&self.x_pow(*r)),
            IndecLabel::Syz { sign, m, l, r } => {
                let corr = if *m == 1 && *l == 1 {
                    RingElement::zero()
                } else {
                    self.syz_corr.get(&(*sign, *m, *l)).cloned().ok_or_else(|| {
                        RingError::MissingTableEntry(format!("{label:?} at n={n} (max_m={})", self.max_m))
                    })?
                };
                let z = match sign {
                    Sign::Plus => RingElement::z_plus(),
                    Sign::Minus => RingElement::z_minus(),
                };
                simple_poly(*l).mul(&z.pow(*m)).sub(&corr).mul(&self.x_pow(*r))
            }
            IndecLabel::Band { s, l, r, eta } => {
                let base = eta.simple_unshift(*l);
                let corr = if *l == 1 {
                    RingElement::zero()
                } else {
                    match self.band_corr.get(&(*s, *l, EtaShape::of(eta))) {
                        Some(c) => c.clone(),
                        None => band_corr_closed_form(n, *s, *l)
                            .ok_or_else(|| RingError::MissingTableEntry(format!("{label:?} at n={n}")))?,
                    }
                };
                simple_poly(*l)
                    .mul(&RingElement::w(*s, base))
                    .sub(&corr)
                    .mul(&self.x_pow(*r))
            }
        };
        Ok(pr.normal_form(&raw))
    }

    /// Class of a direct sum.
    pub fn class_of_sum(&self, parts: &[(IndecLabel, usize)]) -> Result<RingElement, RingError> {
        let mut acc = RingElement::zero();
        for (l, k) in parts {
            acc.add_scaled(&self.class_of(l)?, &BigInt::from(*k));
        }
        Ok(acc)
    }

    fn body_json(&self) -> Value {
        let proj: Map<String, Value> = self.proj_poly.iter().map(|(l, e)| (l.to_string(), e.to_json())).collect();
        let syz: Vec<Value> = self
            .syz_corr
            .iter()
            .map(|((s, m, l), e)| json!({"sign": s.as_str(), "m": m, "l": l, "r": 0, "value": e.to_json()}))
            .collect();
        let band: Vec<Value> = self
            .band_corr
            .iter()
            .map(|((m, l, sh), e)| json!({"m": m, "l": l, "r": 0, "eta_shape": sh.as_str(), "value": e.to_json()}))
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "n": self.n,
            "max_m": self.max_m,
            "proj_poly": proj,
            "syz_corr": syz,
            "band_corr": band,
        })
    }

    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.body_json().to_string().as_bytes()))
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.body_json();
        v["checksum"] = Value::String(self.checksum());
        v
    }

    pub fn from_json(v: &Value) -> Result<DerivedTables, RingError> {
        let bad = |what: &str| RingError::Corrupt(format!("missing or malformed {what}"));
        let ver = v["schema_version"].as_u64().ok_or_else(|| bad("schema_version"))?;
        if ver != SCHEMA_VERSION {
            return Err(RingError::Corrupt(format!("schema version {ver}, expected {SCHEMA_VERSION}")));
        }
        let n = v["n"].as_u64().ok_or_else(|| bad("n"))? as u32;
        if n < 3 {
            return Err(bad("n"));
        }
        let field = CycField::get(n);
        let max_m = v["max_m"].as_u64().ok_or_else(|| bad("max_m"))? as u32;
        let mut t = DerivedTables::empty(n, max_m);
        for (k, e) in v["proj_poly"].as_object().ok_or_else(|| bad("proj_poly"))? {
            let l: u32 = k.parse().map_err(|_| bad("proj_poly key"))?;
            t.proj_poly.insert(l, RingElement::from_json(field, e)?);
        }
        let u = |e: &Value, k: &str| e[k].as_u64().map(|x| x as u32).ok_or_else(|| bad(k));
        for e in v["syz_corr"].as_array().ok_or_else(|| bad("syz_corr"))? {
            let s = Sign::parse(e["sign"].as_str().ok_or_else(|| bad("sign"))?).map_err(|_| bad("sign"))?;
            t.syz_corr.insert((s, u(e, "m")?, u(e, "l")?), RingElement::from_json(field, &e["value"])?);
        }
        for e in v["band_corr"].as_array().ok_or_else(|| bad("band_corr"))? {
            let sh = EtaShape::parse(e["eta_shape"].as_str().ok_or_else(|| bad("eta_shape"))?)?;
            t.band_corr.insert((u(e, "m")?, u(e, "l")?, sh), RingElement::from_json(field, &e["value"])?);
        }
        let want = v["checksum"].as_str().ok_or_else(|| bad("checksum"))?;
        if want != t.checksum() {
            return Err(RingError::Corrupt("checksum mismatch".into()));
        }
        Ok(t)
    }

    pub fn save(&self, path: &Path) -> Result<(), RingError> {
        let s = serde_json::to_string_pretty(&self.to_json()).expect("json");
        std::fs::write(path, s)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<DerivedTables, RingError> {
        let s = std::fs::read_to_string(path)?;
        let v: Value = serde_json::from_str(&s).map_err(|e| RingError::Corrupt(e.to_string()))?;
        DerivedTables::from_json(&v)
    }

    /// Dimension check on every stored entry.
    pub fn check_dims(&self) -> Result<(), RingError> {
        let n = self.n;
        let nb = BigInt::from(n);
        for (l, e) in &self.proj_poly {
            if e.dimev(n) != &nb * 2 {
                return Err(RingError::Derivation(format!("dim of P({l},0) entry")));
            }
        }
        for ((s, m, l), e) in &self.syz_corr {
            let lab = IndecLabel::syz(n, *s, *m, *l, 0)?;
            let want = BigInt::from(*l) * BigInt::from(2 * n - 1).pow(*m) - BigInt::from(lab.dim(n));
            if e.dimev(n) != want {
                return Err(RingError::Derivation(format!("dim of syzygy correction {lab:?}")));
            }
        }
        for ((m, l, sh), e) in &self.band_corr {
            let want = BigInt::from(*m) * &nb * BigInt::from(*l - 1);
            if e.dimev(n) != want {
                return Err(RingError::Derivation(format!("dim of band correction ({m},{l},{})", sh.as_str())));
            }
        }
        Ok(())
    }
}

/// Split a decomposition into projective part and the remaining summands.
fn split_projective(n: u32, parts: Vec<(IndecLabel, usize)>) -> (Vec<(IndecLabel, usize)>, Vec<(IndecLabel, usize)>) {
    parts.into_iter().partition(|(l, _)| l.is_projective(n))
}

fn expect_single(
    n: u32,
    parts: Vec<(IndecLabel, usize)>,
    want: &IndecLabel,
    ctx: &str,
) -> Result<Vec<(IndecLabel, usize)>, RingError> {
    let (proj, rest) = split_projective(n, parts);
    if rest.len() != 1 || rest[0].1 != 1 || &rest[0].0 != want {
        return Err(RingError::Derivation(format!("{ctx}: expected {want:?} plus projectives, got {rest:?}")));
    }
    Ok(proj)
}

/// Build the tables by decomposing tensor products in the module catalog.
pub fn derive_tables(n: u32, max_m: u32) -> Result<DerivedTables, RingError> {
    let cat = Catalog::get(n)?;
    let field = cat.field();
    let pr = Presentation::get(n);
    let mut t = DerivedTables::empty(n, max_m);

    // Projectives: y [P(l-1,0)] = [V(2,0) ⊗ P(l-1,0)], one unknown at a time.
    let v2 = IndecLabel::simple(n, 2, 0)?;
    for l in 1..n {
        if let Some(c) = proj_closed_form(n, l) {
            t.proj_poly.insert(l, c);
            continue;
        }
        let parts = cat.decompose_tensor(&v2, &IndecLabel::proj(n, l - 1, 0)?)?;
        let mut rhs = pr.multiply(&RingElement::y(), &t.proj0(l - 1)?);
        let mut unknown = None;
        for (lab, k) in parts {
            match &lab {
                IndecLabel::Proj { l: pl, r } if *pl == l => {
                    if unknown.replace((*r, k)).is_some() {
                        return Err(RingError::Derivation(format!("P({l},·) occurs twice")));
                    }
                }
                _ => rhs = rhs.sub(&t.class_of(&lab)?.scale_int(k as i64)),
            }
        }
        let (r, k) = unknown.ok_or_else(|| RingError::Derivation(format!("no P({l},·) in V(2,0)⊗P({},0)", l - 1)))?;
        let cls = rhs
            .div_exact(&BigInt::from(k))
            .ok_or_else(|| RingError::Derivation(format!("P({l},0) class is not divisible by {k}")))?;
        t.proj_poly.insert(l, pr.multiply(&cls, &pr.x_pow(-(r as i64))));
    }

    // Syzygies of V(1,0) by iterated products with Omega^(±1) V(1,0), then
    // the other tops by V(l,0) ⊗ Omega^(±m) V(1,0).
    for sign in [Sign::Plus, Sign::Minus] {
        let z = match sign {
            Sign::Plus => RingElement::z_plus(),
            Sign::Minus => RingElement::z_minus(),
        };
        let om1 = IndecLabel::syz(n, sign, 1, 1, 0)?;
        for m in 1..=max_m {
            let here = IndecLabel::syz(n, sign, m, 1, 0)?;
            if m >= 2 {
                let prev = IndecLabel::syz(n, sign, m - 1, 1, 0)?;
                let parts = cat.decompose_tensor(&om1, &prev)?;
                let q = expect_single(n, parts, &here, "syzygy recursion")?;
                let prev_corr = t.syz_corr[&(sign, m - 1, 1)].clone();
                let corr = pr.normal_form(&z.mul(&prev_corr).add(&t.class_of_sum(&q)?));
                t.syz_corr.insert((sign, m, 1), corr);
            } else {
                t.syz_corr.insert((sign, 1, 1), RingElement::zero());
            }
            for l in 2..n {
                let parts = cat.decompose_tensor(&IndecLabel::simple(n, l, 0)?, &here)?;
                let want = IndecLabel::syz(n, sign, m, l, 0)?;
                let q = expect_single(n, parts, &want, "syzygy of V(l,0)")?;
                let base = t.syz_corr[&(sign, m, 1)].clone();
                let corr = pr.normal_form(&simple_poly(l).mul(&base).add(&t.class_of_sum(&q)?));
                t.syz_corr.insert((sign, m, l), corr);
            }
        }
    }

    // Bands: V(l,0) ⊗ M_m(1,0,eta) for one finite and the infinite parameter.
    for (shape, eta) in [(EtaShape::Finite, EtaParam::int(field, 1)), (EtaShape::Inf, EtaParam::Inf)] {
        for m in 1..=max_m {
            let b = IndecLabel::band(n, m, 1, 0, eta.clone())?;
            for l in 2..n {
                let parts = cat.decompose_tensor(&IndecLabel::simple(n, l, 0)?, &b)?;
                let want = IndecLabel::band(n, m, l, 0, eta.simple_shift(l))?;
                let q = expect_single(n, parts, &want, "band product")?;
                t.band_corr.insert((m, l, shape), t.class_of_sum(&q)?);
            }
        }
    }
    t.check_dims()?;
    Ok(t)
}

/// Entries the closed forms also predict, compared with the stored values.
pub fn closed_form_agreement(t: &DerivedTables) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for (l, e) in &t.proj_poly {
        if let Some(c) = proj_closed_form(t.n, *l) {
            out.push((format!("P({l},0)"), &c == e));
        }
    }
    for ((m, l, sh), e) in &t.band_corr {
        if let Some(c) = band_corr_closed_form(t.n, *m, *l) {
            out.push((format!("band({m},{l},{})", sh.as_str()), &c == e));
        }
    }
    out
}
