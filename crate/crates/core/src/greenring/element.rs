//! Integer polynomials in `x, y, z_+, z_-, w_{m,eta}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cyclo::CycField;
use crate::modcat::EtaParam;

use super::RingError;

/// One `w_{m,eta}^e` factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WFactor {
    pub m: u32,
    pub eta: EtaParam,
    pub e: u32,
}

/// `x^x y^y z_+^zp z_-^zm Π w`. Field order fixes the display order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub w: Vec<WFactor>,
    pub zp: u32,
    pub zm: u32,
    pub y: u32,
    pub x: u32,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn xy(x: u32, y: u32) -> Monomial {
        Monomial { x, y, ..Default::default() }
    }

    pub fn w(m: u32, eta: EtaParam) -> Monomial {
        Monomial {
            w: vec![WFactor { m, eta, e: 1 }],
            ..Default::default()
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::default()
    }

    pub fn w_degree(&self) -> u32 {
        self.w.iter().map(|f| f.e).sum()
    }

    pub fn has_zw(&self) -> bool {
        self.zp > 0 || self.zm > 0 || !self.w.is_empty()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut w = self.w.clone();
        for f in &o.w {
            match w.iter_mut().find(|g| g.m == f.m && g.eta == f.eta) {
                Some(g) => g.e += f.e,
                None => w.push(f.clone()),
            }
        }
        w.sort();
        Monomial {
            w,
            zp: self.zp + o.zp,
            zm: self.zm + o.zm,
            y: self.y + o.y,
            x: self.x + o.x,
        }
    }

    /// Remove one `w_{m,eta}` factor.
    pub fn without_w(&self, m: u32, eta: &EtaParam) -> Monomial {
        let mut out = self.clone();
        if let Some(i) = out.w.iter().position(|f| f.m == m && f.eta == *eta) {
            out.w[i].e -= 1;
            if out.w[i].e == 0 {
                out.w.remove(i);
            }
        }
        out
    }

    /// Dimension of the module class under `x -> 1, y -> 2, z -> 2n-1, w_m -> mn`.
    pub fn dimev(&self, n: u32) -> BigInt {
        let mut d = BigInt::from(2u32).pow(self.y);
        d *= BigInt::from(2 * n - 1).pow(self.zp + self.zm);
        for f in &self.w {
            d *= BigInt::from(f.m * n).pow(f.e);
        }
        d
    }

    pub fn to_json(&self) -> Value {
        let z = match (self.zp, self.zm) {
            (0, 0) => Value::Null,
            (p, 0) => json!({"sign": "+", "e": p}),
            (0, m) => json!({"sign": "-", "e": m}),
            (p, m) => json!([{"sign": "+", "e": p}, {"sign": "-", "e": m}]),
        };
        let w: Vec<Value> = self
            .w
            .iter()
            .map(|f| json!({"m": f.m, "eta": f.eta.to_json(), "e": f.e}))
            .collect();
        json!({"x": self.x, "y": self.y, "z": z, "w": w})
    }

    pub fn from_json(field: &'static CycField, v: &Value) -> Result<Monomial, RingError> {
        let bad = |what: &str| RingError::Parse(format!("monomial: {what}"));
        let uint = |v: Option<&Value>| -> Result<u32, RingError> {
            match v {
                None | Some(Value::Null) => Ok(0),
                Some(x) => x.as_u64().map(|e| e as u32).ok_or_else(|| bad("exponent")),
            }
        };
        let mut m = Monomial {
            x: uint(v.get("x"))?,
            y: uint(v.get("y"))?,
            ..Default::default()
        };
        let mut zs: Vec<&Value> = Vec::new();
        match v.get("z") {
            None | Some(Value::Null) => {}
            Some(Value::Array(a)) => zs.extend(a.iter()),
            Some(o) => zs.push(o),
        }
        for z in zs {
            let e = uint(z.get("e"))?;
            match z.get("sign").and_then(Value::as_str) {
                Some("+") => m.zp += e,
                Some("-") => m.zm += e,
                _ => return Err(bad("z sign")),
            }
        }
        if let Some(ws) = v.get("w").and_then(Value::as_array) {
            for f in ws {
                let mm = uint(f.get("m"))?;
                if mm == 0 {
                    return Err(bad("w index must be >= 1"));
                }
                let eta = EtaParam::from_json(field, f.get("eta").unwrap_or(&Value::Null))
                    .map_err(|e| RingError::Parse(e.to_string()))?;
                let e = match f.get("e") {
                    None => 1,
                    x => uint(x)?,
                };
                for _ in 0..e {
                    m = m.mul(&Monomial::w(mm, eta.clone()));
                }
            }
        }
        Ok(m)
    }
}

fn pow_str(f: &mut fmt::Formatter<'_>, base: &str, e: u32, first: &mut bool) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{base}")
    } else {
        write!(f, "{base}^{e}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        pow_str(f, "x", self.x, &mut first)?;
        pow_str(f, "y", self.y, &mut first)?;
        pow_str(f, "z+", self.zp, &mut first)?;
        pow_str(f, "z-", self.zm, &mut first)?;
        for w in &self.w {
            pow_str(f, &format!("w_{{{},{}}}", w.m, w.eta), w.e, &mut first)?;
        }
        Ok(())
    }
}

/// A finite integer combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero() -> RingElement {
        RingElement::default()
    }

    pub fn one() -> RingElement {
        RingElement::monomial(Monomial::one(), BigInt::one())
    }

    pub fn int(c: i64) -> RingElement {
        RingElement::monomial(Monomial::one(), BigInt::from(c))
    }

    pub fn monomial(m: Monomial, c: BigInt) -> RingElement {
        let mut e = RingElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn from_mono(m: Monomial) -> RingElement {
        RingElement::monomial(m, BigInt::one())
    }

    pub fn xy(x: u32, y: u32) -> RingElement {
        RingElement::from_mono(Monomial::xy(x, y))
    }

    pub fn x() -> RingElement {
        RingElement::xy(1, 0)
    }

    pub fn y() -> RingElement {
        RingElement::xy(0, 1)
    }

    pub fn z_plus() -> RingElement {
        RingElement::from_mono(Monomial { zp: 1, ..Default::default() })
    }

    pub fn z_minus() -> RingElement {
        RingElement::from_mono(Monomial { zm: 1, ..Default::default() })
    }

    pub fn w(m: u32, eta: EtaParam) -> RingElement {
        RingElement::from_mono(Monomial::w(m, eta))
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, BigInt> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, o: &RingElement, s: &BigInt) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn add(&self, o: &RingElement) -> RingElement {
        let mut out = self.clone();
        out.add_scaled(o, &BigInt::one());
        out
    }

    pub fn sub(&self, o: &RingElement) -> RingElement {
        let mut out = self.clone();
        out.add_scaled(o, &-BigInt::one());
        out
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&-BigInt::one())
    }

    pub fn scale(&self, s: &BigInt) -> RingElement {
        if s.is_zero() {
            return RingElement::zero();
        }
        RingElement {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn scale_int(&self, s: i64) -> RingElement {
        self.scale(&BigInt::from(s))
    }

    /// Product without any reduction.
    pub fn mul(&self, o: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Monomial) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> RingElement {
        let mut out = RingElement::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact division by an integer, if every coefficient is divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<RingElement> {
        let mut out = RingElement::zero();
        for (m, c) in &self.terms {
            if !(c % k).is_zero() {
                return None;
            }
            out.add_term(m.clone(), c / k);
        }
        Some(out)
    }

    pub fn dimev(&self, n: u32) -> BigInt {
        self.terms.iter().map(|(m, c)| c * m.dimev(n)).sum()
    }

    pub fn is_w_free(&self) -> bool {
        self.terms.keys().all(|m| m.w.is_empty())
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut v = m.to_json();
                v["coeff"] = Value::String(c.to_string());
                v
            })
            .collect();
        json!({ "terms": terms })
    }

    pub fn from_json(field: &'static CycField, v: &Value) -> Result<RingElement, RingError> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| RingError::Parse("ring element needs a terms array".into()))?;
        let mut out = RingElement::zero();
        for t in terms {
            let m = Monomial::from_json(field, t)?;
            let c: BigInt = match t.get("coeff") {
                Some(Value::String(s)) => s.parse().map_err(|_| RingError::Parse(format!("coefficient {s:?}")))?,
                Some(Value::Number(x)) => x
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| RingError::Parse("integer coefficient expected".into()))?,
                _ => return Err(RingError::Parse("term without coeff".into())),
            };
            out.add_term(m, c);
        }
        Ok(out)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}
