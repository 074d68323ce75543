//! Symbolic names of indecomposable modules.

use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use crate::cyclo::{CycField, CycNum, Rat};

use super::ModError;

/// A band parameter: a field element or the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum EtaParam {
    Val(CycNum),
    Inf,
}

impl Ord for EtaParam {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (EtaParam::Val(a), EtaParam::Val(b)) => a.cmp(b),
            (EtaParam::Val(_), EtaParam::Inf) => Ordering::Less,
            (EtaParam::Inf, EtaParam::Val(_)) => Ordering::Greater,
            (EtaParam::Inf, EtaParam::Inf) => Ordering::Equal,
        }
    }
}

impl PartialOrd for EtaParam {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for EtaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EtaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaParam::Inf => write!(f, "inf"),
            EtaParam::Val(v) => write!(f, "{v}"),
        }
    }
}

impl EtaParam {
    pub fn int(field: &'static CycField, v: i64) -> EtaParam {
        EtaParam::Val(field.int(v))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, EtaParam::Inf)
    }

    /// Multiply by a nonzero scalar; infinity is fixed.
    pub fn scale(&self, s: &CycNum) -> EtaParam {
        debug_assert!(!s.is_zero());
        match self {
            EtaParam::Inf => EtaParam::Inf,
            EtaParam::Val(v) => EtaParam::Val(v * s),
        }
    }

    /// `eta -> -eta q^l`, the parameter shift under the syzygy functor.
    pub fn omega_shift(&self, l: u32) -> EtaParam {
        match self {
            EtaParam::Inf => EtaParam::Inf,
            EtaParam::Val(v) => EtaParam::Val(-(v * &v.field().q_pow(l as i64))),
        }
    }

    /// `eta -> eta q^(1-l) (l)_q`, the parameter of `V(l,r) ⊗ M_m(1,0,eta)`.
    pub fn simple_shift(&self, l: u32) -> EtaParam {
        match self {
            EtaParam::Inf => EtaParam::Inf,
            EtaParam::Val(v) => {
                let f = v.field();
                EtaParam::Val(&(v * &f.q_pow(1 - l as i64)) * &f.q_int(l))
            }
        }
    }

    /// Inverse of [`EtaParam::simple_shift`].
    pub fn simple_unshift(&self, l: u32) -> EtaParam {
        match self {
            EtaParam::Inf => EtaParam::Inf,
            EtaParam::Val(v) => {
                let f = v.field();
                let s = f.q_int(l).inv().expect("(l)_q is nonzero for 0 < l < n");
                EtaParam::Val(&(v * &f.q_pow(l as i64 - 1)) * &s)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            EtaParam::Inf => json!({"inf": true}),
            EtaParam::Val(v) => v.to_json(),
        }
    }

    pub fn from_json(field: &'static CycField, v: &Value) -> Result<EtaParam, ModError> {
        if v.get("inf").and_then(Value::as_bool) == Some(true) {
            return Ok(EtaParam::Inf);
        }
        Ok(EtaParam::Val(field.from_json(v)?))
    }

    /// `inf`, a polynomial in `q` with rational coefficients (`-q`,
    /// `1/2 - 3*q^2`), or a cyclotomic JSON object.
    pub fn parse(field: &'static CycField, s: &str) -> Result<EtaParam, ModError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(EtaParam::Inf);
        }
        if s.starts_with('{') {
            let v: Value = serde_json::from_str(s).map_err(|e| ModError::Parse(e.to_string()))?;
            return EtaParam::from_json(field, &v);
        }
        parse_qpoly(field, s)
            .map(EtaParam::Val)
            .ok_or_else(|| ModError::Parse(format!("bad eta value {s:?}")))
    }
}

fn parse_qpoly(field: &'static CycField, s: &str) -> Option<CycNum> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in t.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !t[..i].ends_with('^') {
            terms.push(&t[start..i]);
            start = i;
        }
    }
    terms.push(&t[start..]);
    let mut acc = field.zero();
    for term in terms {
        let (neg, body) = match term.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, k) = match body.split_once('q') {
            None => (body, 0u64),
            Some((c, e)) => {
                let k = match e {
                    "" => 1,
                    _ => e.strip_prefix('^')?.parse().ok()?,
                };
                (c.strip_suffix('*').unwrap_or(c), k)
            }
        };
        let r: Rat = match coef {
            "" if k > 0 => Rat::int(1),
            _ => coef.parse().ok()?,
        };
        let mut v = field.q().pow(k).scale(&r);
        if neg {
            v = -v;
        }
        acc += &v;
    }
    Some(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Result<Sign, ModError> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(ModError::Parse(format!("bad sign {s:?}"))),
        }
    }
}

/// An indecomposable module class. `r` is always stored reduced mod `n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndecLabel {
    Simple { l: u32, r: u32 },
    Proj { l: u32, r: u32 },
    Syz { sign: Sign, m: u32, l: u32, r: u32 },
    Band { s: u32, l: u32, r: u32, eta: EtaParam },
}

fn red(n: u32, r: i64) -> u32 {
    r.rem_euclid(n as i64) as u32
}

impl IndecLabel {
    pub fn simple(n: u32, l: u32, r: i64) -> Result<IndecLabel, ModError> {
        if !(1..=n).contains(&l) {
            return Err(ModError::Range(format!("V({l},{r}): need 1 <= l <= {n}")));
        }
        Ok(IndecLabel::Simple { l, r: red(n, r) })
    }

    /// `P(n,r)` is normalised to the simple `V(n,r)`.
    pub fn proj(n: u32, l: u32, r: i64) -> Result<IndecLabel, ModError> {
        if l == n {
            return IndecLabel::simple(n, l, r);
        }
        if !(1..n).contains(&l) {
            return Err(ModError::Range(format!("P({l},{r}): need 1 <= l <= {n}")));
        }
        Ok(IndecLabel::Proj { l, r: red(n, r) })
    }

    /// `Omega^(±m) V(l,r)`; `m = 0` is normalised to the simple.
    pub fn syz(n: u32, sign: Sign, m: u32, l: u32, r: i64) -> Result<IndecLabel, ModError> {
        if m == 0 {
            return IndecLabel::simple(n, l, r);
        }
        if !(1..n).contains(&l) {
            return Err(ModError::Range(format!("syzygy of V({l},{r}): need 1 <= l < {n}")));
        }
        Ok(IndecLabel::Syz { sign, m, l, r: red(n, r) })
    }

    pub fn band(n: u32, s: u32, l: u32, r: i64, eta: EtaParam) -> Result<IndecLabel, ModError> {
        if s == 0 || !(1..n).contains(&l) {
            return Err(ModError::Range(format!("M_{s}({l},{r}): need s >= 1, 1 <= l < {n}")));
        }
        Ok(IndecLabel::Band { s, l, r: red(n, r), eta })
    }

    pub fn l(&self) -> u32 {
        match self {
            IndecLabel::Simple { l, .. }
            | IndecLabel::Proj { l, .. }
            | IndecLabel::Syz { l, .. }
            | IndecLabel::Band { l, .. } => *l,
        }
    }

    pub fn r(&self) -> u32 {
        match self {
            IndecLabel::Simple { r, .. }
            | IndecLabel::Proj { r, .. }
            | IndecLabel::Syz { r, .. }
            | IndecLabel::Band { r, .. } => *r,
        }
    }

    pub fn eta(&self) -> Option<&EtaParam> {
        match self {
            IndecLabel::Band { eta, .. } => Some(eta),
            _ => None,
        }
    }

    pub fn dim(&self, n: u32) -> usize {
        (match self {
            IndecLabel::Simple { l, .. } => *l,
            IndecLabel::Proj { .. } => 2 * n,
            IndecLabel::Syz { m, l, .. } => {
                if m % 2 == 0 {
                    m * n + l
                } else {
                    m * n + n - l
                }
            }
            IndecLabel::Band { s, .. } => s * n,
        }) as usize
    }

    /// Projective (including the simple projectives `V(n,r)`).
    pub fn is_projective(&self, n: u32) -> bool {
        match self {
            IndecLabel::Proj { .. } => true,
            IndecLabel::Simple { l, .. } => *l == n,
            _ => false,
        }
    }

    /// Same label with `r` shifted by `k`.
    pub fn twisted(&self, n: u32, k: i64) -> IndecLabel {
        let mut out = self.clone();
        match &mut out {
            IndecLabel::Simple { r, .. }
            | IndecLabel::Proj { r, .. }
            | IndecLabel::Syz { r, .. }
            | IndecLabel::Band { r, .. } => *r = red(n, *r as i64 + k),
        }
        out
    }

    pub fn kind(&self) -> &'static str {
        match self {
            IndecLabel::Simple { .. } => "simple",
            IndecLabel::Proj { .. } => "proj",
            IndecLabel::Syz { .. } => "syz",
            IndecLabel::Band { .. } => "band",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            IndecLabel::Simple { l, r } | IndecLabel::Proj { l, r } => {
                json!({"kind": self.kind(), "l": l, "r": r})
            }
            IndecLabel::Syz { sign, m, l, r } => {
                json!({"kind": "syz", "l": l, "r": r, "m": m, "sign": sign.as_str()})
            }
            IndecLabel::Band { s, l, r, eta } => {
                json!({"kind": "band", "l": l, "r": r, "s": s, "eta": eta.to_json()})
            }
        }
    }

    pub fn from_json(field: &'static CycField, v: &Value) -> Result<IndecLabel, ModError> {
        let n = field.n();
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| ModError::Parse("label without kind".into()))?;
        let int = |k: &str| -> Result<i64, ModError> {
            v.get(k)
                .and_then(Value::as_i64)
                .ok_or_else(|| ModError::Parse(format!("label field {k:?} missing")))
        };
        let uint = |k: &str| -> Result<u32, ModError> {
            let x = int(k)?;
            u32::try_from(x).map_err(|_| ModError::Parse(format!("label field {k:?} negative")))
        };
        match kind {
            "simple" => IndecLabel::simple(n, uint("l")?, int("r")?),
            "proj" => IndecLabel::proj(n, uint("l")?, int("r")?),
            "syz" => {
                let sign = Sign::parse(v.get("sign").and_then(Value::as_str).unwrap_or(""))?;
                IndecLabel::syz(n, sign, uint("m")?, uint("l")?, int("r")?)
            }
            "band" => {
                let eta = EtaParam::from_json(field, v.get("eta").unwrap_or(&Value::Null))?;
                IndecLabel::band(n, uint("s")?, uint("l")?, int("r")?, eta)
            }
            other => Err(ModError::Parse(format!("unknown label kind {other:?}"))),
        }
    }

    /// Parse `V(l,r)`, `P(l,r)`, `Omega^m V(l,r)`, `Omega^-m V(l,r)` or `M_s(l,r;eta=..)`.
    pub fn parse(field: &'static CycField, text: &str) -> Result<IndecLabel, ModError> {
        let n = field.n();
        let t: String = text.trim().to_string();
        let bad = || ModError::Parse(format!("cannot parse label {text:?}"));
        let args = |s: &str| -> Result<(u32, i64), ModError> {
            let inner = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            let l: u32 = a.trim().parse().map_err(|_| bad())?;
            let r: i64 = b.trim().parse().map_err(|_| bad())?;
            Ok((l, r))
        };
        if let Some(rest) = t.strip_prefix("V") {
            let (l, r) = args(rest)?;
            return IndecLabel::simple(n, l, r);
        }
        if let Some(rest) = t.strip_prefix("P") {
            let (l, r) = args(rest)?;
            return IndecLabel::proj(n, l, r);
        }
        if let Some(rest) = t.strip_prefix("Omega^") {
            let (exp, tail) = rest.split_once('V').ok_or_else(bad)?;
            let exp = exp.trim();
            let (sign, m) = match exp.strip_prefix('-') {
                Some(m) => (Sign::Minus, m),
                None => (Sign::Plus, exp.strip_prefix('+').unwrap_or(exp)),
            };
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            let (l, r) = args(tail)?;
            return IndecLabel::syz(n, sign, m, l, r);
        }
        if let Some(rest) = t.strip_prefix("M_") {
            let (s, tail) = rest.split_once('(').ok_or_else(bad)?;
            let s: u32 = s.trim().parse().map_err(|_| bad())?;
            let inner = tail.trim_end().strip_suffix(')').ok_or_else(bad)?;
            let (lr, eta) = inner.split_once(';').ok_or_else(bad)?;
            let (a, b) = lr.split_once(',').ok_or_else(bad)?;
            let l: u32 = a.trim().parse().map_err(|_| bad())?;
            let r: i64 = b.trim().parse().map_err(|_| bad())?;
            let eta = eta.trim();
            let eta = match eta.strip_prefix("eta") {
                Some(t) => t.trim_start().strip_prefix('=').ok_or_else(bad)?,
                None => eta,
            };
            let eta = EtaParam::parse(field, eta)?;
            return IndecLabel::band(n, s, l, r, eta);
        }
        Err(bad())
    }
}

impl fmt::Display for IndecLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndecLabel::Simple { l, r } => write!(f, "V({l},{r})"),
            IndecLabel::Proj { l, r } => write!(f, "P({l},{r})"),
            IndecLabel::Syz { sign, m, l, r } => match sign {
                Sign::Plus => write!(f, "Omega^{m} V({l},{r})"),
                Sign::Minus => write!(f, "Omega^-{m} V({l},{r})"),
            },
            IndecLabel::Band { s, l, r, eta } => write!(f, "M_{s}({l},{r};eta={eta})"),
        }
    }
}

impl fmt::Debug for IndecLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthand_round_trip() {
        let f = CycField::get(3);
        for s in [
            "V(2,1)",
            "P(1,0)",
            "Omega^2 V(1,0)",
            "Omega^-1 V(2,2)",
            "M_2(1,0;eta=1)",
            "M_1(2,1;eta=inf)",
            "M_1(1,0;eta=-3/2)",
        ] {
            let l = IndecLabel::parse(f, s).unwrap();
            assert_eq!(l.to_string(), s);
            assert_eq!(IndecLabel::from_json(f, &l.to_json()).unwrap(), l);
        }
        let cyc = EtaParam::Val(-f.q());
        let l = IndecLabel::band(3, 1, 2, 1, cyc).unwrap();
        assert_eq!(IndecLabel::parse(f, &l.to_string()).unwrap(), l);
        assert_eq!(l.to_string(), "M_1(2,1;eta=-q)");
        assert_eq!(IndecLabel::parse(f, "M_1(2,1;-q)").unwrap(), l);
    }

    #[test]
    fn eta_polynomials() {
        let f = CycField::get(4);
        let q = f.q();
        let want = q.scale(&Rat::new(3, 2)) - f.one();
        for s in ["-1 + 3/2*q", "3/2 q - 1", " -1+3/2*q^1 ", "-1 + 3/2*q^5"] {
            assert_eq!(EtaParam::parse(f, s).unwrap(), EtaParam::Val(want.clone()), "{s}");
        }
        assert_eq!(EtaParam::parse(f, &want.to_string()).unwrap(), EtaParam::Val(want));
        for s in ["", "q^", "2*", "q^x", "1/0", "+"] {
            assert!(EtaParam::parse(f, s).is_err(), "{s}");
        }
    }

    #[test]
    fn normalisations_and_ranges() {
        let f = CycField::get(3);
        assert_eq!(IndecLabel::parse(f, "P(3,4)").unwrap(), IndecLabel::Simple { l: 3, r: 1 });
        assert_eq!(IndecLabel::parse(f, "Omega^0V(1,0)").unwrap(), IndecLabel::Simple { l: 1, r: 0 });
        assert!(IndecLabel::parse(f, "V(4,0)").is_err());
        assert!(IndecLabel::parse(f, "M_1(3,0;eta=1)").is_err());
        assert!(IndecLabel::parse(f, "Q(1,0)").is_err());
    }

    #[test]
    fn eta_shifts() {
        let f = CycField::get(3);
        let e = EtaParam::int(f, 1);
        assert_eq!(e.omega_shift(1), EtaParam::Val(-f.q()));
        assert_eq!(e.omega_shift(1).omega_shift(2), e);
        assert_eq!(EtaParam::Inf.omega_shift(2), EtaParam::Inf);
        assert_eq!(e.simple_shift(2).simple_unshift(2), e);
    }
}
