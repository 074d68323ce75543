//! Exact arithmetic in the cyclotomic field `Q(q) = Q[T]/(Phi_n(T))`.
//!
//! Every scalar that appears in a module action lives here. Elements are
//! stored as coefficient vectors of length `phi(n)` in the power basis
//! `1, q, ..., q^(phi(n)-1)`.

mod rat;

pub use rat::{ParseRatError, Rat};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use serde_json::{json, Value};
use smallvec::SmallVec;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: Q(zeta_{0}) vs Q(zeta_{1})")]
    FieldMismatch(u32, u32),
    #[error("malformed cyclotomic number: {0}")]
    Malformed(String),
}

/// The field `Q(q)` for a primitive `n`-th root of unity `q`.
pub struct CycField {
    n: u32,
    phi: usize,
    /// Integer coefficients of `Phi_n`, lowest degree first, monic.
    minpoly: Vec<i64>,
    /// `T^k mod Phi_n` for `k < 2*phi - 1`.
    reduce: Vec<Vec<i64>>,
    /// `q^k` for `0 <= k < n`.
    powers: Vec<Vec<i64>>,
}

impl PartialEq for CycField {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n
    }
}

impl Eq for CycField {}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

/// Exact division of integer polynomials by a monic divisor.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(*den.last().unwrap(), 1);
    let qlen = rem.len() - dd;
    let mut quo = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        quo[k] = c;
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quo
}

/// `Phi_n` by iterated exact division of `T^n - 1` by `Phi_d`, `d | n`, `d < n`.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut cache: HashMap<u32, Vec<i64>> = HashMap::new();
    fn go(n: u32, cache: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
        if let Some(p) = cache.get(&n) {
            return p.clone();
        }
        let mut p = vec![0i64; n as usize + 1];
        p[0] = -1;
        p[n as usize] = 1;
        for d in 1..n {
            if n % d == 0 {
                let pd = go(d, cache);
                p = poly_div_exact(&p, &pd);
            }
        }
        cache.insert(n, p.clone());
        p
    }
    go(n, &mut cache)
}

impl CycField {
    fn build(n: u32) -> CycField {
        assert!(n >= 1, "root of unity order must be positive");
        let minpoly = cyclotomic_poly(n);
        let phi = minpoly.len() - 1;
        let span = (2 * phi).max(n as usize + 1);
        let mut reduce = Vec::with_capacity(span);
        for k in 0..span {
            let mut v = vec![0i64; phi];
            if k < phi {
                v[k] = 1;
            } else {
                // T^k = T * T^(k-1); T^phi = -sum minpoly[j] T^j.
                let prev: &Vec<i64> = &reduce[k - 1];
                let top = prev[phi - 1];
                for j in (1..phi).rev() {
                    v[j] = prev[j - 1];
                }
                v[0] = 0;
                for j in 0..phi {
                    v[j] -= top * minpoly[j];
                }
            }
            reduce.push(v);
        }
        let powers = (0..n as usize).map(|k| reduce[k].clone()).collect();
        CycField {
            n,
            phi,
            minpoly,
            reduce,
            powers,
        }
    }

    /// Shared handle for `Q(zeta_n)`; fields are created once and never freed.
    pub fn get(n: u32) -> &'static CycField {
        static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static CycField>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = reg.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| Box::leak(Box::new(CycField::build(n))))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn minimal_polynomial(&self) -> &[i64] {
        &self.minpoly
    }

    fn from_ints(&'static self, v: &[i64]) -> CycNum {
        CycNum {
            field: self,
            c: v.iter().map(|&x| Rat::int(x)).collect(),
        }
    }

    pub fn zero(&'static self) -> CycNum {
        CycNum {
            field: self,
            c: (0..self.phi).map(|_| Rat::ZERO).collect(),
        }
    }

    pub fn one(&'static self) -> CycNum {
        self.int(1)
    }

    pub fn int(&'static self, v: i64) -> CycNum {
        self.rational(Rat::int(v))
    }

    pub fn rational(&'static self, r: Rat) -> CycNum {
        let mut z = self.zero();
        z.c[0] = r;
        z
    }

    /// The generator `q`.
    pub fn q(&'static self) -> CycNum {
        self.q_pow(1)
    }

    /// `q^k` for any integer `k` (uses `q^n = 1`).
    pub fn q_pow(&'static self, k: i64) -> CycNum {
        let e = k.rem_euclid(self.n as i64) as usize;
        self.from_ints(&self.powers[e])
    }

    /// `(i)_q = 1 + q + ... + q^(i-1)`, with `(0)_q = 0`.
    pub fn q_int(&'static self, i: u32) -> CycNum {
        let mut acc = self.zero();
        for k in 0..i {
            acc += &self.q_pow(k as i64);
        }
        acc
    }

    /// `alpha_i(l) = (i)_q (1 - q^(i-l))`, the coefficient of the `d`-action.
    pub fn alpha(&'static self, i: u32, l: i64) -> CycNum {
        let t = self.one() - self.q_pow(i as i64 - l);
        self.q_int(i) * t
    }

    pub fn from_coeffs(&'static self, coeffs: Vec<Rat>) -> Result<CycNum, CycError> {
        if coeffs.len() != self.phi {
            return Err(CycError::Malformed(format!(
                "expected {} coefficients, got {}",
                self.phi,
                coeffs.len()
            )));
        }
        Ok(CycNum {
            field: self,
            c: coeffs.into_iter().collect(),
        })
    }

    /// Parse `{"coeffs": ["p/q", ...]}`.
    pub fn from_json(&'static self, v: &Value) -> Result<CycNum, CycError> {
        let arr = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| CycError::Malformed("missing `coeffs` array".into()))?;
        let mut coeffs = Vec::with_capacity(arr.len());
        for e in arr {
            let r = match e {
                Value::String(s) => s
                    .parse::<Rat>()
                    .map_err(|e| CycError::Malformed(e.to_string()))?,
                Value::Number(k) => k
                    .as_i64()
                    .map(Rat::int)
                    .ok_or_else(|| CycError::Malformed(k.to_string()))?,
                other => return Err(CycError::Malformed(other.to_string())),
            };
            coeffs.push(r);
        }
        self.from_coeffs(coeffs)
    }
}

/// An element of `Q(q)`, canonical of degree `< phi(n)`.
#[derive(Clone)]
pub struct CycNum {
    field: &'static CycField,
    c: SmallVec<[Rat; 4]>,
}

impl CycNum {
    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rat::is_zero)
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.c[1..].iter().all(Rat::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    fn same_field(&self, o: &CycNum) {
        debug_assert!(
            std::ptr::eq(self.field, o.field),
            "mixing Q(zeta_{}) and Q(zeta_{})",
            self.field.n,
            o.field.n
        );
    }

    pub fn scale(&self, r: &Rat) -> CycNum {
        CycNum {
            field: self.field,
            c: self.c.iter().map(|x| x.mul(r)).collect(),
        }
    }

    /// Multiplicative inverse via the multiplication-by-`self` matrix.
    pub fn inv(&self) -> Result<CycNum, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        let f = self.field;
        let p = f.phi;
        if let Some(r) = self.as_rational() {
            return Ok(f.rational(r.recip()));
        }
        // Column j holds self * q^j.
        let mut m: Vec<Vec<Rat>> = vec![vec![Rat::ZERO; p + 1]; p];
        for j in 0..p {
            let col = self.clone() * f.q_pow(j as i64);
            for i in 0..p {
                m[i][j] = col.c[i].clone();
            }
        }
        m[0][p] = Rat::ONE;
        for col in 0..p {
            let piv = (col..p).find(|&r| !m[r][col].is_zero()).expect("singular field element");
            m.swap(col, piv);
            let inv = m[col][col].recip();
            for k in col..=p {
                m[col][k] = m[col][k].mul(&inv);
            }
            for r in 0..p {
                if r != col && !m[r][col].is_zero() {
                    let fac = m[r][col].clone();
                    for k in col..=p {
                        let t = m[col][k].mul(&fac);
                        m[r][k] = m[r][k].sub(&t);
                    }
                }
            }
        }
        Ok(CycNum {
            field: f,
            c: (0..p).map(|i| m[i][p].clone()).collect(),
        })
    }

    pub fn checked_div(&self, o: &CycNum) -> Result<CycNum, CycError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> CycNum {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({ "coeffs": self.c.iter().map(Rat::to_fraction_string).collect::<Vec<_>>() })
    }

    fn mul_ref(&self, o: &CycNum) -> CycNum {
        self.same_field(o);
        let f = self.field;
        let p = f.phi;
        let mut out: SmallVec<[Rat; 4]> = (0..p).map(|_| Rat::ZERO).collect();
        if self.is_zero() || o.is_zero() {
            return CycNum { field: f, c: out };
        }
        let mut prod: SmallVec<[Rat; 8]> = (0..2 * p - 1).map(|_| Rat::ZERO).collect();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                prod[i + j] = prod[i + j].add(&a.mul(b));
            }
        }
        for (k, v) in prod.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if k < p {
                out[k] = out[k].add(&v);
            } else {
                for (j, &r) in f.reduce[k].iter().enumerate() {
                    if r != 0 {
                        out[j] = out[j].add(&v.mul_int(r));
                    }
                }
            }
        }
        CycNum { field: f, c: out }
    }
}

impl PartialEq for CycNum {
    fn eq(&self, o: &CycNum) -> bool {
        self.field.n == o.field.n && self.c == o.c
    }
}
impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.field.n.hash(h);
        for r in &self.c {
            r.hash(h);
        }
    }
}

impl Ord for CycNum {
    fn cmp(&self, o: &CycNum) -> std::cmp::Ordering {
        self.field
            .n
            .cmp(&o.field.n)
            .then_with(|| self.c.iter().cmp(o.c.iter()))
    }
}
impl PartialOrd for CycNum {
    fn partial_cmp(&self, o: &CycNum) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl<'a> Add<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn add(self, o: &CycNum) -> CycNum {
        self.same_field(o);
        CycNum {
            field: self.field,
            c: self.c.iter().zip(o.c.iter()).map(|(a, b)| a.add(b)).collect(),
        }
    }
}
impl<'a> Sub<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn sub(self, o: &CycNum) -> CycNum {
        self.same_field(o);
        CycNum {
            field: self.field,
            c: self.c.iter().zip(o.c.iter()).map(|(a, b)| a.sub(b)).collect(),
        }
    }
}
impl<'a> Mul<&'a CycNum> for &'a CycNum {
    type Output = CycNum;
    fn mul(self, o: &CycNum) -> CycNum {
        self.mul_ref(o)
    }
}
impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field,
            c: self.c.iter().map(Rat::neg).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: CycNum) -> CycNum {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, o: &CycNum) -> CycNum {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, o: &CycNum) {
        self.same_field(o);
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            if !b.is_zero() {
                *a = a.add(b);
            }
        }
    }
}
impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, o: &CycNum) {
        self.same_field(o);
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            if !b.is_zero() {
                *a = a.sub(b);
            }
        }
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.signum() < 0;
            let abs = if neg { c.neg() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_polynomials() {
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn q_has_exact_order_n() {
        for n in 3..=12 {
            let f = CycField::get(n);
            assert!(f.q_pow(n as i64).is_one());
            for d in 1..n {
                assert!(!f.q_pow(d as i64).is_one(), "n={n}, d={d}");
            }
        }
    }

    #[test]
    fn worked_values() {
        let f = CycField::get(3);
        assert!((f.q() * f.q_pow(2)).is_one());
        assert_eq!(f.q() + f.q_pow(2), f.int(-1));
        let f4 = CycField::get(4);
        assert_eq!(f4.q_pow(2), f4.int(-1));
    }

    #[test]
    fn q_integers_and_alpha() {
        let f = CycField::get(3);
        assert!(f.q_int(0).is_zero());
        assert!(f.q_int(1).is_one());
        assert!(f.q_int(3).is_zero());
        assert!(f.alpha(0, 5).is_zero());
        assert_eq!(f.alpha(1, 2), f.one() - f.q_pow(2));
        for l in 1..7 {
            assert!(f.alpha(l, l as i64).is_zero());
        }
    }

    #[test]
    fn telescoping_q_integers() {
        for n in [3u32, 4, 5] {
            let f = CycField::get(n);
            for i in 0..=2 * n {
                let lhs = f.q_int(i) * (f.one() - f.q());
                assert_eq!(lhs, f.one() - f.q_pow(i as i64));
            }
        }
    }

    #[test]
    fn alpha_vanishing_pattern() {
        for n in [3u32, 4, 5] {
            let f = CycField::get(n);
            let ni = n as i64;
            for i in 0..=2 * n {
                for l in -(2 * ni)..=2 * ni {
                    let zero = (i as i64) % ni == 0 || (i as i64 - l).rem_euclid(ni) == 0;
                    assert_eq!(f.alpha(i, l).is_zero(), zero, "n={n} i={i} l={l}");
                }
            }
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let f = CycField::get(5);
        assert_eq!(f.zero().inv(), Err(CycError::DivisionByZero));
        assert!(f.one().checked_div(&f.zero()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = CycField::get(3);
        let x = f.rational(Rat::new(-3, 4)) + f.q().scale(&Rat::new(5, 6));
        let v = x.to_json();
        assert_eq!(v, json!({"coeffs": ["-3/4", "5/6"]}));
        assert_eq!(f.from_json(&v).unwrap(), x);
        assert!(f.from_json(&json!({"coeffs": ["1/1"]})).is_err());
    }
}
