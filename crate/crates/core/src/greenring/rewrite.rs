//! The relation family as a terminating rewriting system.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::modcat::EtaParam;

use super::element::{Monomial, RingElement};

/// `c(t) = floor((t+1)/2)`.
pub fn c_half(t: i64) -> i64 {
    (t + 1).div_euclid(2)
}

pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn poly(terms: impl IntoIterator<Item = (u32, u32, BigInt)>) -> RingElement {
    let mut e = RingElement::zero();
    for (x, y, c) in terms {
        e.add_term(Monomial::xy(x, y), c);
    }
    e
}

/// `Σ_{i=0}^{⌊(l-1)/2⌋} (-1)^i C(l-1-i, i) x^i y^(l-1-2i)`, the class of `V(l,0)`.
pub fn simple_poly(l: u32) -> RingElement {
    let l = l as i64;
    poly((0..=(l - 1) / 2).map(|i| {
        let s = if i % 2 == 0 { 1 } else { -1 };
        (i as u32, (l - 1 - 2 * i) as u32, binom(l - 1 - i, i) * s)
    }))
}

/// Which applicable rule to use; the deterministic strategy takes the first.
enum Step {
    X,
    WPair(usize, usize),
    ZW(bool, usize),
    ZZ,
    YW(usize),
    YZ(bool),
    Y,
}

/// The presentation of the Green ring for one `n`.
pub struct Presentation {
    n: u32,
    f: [RingElement; 4],
    /// `f_1 - y^(n-1)`.
    g: RingElement,
    zz: RingElement,
    xf1sq: RingElement,
    f1_y_f3: RingElement,
    f1_1_f4: RingElement,
    f1_1_2f4: RingElement,
    one_f4: RingElement,
    y_top: RingElement,
    memo: Mutex<HashMap<Monomial, RingElement>>,
}

static PRESENTATIONS: OnceLock<Mutex<HashMap<u32, &'static Presentation>>> = OnceLock::new();

impl Presentation {
    pub fn get(n: u32) -> &'static Presentation {
        assert!(n >= 2, "presentation needs n >= 2");
        let reg = PRESENTATIONS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut reg = reg.lock().unwrap();
        reg.entry(n)
            .or_insert_with(|| Box::leak(Box::new(Presentation::new(n))))
    }

    fn new(n: u32) -> Presentation {
        let ni = n as i64;
        let sign = |i: i64| if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let f1 = simple_poly(n);
        let mut f2 = poly((0..=c_half(ni - 1)).map(|i| {
            let c = BigInt::from(ni) * binom(ni - i, i) / BigInt::from(ni - i);
            (i as u32, (ni - 2 * i) as u32, c * sign(i))
        }));
        f2.add_term(Monomial::one(), BigInt::from(-2));
        let f3 = poly((1..=c_half(ni - 2)).map(|i| {
            ((i + 1) as u32, (ni - 1 - 2 * i) as u32, binom(ni - i - 2, i - 1) * sign(i - 1))
        }));
        let f4 = poly(
            (1..=c_half(ni - 1)).map(|i| (i as u32, (ni - 2 * i) as u32, binom(ni - i - 1, i - 1) * sign(i - 1))),
        );
        let one = RingElement::one();
        let g = f1.sub(&RingElement::xy(0, n - 1));
        let zz = one.add(&f1.mul(&RingElement::y().scale_int(2).add(&f3.scale_int(4))));
        let xf1sq = RingElement::x().mul(&f1).mul(&f1);
        let f1_y_f3 = f1.mul(&RingElement::y().add(&f3));
        let one_f4 = one.add(&f4);
        let f1_1_f4 = f1.mul(&one_f4);
        let f1_1_2f4 = f1.mul(&one.add(&f4.scale_int(2)));
        let y_top = RingElement::xy(0, 2 * n - 1).sub(&f1.mul(&f2));
        Presentation {
            n,
            f: [f1, f2, f3, f4],
            g,
            zz,
            xf1sq,
            f1_y_f3,
            f1_1_f4,
            f1_1_2f4,
            one_f4,
            y_top,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `f_k` for `k = 1..4`.
    pub fn f_poly(&self, k: usize) -> &RingElement {
        &self.f[k - 1]
    }

    fn steps(&self, m: &Monomial) -> Vec<Step> {
        let n = self.n;
        let mut out = Vec::new();
        if m.x >= n {
            out.push(Step::X);
        }
        for i in 0..m.w.len() {
            if m.w[i].e >= 2 {
                out.push(Step::WPair(i, i));
            }
            for j in i + 1..m.w.len() {
                out.push(Step::WPair(i, j));
            }
        }
        for i in 0..m.w.len() {
            if m.zp > 0 {
                out.push(Step::ZW(true, i));
            }
            if m.zm > 0 {
                out.push(Step::ZW(false, i));
            }
        }
        if m.zp > 0 && m.zm > 0 {
            out.push(Step::ZZ);
        }
        if m.y >= n - 1 {
            for i in 0..m.w.len() {
                out.push(Step::YW(i));
            }
            if m.zp > 0 {
                out.push(Step::YZ(true));
            }
            if m.zm > 0 {
                out.push(Step::YZ(false));
            }
        }
        if !m.has_zw() && m.y >= 2 * n - 1 {
            out.push(Step::Y);
        }
        out
    }

    pub fn is_normal(&self, m: &Monomial) -> bool {
        self.steps(m).is_empty()
    }

    fn apply(&self, m: &Monomial, step: &Step) -> RingElement {
        let n = self.n;
        let mut rest = m.clone();
        match *step {
            Step::X => {
                rest.x -= n;
                RingElement::from_mono(rest)
            }
            Step::WPair(i, j) => {
                let (a, b) = (m.w[i].clone(), m.w[j].clone());
                rest = rest.without_w(a.m, &a.eta).without_w(b.m, &b.eta);
                let ms = BigInt::from(a.m) * BigInt::from(b.m);
                if a.eta != b.eta {
                    self.xf1sq.scale(&ms).mul_mono(&rest)
                } else {
                    let (lo, hi) = if a.m <= b.m { (a.m, b.m) } else { (b.m, a.m) };
                    let mut out = self.one_f4.mul_mono(&Monomial::w(lo, a.eta.clone()));
                    out.add_scaled(&self.xf1sq, &(BigInt::from(hi - 1) * BigInt::from(lo)));
                    out.mul_mono(&rest)
                }
            }
            Step::ZW(plus, i) => {
                let wf = m.w[i].clone();
                rest = rest.without_w(wf.m, &wf.eta);
                if plus {
                    rest.zp -= 1;
                } else {
                    rest.zm -= 1;
                }
                let mut out = self.f[3].mul_mono(&Monomial::w(wf.m, wf.eta.clone()));
                let tail = if plus { &self.xf1sq } else { &self.f1_y_f3 };
                out.add_scaled(tail, &BigInt::from(wf.m));
                out.mul_mono(&rest)
            }
            Step::ZZ => {
                rest.zp -= 1;
                rest.zm -= 1;
                self.zz.mul_mono(&rest)
            }
            Step::YW(i) => {
                let wf = m.w[i].clone();
                rest.y -= n - 1;
                let wmono = Monomial::w(wf.m, wf.eta.clone());
                let without = rest.without_w(wf.m, &wf.eta);
                let mut out = self.f1_1_f4.scale(&BigInt::from(wf.m)).mul_mono(&without);
                out.add_scaled(&self.g.mul_mono(&wmono).mul_mono(&without), &-BigInt::one());
                out
            }
            Step::YZ(plus) => {
                rest.y -= n - 1;
                let zmono = if plus {
                    Monomial { zp: 1, ..Default::default() }
                } else {
                    Monomial { zm: 1, ..Default::default() }
                };
                let mut without = rest.clone();
                if plus {
                    without.zp -= 1;
                } else {
                    without.zm -= 1;
                }
                let mut out = self.f1_1_2f4.mul_mono(&without);
                out.add_scaled(&self.g.mul_mono(&zmono).mul_mono(&without), &-BigInt::one());
                out
            }
            Step::Y => {
                rest.y -= 2 * n - 1;
                self.y_top.mul_mono(&rest)
            }
        }
    }

    fn nf_mono(&self, m: &Monomial) -> RingElement {
        if let Some(r) = self.memo.lock().unwrap().get(m) {
            return r.clone();
        }
        let steps = self.steps(m);
        let out = match steps.first() {
            None => RingElement::from_mono(m.clone()),
            Some(s) => {
                let mut acc = RingElement::zero();
                for (mm, c) in self.apply(m, s).terms() {
                    acc.add_scaled(&self.nf_mono(mm), c);
                }
                acc
            }
        };
        self.memo.lock().unwrap().insert(m.clone(), out.clone());
        out
    }

    /// Reduce onto the normal-form basis.
    pub fn normal_form(&self, e: &RingElement) -> RingElement {
        let mut acc = RingElement::zero();
        for (m, c) in e.terms() {
            acc.add_scaled(&self.nf_mono(m), c);
        }
        acc
    }

    /// Same reduction with every rule choice and every term order drawn at
    /// random; no memo table is consulted.
    pub fn normal_form_randomized(&self, e: &RingElement, rng: &mut impl Rng) -> RingElement {
        let mut pending: BTreeMap<Monomial, BigInt> = e.terms().clone();
        let mut out = RingElement::zero();
        while !pending.is_empty() {
            let k = rng.gen_range(0..pending.len());
            let m = pending.keys().nth(k).unwrap().clone();
            let c = pending.remove(&m).unwrap();
            let steps = self.steps(&m);
            if steps.is_empty() {
                out.add_term(m, c);
                continue;
            }
            let s = &steps[rng.gen_range(0..steps.len())];
            for (mm, cc) in self.apply(&m, s).terms() {
                let e = pending.entry(mm.clone()).or_default();
                *e += cc * &c;
                if e.is_zero() {
                    pending.remove(mm);
                }
            }
        }
        out
    }

    pub fn multiply(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.normal_form(&a.mul(b))
    }

    /// Normal form in the quotient by `f_1`.
    pub fn stable_normal_form(&self, e: &RingElement) -> RingElement {
        let n = self.n;
        let mut cur = self.normal_form(e);
        loop {
            let Some(m) = cur.terms().keys().find(|m| m.y >= n - 1).cloned() else {
                return cur;
            };
            let c = cur.coeff(&m);
            let mut rest = m.clone();
            rest.y -= n - 1;
            let mut next = cur.clone();
            next.add_term(m, -c.clone());
            // y^(n-1) = f_1 - g, and f_1 = 0 here.
            next.add_scaled(&self.g.mul_mono(&rest), &-c);
            cur = self.normal_form(&next);
        }
    }

    /// `x^k` with `k` reduced mod `n`.
    pub fn x_pow(&self, k: i64) -> RingElement {
        RingElement::xy(k.rem_euclid(self.n as i64) as u32, 0)
    }

    pub fn is_normal_element(&self, e: &RingElement) -> bool {
        e.terms().keys().all(|m| self.is_normal(m))
    }
}

/// Binomial identity: `Σ_{i=0}^s (-1)^i (m-2l+2i)/(m-2l+i) C(m-2l+i, i) = (-1)^s C(m-2l+s, s)`.
pub fn lemma32_check(m: i64, l: i64, s: i64) -> bool {
    use num_rational::BigRational;
    let k = m - 2 * l;
    let mut lhs = BigRational::zero();
    for i in 0..=s {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let t = BigRational::new(BigInt::from(k + 2 * i), BigInt::from(k + i)) * BigRational::from(binom(k + i, i));
        lhs += t * BigRational::from(BigInt::from(sign));
    }
    let sign = if s % 2 == 0 { 1 } else { -1 };
    lhs == BigRational::from(binom(k + s, s) * BigInt::from(sign))
}

/// The η set used by monomials: a helper for tests and the CLI.
pub fn w_etas(e: &RingElement) -> Vec<EtaParam> {
    let mut out: Vec<EtaParam> = e
        .terms()
        .keys()
        .flat_map(|m| m.w.iter().map(|f| f.eta.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}
