//! Basis unimodularity, the syzygy law on bands, the binomial identity,
//! rewriting robustness and the stable quotient.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::greenring::{lemma32_check, Monomial, RingElement, RingError, WFactor};
use crate::linalg::int_det;
use crate::modcat::{is_isomorphic_to_local, EtaParam, IndecLabel, IsoResult, Sign};

use super::{fan_out, with_error, CheckReport, Verifier};

/// Exhaustive sweep of the alternating binomial identity for `m <= m_max`,
/// `1 <= l <= (m-1)/2`, `0 <= s <= 2l`.
pub fn lemma_sweep(m_max: i64) -> CheckReport {
    let t = Instant::now();
    let mut rep = CheckReport::new("binomial-identity", 0, json!({"m_max": m_max}));
    let mut count = 0;
    for m in 1..=m_max {
        for l in 1..=(m - 1) / 2 {
            for s in 0..=2 * l {
                count += 1;
                if !lemma32_check(m, l, s) {
                    return rep.fail(format!("m={m} l={l} s={s}")).timed(t);
                }
            }
        }
    }
    rep.detail = Some(format!("{count} cases"));
    rep.timed(t)
}

/// A random raw element with small exponents.
pub fn random_raw_element(rng: &mut impl Rng, n: u32, etas: &[EtaParam]) -> RingElement {
    let mut e = RingElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut m = Monomial::xy(rng.gen_range(0..2 * n), rng.gen_range(0..2 * n + 2));
        m.zp = rng.gen_range(0..3);
        m.zm = rng.gen_range(0..3);
        for _ in 0..rng.gen_range(0..3) {
            let f = WFactor {
                m: rng.gen_range(1..=3),
                eta: etas[rng.gen_range(0..etas.len())].clone(),
                e: 1,
            };
            m = m.mul(&Monomial { w: vec![f], ..Default::default() });
        }
        let c: i64 = rng.gen_range(-5..=5);
        if c != 0 {
            e.add_term(m, BigInt::from(c));
        }
    }
    e
}

impl Verifier {
    /// Triangularity and integral invertibility of the class basis, block by
    /// block: z/w-free, then each `z_±^m` and each `w_{m,eta}` for `m <= m_max`.
    pub fn verify_basis(&self, m_max: u32) -> Vec<CheckReport> {
        let n = self.n;
        let mut out = Vec::new();
        let poly_cols: Vec<Monomial> =
            (0..n).flat_map(|i| (0..=2 * n - 2).map(move |j| Monomial::xy(i, j))).collect();
        let mut rows = Vec::new();
        for r in 0..n as i64 {
            for l in 1..=n {
                rows.push(IndecLabel::simple(n, l, r).unwrap());
            }
            for l in 1..n {
                rows.push(IndecLabel::proj(n, l, r).unwrap());
            }
        }
        out.push(self.basis_block("basis", json!({"block": "poly"}), &rows, &poly_cols, &|m| {
            poly_cols.contains(m)
        }));
        for sign in [Sign::Plus, Sign::Minus] {
            for m in 1..=m_max {
                let cols: Vec<Monomial> = (0..n)
                    .flat_map(|i| {
                        (0..=n - 2).map(move |l| {
                            let mut mo = Monomial::xy(i, l);
                            match sign {
                                Sign::Plus => mo.zp = m,
                                Sign::Minus => mo.zm = m,
                            }
                            mo
                        })
                    })
                    .collect();
                let rows: Vec<IndecLabel> = (0..n as i64)
                    .flat_map(|r| (1..n).map(move |l| IndecLabel::syz(n, sign, m, l, r).unwrap()))
                    .collect();
                let lower = |mo: &Monomial| {
                    mo.w.is_empty()
                        && match sign {
                            Sign::Plus => mo.zm == 0 && mo.zp < m,
                            Sign::Minus => mo.zp == 0 && mo.zm < m,
                        }
                };
                let inputs = json!({"block": format!("z{}", sign.as_str()), "m": m});
                out.push(self.basis_block("basis", inputs, &rows, &cols, &lower));
            }
        }
        for m in 1..=m_max {
            for eta in &self.etas {
                let cols: Vec<Monomial> = (0..n)
                    .flat_map(|i| {
                        (0..=n - 2).map(move |l| Monomial::xy(i, l).mul(&Monomial::w(m, eta.clone())))
                    })
                    .collect();
                let rows: Vec<IndecLabel> = (0..n as i64)
                    .flat_map(|r| (1..n).map(move |l| IndecLabel::band(n, m, l, r, eta.simple_shift(l)).unwrap()))
                    .collect();
                let inputs = json!({"block": "w", "m": m, "eta": eta.to_string()});
                out.push(self.basis_block("basis", inputs, &rows, &cols, &|mo: &Monomial| !mo.has_zw()));
            }
        }
        out
    }

    fn basis_block(
        &self,
        id: &str,
        inputs: serde_json::Value,
        rows: &[IndecLabel],
        cols: &[Monomial],
        lower: &dyn Fn(&Monomial) -> bool,
    ) -> CheckReport {
        let t = Instant::now();
        let rep = CheckReport::new(id, self.n, inputs);
        if rows.len() != cols.len() {
            return rep.fail(format!("{} classes for {} monomials", rows.len(), cols.len())).timed(t);
        }
        let idx: BTreeMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (i, lab) in rows.iter().enumerate() {
            let cls = match self.class(lab) {
                Ok(c) => c,
                Err(e) => return with_error(rep, e).timed(t),
            };
            for (mo, c) in cls.terms() {
                match idx.get(mo) {
                    Some(&j) => mat[i][j] = c.clone(),
                    None if lower(mo) => {}
                    None => return rep.fail(format!("class of {lab} has term {mo} outside its block")).timed(t),
                }
            }
        }
        let d = int_det(&mat);
        let mut rep = rep.compare(json!(d.abs().to_string()), json!("1"));
        rep.detail = Some(format!("{}x{} determinant {d}", rows.len(), cols.len()));
        rep.timed(t)
    }

    fn omega_band_one(&self, s: u32, l: u32, r: i64, eta: &EtaParam) -> CheckReport {
        let n = self.n;
        let t = Instant::now();
        let rep = CheckReport::new(
            "omega-band",
            n,
            json!({"s": s, "l": l, "r": r, "eta": eta.to_string()}),
        );
        let run = || -> Result<Vec<(&'static str, IsoResult)>, RingError> {
            let m = self.cat.band(s, l, r, eta)?;
            let want = self.cat.band(s, n - l, r + l as i64, &eta.omega_shift(l))?;
            let om = self.cat.syzygy(&m)?;
            let co = self.cat.cosyzygy(&m)?;
            let om2 = self.cat.syzygy(&om)?;
            Ok(vec![
                ("syzygy", is_isomorphic_to_local(&om, &want)),
                ("cosyzygy", is_isomorphic_to_local(&co, &want)),
                ("double syzygy", is_isomorphic_to_local(&om2, &m)),
            ])
        };
        let target = IndecLabel::band(n, s, n - l, r + l as i64, eta.omega_shift(l)).unwrap().to_string();
        match run() {
            Ok(v) => {
                let bad: Vec<String> = v
                    .iter()
                    .filter(|(_, r)| !r.is_iso())
                    .map(|(w, r)| match r {
                        IsoResult::NotIso(why) => format!("{w}: {why}"),
                        _ => format!("{w}: inconclusive"),
                    })
                    .collect();
                let mut rep = rep.compare(json!(target), json!(target));
                if !bad.is_empty() {
                    rep = rep.fail(bad.join("; "));
                } else {
                    rep.detail = Some(format!("Omega = Omega^-1 = {target}; Omega^2 returns the input"));
                }
                rep
            }
            Err(e) => with_error(rep, e),
        }
        .timed(t)
    }

    /// The syzygy law on bands for all `l`, `r`, `s <= s_max` and sampled parameters.
    pub fn verify_omega_band(&self, s_max: u32, jobs: usize) -> Vec<CheckReport> {
        let n = self.n;
        let mut items = Vec::new();
        for s in 1..=s_max {
            for l in 1..n {
                for r in 0..n as i64 {
                    for eta in &self.etas {
                        items.push((s, l, r, eta.clone()));
                    }
                }
            }
        }
        fan_out(jobs, &items, |(s, l, r, eta)| self.omega_band_one(*s, *l, *r, eta))
    }

    /// Idempotence, order independence and multiplicativity of the
    /// dimension map on seeded random raw elements.
    pub fn robustness(&self, count: usize, seed: u64) -> CheckReport {
        let t = Instant::now();
        let n = self.n;
        let rep = CheckReport::new("robustness", n, json!({"count": count, "seed": seed}));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut prev: Option<RingElement> = None;
        for k in 0..count {
            let e = random_raw_element(&mut rng, n, &self.etas);
            let nf = self.pr.normal_form(&e);
            let why = if !self.pr.is_normal_element(&nf) {
                Some("result is not normal")
            } else if self.pr.normal_form(&nf) != nf {
                Some("not idempotent")
            } else if self.pr.normal_form_randomized(&e, &mut rng) != nf {
                Some("randomized rule order disagrees")
            } else if nf.dimev(n) != e.dimev(n) {
                Some("dimension changed")
            } else {
                None
            };
            if let Some(why) = why {
                return rep.compare(nf.to_json(), e.to_json()).fail(format!("element {k}: {why}")).timed(t);
            }
            if let Some(p) = &prev {
                let prod = self.pr.multiply(p, &e);
                if prod.dimev(n) != p.dimev(n) * e.dimev(n) {
                    return rep.fail(format!("element {k}: dimension not multiplicative")).timed(t);
                }
            }
            prev = Some(e);
        }
        let mut rep = rep;
        rep.detail = Some(format!("{count} elements"));
        rep.timed(t)
    }

    /// Projective classes vanish in the stable quotient and `z_+ z_- = 1` there.
    pub fn stable_checks(&self) -> Vec<CheckReport> {
        let n = self.n;
        let mut out = Vec::new();
        for r in 0..n as i64 {
            for l in 1..=n {
                let t = Instant::now();
                let lab = IndecLabel::proj(n, l, r).unwrap();
                let rep = CheckReport::new("stable", n, json!({"class": lab.to_string()}));
                out.push(
                    match self.class(&lab) {
                        Ok(c) => rep.compare(self.pr.stable_normal_form(&c).to_json(), RingElement::zero().to_json()),
                        Err(e) => with_error(rep, e),
                    }
                    .timed(t),
                );
            }
        }
        let t = Instant::now();
        let zz = self.pr.stable_normal_form(&RingElement::z_plus().mul(&RingElement::z_minus()));
        out.push(
            CheckReport::new("stable", n, json!({"class": "z+ z-"}))
                .compare(zz.to_json(), RingElement::one().to_json())
                .timed(t),
        );
        out
    }
}
