//! The product relations and the relation family, each checked after
//! reduction and against the oracle's decompositions.

use std::time::Instant;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::greenring::{c_half, RingElement, RingError};
use crate::modcat::{EtaParam, IndecLabel, Sign};

use super::{add_to, combo_json, combo_summary, with_error, CheckReport, Combo, Verifier};

pub const RELATION_NAMES: [&str; 11] = [
    "L3.3.1", "L3.3.2", "L3.3.3", "L3.4.1", "L3.4.2", "L3.6.1", "L3.6.2", "L3.6.3", "L3.6.4", "L3.6.5", "T3.10.U",
];

/// One instance of a relation: the generator product, the closed right-hand
/// side, and the summands named in the decomposition it comes from.
struct Instance {
    inputs: Value,
    lhs: RingElement,
    rhs: RingElement,
    oracle: Option<(Combo, Combo)>,
}

impl Verifier {
    fn f(&self, k: usize) -> RingElement {
        self.pr.f_poly(k).clone()
    }

    fn p(&self, l: u32, r: i64) -> IndecLabel {
        IndecLabel::proj(self.n, l, r).unwrap()
    }

    fn band1(&self, m: u32, eta: &EtaParam) -> IndecLabel {
        IndecLabel::band(self.n, m, 1, 0, eta.clone()).unwrap()
    }

    /// `k ⊕_{i=from}^{c(n-2)} P(2i+1,-i)`.
    fn odd_tail(&self, c: &mut Combo, from: i64, k: i64) {
        for i in from..=c_half(self.n as i64 - 2) {
            add_to(c, self.p(2 * i as u32 + 1, -i), BigInt::from(k));
        }
    }

    /// `k ⊕_{i=1}^{c(n-1)} P(2i,-i)`.
    fn even_tail(&self, c: &mut Combo, k: i64) {
        for i in 1..=c_half(self.n as i64 - 1) {
            add_to(c, self.p(2 * i as u32, -i), BigInt::from(k));
        }
    }

    fn x_f1_sq(&self) -> RingElement {
        RingElement::x().mul(&self.f(1)).mul(&self.f(1))
    }

    fn instances(&self, name: &str, ms: &[u32]) -> Result<Vec<Instance>, RingError> {
        let n = self.n;
        let one = RingElement::one();
        let vn0 = IndecLabel::simple(n, n, 0)?;
        let om = IndecLabel::syz(n, Sign::Plus, 1, 1, 0)?;
        let om_inv = IndecLabel::syz(n, Sign::Minus, 1, 1, 0)?;
        let mut out = Vec::new();
        match name {
            "L3.3.1" | "L3.3.2" => {
                let from = if name == "L3.3.1" { 0 } else { 1 };
                let mut want = Combo::new();
                self.odd_tail(&mut want, from, 1);
                let lhs = self.class_combo(&want)?;
                let rhs = if from == 0 { self.x_f1_sq() } else { self.f(3).mul(&self.f(1)) };
                let mut got = self.tensor(&IndecLabel::simple(n, n, 1)?, &vn0)?;
                if from == 1 {
                    add_to(&mut got, self.p(1, 0), BigInt::from(-1));
                }
                out.push(Instance { inputs: json!({}), lhs, rhs, oracle: Some((got, want)) });
            }
            "L3.3.3" => {
                let mut want = Combo::new();
                self.even_tail(&mut want, 1);
                let lhs = self.class_combo(&want)?;
                let rhs = self.f(4).mul(&self.f(1));
                let eta = EtaParam::int(self.cat.field(), 1);
                let mut got = self.tensor(&self.band1(1, &eta), &vn0)?;
                add_to(&mut got, vn0.clone(), BigInt::from(-1));
                out.push(Instance { inputs: json!({}), lhs, rhs, oracle: Some((got, want)) });
            }
            "L3.4.1" => {
                let lhs = RingElement::z_plus().mul(&RingElement::z_minus());
                let rhs = one.add(&self.f(1).mul(&RingElement::y().scale_int(2).add(&self.f(3).scale_int(4))));
                let mut want = Combo::new();
                add_to(&mut want, IndecLabel::simple(n, 1, 0)?, BigInt::from(1));
                add_to(&mut want, self.p(n - 1, 1), BigInt::from(2));
                self.odd_tail(&mut want, 1, 4);
                out.push(Instance { inputs: json!({}), lhs, rhs, oracle: Some((self.tensor(&om, &om_inv)?, want)) });
            }
            "L3.4.2" => {
                for (s, z, lab) in [("+", RingElement::z_plus(), &om), ("-", RingElement::z_minus(), &om_inv)] {
                    let lhs = z.mul(&self.f(1));
                    let rhs = one.add(&self.f(4).scale_int(2)).mul(&self.f(1));
                    let mut want = Combo::new();
                    add_to(&mut want, vn0.clone(), BigInt::from(1));
                    self.even_tail(&mut want, 2);
                    out.push(Instance {
                        inputs: json!({"sign": s}),
                        lhs,
                        rhs,
                        oracle: Some((self.tensor(lab, &vn0)?, want)),
                    });
                }
            }
            "L3.6.1" | "L3.6.2" | "L3.6.3" => {
                for &m in ms {
                    for eta in &self.etas {
                        let w = RingElement::w(m, eta.clone());
                        let mi = m as i64;
                        let b = self.band1(m, eta);
                        let mut want = Combo::new();
                        let (lhs, rhs, other) = match name {
                            "L3.6.1" => {
                                add_to(&mut want, vn0.clone(), BigInt::from(mi));
                                self.even_tail(&mut want, mi);
                                let rhs = one.add(&self.f(4)).mul(&self.f(1)).scale_int(mi);
                                (w.mul(&self.f(1)), rhs, vn0.clone())
                            }
                            _ => {
                                let shifted = IndecLabel::band(n, m, n - 1, 1, eta.omega_shift(1))?;
                                add_to(&mut want, shifted, BigInt::from(1));
                                self.odd_tail(&mut want, 1, 2 * mi);
                                if name == "L3.6.2" {
                                    add_to(&mut want, self.p(1, 0), BigInt::from(mi));
                                    let rhs = self.f(4).mul(&w).add(&self.x_f1_sq().scale_int(mi));
                                    (RingElement::z_plus().mul(&w), rhs, om.clone())
                                } else {
                                    add_to(&mut want, self.p(n - 1, 1), BigInt::from(mi));
                                    let tail = RingElement::y().add(&self.f(3)).mul(&self.f(1)).scale_int(mi);
                                    (RingElement::z_minus().mul(&w), self.f(4).mul(&w).add(&tail), om_inv.clone())
                                }
                            }
                        };
                        out.push(Instance {
                            inputs: json!({"m": m, "eta": eta.to_string()}),
                            lhs,
                            rhs,
                            oracle: Some((self.tensor(&b, &other)?, want)),
                        });
                    }
                }
            }
            "L3.6.4" | "L3.6.5" => {
                for &m in ms {
                    for &s in ms {
                        for (i, eta) in self.etas.iter().enumerate() {
                            for alpha in &self.etas[i..] {
                                let same = eta == alpha;
                                if (name == "L3.6.4") == same || (same && m > s) {
                                    continue;
                                }
                                let (wm, ws) = (RingElement::w(m, eta.clone()), RingElement::w(s, alpha.clone()));
                                let ms_ = (m * s) as i64;
                                let mut want = Combo::new();
                                let rhs = if !same {
                                    self.odd_tail(&mut want, 0, ms_);
                                    self.x_f1_sq().scale_int(ms_)
                                } else {
                                    add_to(&mut want, self.band1(m, eta), BigInt::from(1));
                                    add_to(&mut want, IndecLabel::band(n, m, n - 1, 1, eta.omega_shift(1))?, BigInt::from(1));
                                    add_to(&mut want, self.p(1, 0), BigInt::from((s as i64 - 1) * m as i64));
                                    self.odd_tail(&mut want, 1, ms_);
                                    wm.mul(&one.add(&self.f(4)))
                                        .add(&self.x_f1_sq().scale_int((s as i64 - 1) * m as i64))
                                };
                                let got = self.tensor(&self.band1(m, eta), &self.band1(s, alpha))?;
                                out.push(Instance {
                                    inputs: json!({"m": m, "s": s, "eta": eta.to_string(), "alpha": alpha.to_string()}),
                                    lhs: wm.mul(&ws),
                                    rhs,
                                    oracle: Some((got, want)),
                                });
                            }
                        }
                    }
                }
            }
            "T3.10.U" => {
                for (label, u) in self.relation_family(ms) {
                    let got = self.oracle_eval(&u)?;
                    out.push(Instance {
                        inputs: json!({"generator": label}),
                        lhs: u,
                        rhs: RingElement::zero(),
                        oracle: Some((got, Combo::new())),
                    });
                }
            }
            _ => return Err(RingError::Parse(format!("unknown relation {name:?}"))),
        }
        Ok(out)
    }

    /// The generators of the defining ideal over the sampled parameters.
    pub fn relation_family(&self, ms: &[u32]) -> Vec<(String, RingElement)> {
        let n = self.n;
        let one = RingElement::one();
        let (f1, f2, f3, f4) = (self.f(1), self.f(2), self.f(3), self.f(4));
        let (zp, zm) = (RingElement::z_plus(), RingElement::z_minus());
        let mut out = vec![
            ("x^n-1".to_string(), RingElement::xy(n, 0).sub(&one)),
            ("f1*f2".into(), f1.mul(&f2)),
            (
                "z+z- - 1 - f1(2y+4f3)".into(),
                zp.mul(&zm).sub(&one).sub(&f1.mul(&RingElement::y().scale_int(2).add(&f3.scale_int(4)))),
            ),
            ("f1(z+ - 1 - 2f4)".into(), f1.mul(&zp.sub(&one).sub(&f4.scale_int(2)))),
            ("f1(z+ - z-)".into(), f1.mul(&zp.sub(&zm))),
        ];
        for &m in ms {
            let mi = m as i64;
            for eta in &self.etas {
                let w = RingElement::w(m, eta.clone());
                let tag = format!("m={m},eta={eta}");
                out.push((format!("f1(w - m - m f4) [{tag}]"), f1.mul(&w.sub(&one.add(&f4).scale_int(mi)))));
                out.push((
                    format!("(z+ - f4)w - m x f1^2 [{tag}]"),
                    zp.sub(&f4).mul(&w).sub(&self.x_f1_sq().scale_int(mi)),
                ));
                out.push((
                    format!("(z- - f4)w - m f1(y+f3) [{tag}]"),
                    zm.sub(&f4).mul(&w).sub(&f1.mul(&RingElement::y().add(&f3)).scale_int(mi)),
                ));
            }
        }
        for &m in ms {
            for &s in ms {
                for (i, eta) in self.etas.iter().enumerate() {
                    for alpha in &self.etas[i..] {
                        let (wm, ws) = (RingElement::w(m, eta.clone()), RingElement::w(s, alpha.clone()));
                        let tag = format!("m={m},s={s},eta={eta},alpha={alpha}");
                        if eta != alpha {
                            out.push((
                                format!("w w' - ms x f1^2 [{tag}]"),
                                wm.mul(&ws).sub(&self.x_f1_sq().scale_int((m * s) as i64)),
                            ));
                        } else if m <= s {
                            let u = wm
                                .mul(&ws.sub(&one).sub(&f4))
                                .sub(&self.x_f1_sq().scale_int((s as i64 - 1) * m as i64));
                            out.push((format!("w(w_t - 1 - f4) - (t-1) m x f1^2 [{tag}]"), u));
                        }
                    }
                }
            }
        }
        out
    }

    /// One report per parameter instance of the named relation.
    pub fn named_relation(&self, name: &str, ms: &[u32]) -> Vec<CheckReport> {
        let t = Instant::now();
        let insts = match self.instances(name, ms) {
            Ok(v) => v,
            Err(e) => return vec![with_error(CheckReport::new(name, self.n, json!({})), e).timed(t)],
        };
        let pr = self.pr;
        insts
            .into_iter()
            .map(|inst| {
                let t = Instant::now();
                let lhs = pr.normal_form(&inst.lhs);
                let rhs = pr.normal_form(&inst.rhs);
                let mut rep = CheckReport::new(name, self.n, inst.inputs).compare(lhs.to_json(), rhs.to_json());
                let mut notes = vec![format!("{lhs} vs {rhs}")];
                if let Some((got, want)) = inst.oracle {
                    notes.push(format!("oracle: {} vs {}", combo_summary(&got), combo_summary(&want)));
                    if got != want {
                        rep = rep.fail("oracle decomposition differs");
                        rep.lhs = json!({"normal_form": lhs.to_json(), "oracle": combo_json(&got)});
                        rep.rhs = json!({"normal_form": rhs.to_json(), "oracle": combo_json(&want)});
                    } else if name != "T3.10.U" {
                        match self.class_combo(&want) {
                            Ok(c) if c == lhs => {}
                            Ok(c) => rep = rep.fail(format!("dictionary image {c} differs from {lhs}")),
                            Err(e) => rep = with_error(rep, e),
                        }
                    }
                }
                if rep.detail.is_none() {
                    rep.detail = Some(notes.join("; "));
                }
                rep.timed(t)
            })
            .collect()
    }

    pub fn all_relations(&self, ms: &[u32]) -> Vec<CheckReport> {
        RELATION_NAMES.iter().flat_map(|name| self.named_relation(name, ms)).collect()
    }
}
