//! Cross-validation of the symbolic ring against the module oracle.

mod relations;
mod report;
mod structure;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::greenring::{DerivedTables, Presentation, RingElement, RingError};
use crate::modcat::{Catalog, EtaParam, IndecLabel, ModError, Sign};

pub use relations::RELATION_NAMES;
pub use report::{exit_code, sort_reports, CheckReport, Status};
pub use structure::{lemma_sweep, random_raw_element};

/// Formal integer combination of indecomposables.
pub type Combo = BTreeMap<IndecLabel, BigInt>;

pub fn combo_json(c: &Combo) -> Value {
    Value::Array(
        c.iter()
            .map(|(l, k)| json!({"label": l.to_string(), "mult": k.to_string()}))
            .collect(),
    )
}

pub fn combo_of(parts: &[(IndecLabel, usize)]) -> Combo {
    let mut c = Combo::new();
    for (l, k) in parts {
        add_to(&mut c, l.clone(), BigInt::from(*k));
    }
    c
}

fn add_to(c: &mut Combo, l: IndecLabel, k: BigInt) {
    let e = c.entry(l.clone()).or_default();
    *e += k;
    if e.is_zero() {
        c.remove(&l);
    }
}

/// Default parameter samples: the degenerate point, two generic points and infinity.
pub fn default_etas(n: u32) -> Vec<EtaParam> {
    let f = crate::cyclo::CycField::get(n);
    vec![EtaParam::int(f, 0), EtaParam::int(f, 1), EtaParam::int(f, 2), EtaParam::Inf]
}

pub struct Verifier {
    pub n: u32,
    pub cat: &'static Catalog,
    pub pr: &'static Presentation,
    pub tables: DerivedTables,
    pub etas: Vec<EtaParam>,
}

/// Oracle failures that do not disprove anything.
fn is_inconclusive(e: &RingError) -> bool {
    matches!(
        e,
        RingError::Oracle(ModError::Unidentified(_) | ModError::Inconclusive(_) | ModError::NonSplitSemisimpleQuotient(_))
    )
}

pub(crate) fn with_error(rep: CheckReport, e: RingError) -> CheckReport {
    if is_inconclusive(&e) {
        rep.inconclusive(e.to_string())
    } else {
        rep.fail(e.to_string())
    }
}

impl Verifier {
    pub fn new(tables: DerivedTables) -> Result<Verifier, RingError> {
        let n = tables.n;
        Ok(Verifier {
            n,
            cat: Catalog::get(n)?,
            pr: Presentation::get(n),
            tables,
            etas: default_etas(n),
        })
    }

    pub fn class(&self, l: &IndecLabel) -> Result<RingElement, RingError> {
        self.tables.class_of(l)
    }

    pub fn class_combo(&self, c: &Combo) -> Result<RingElement, RingError> {
        let mut acc = RingElement::zero();
        for (l, k) in c {
            acc.add_scaled(&self.class(l)?, k);
        }
        Ok(acc)
    }

    pub fn tensor(&self, a: &IndecLabel, b: &IndecLabel) -> Result<Combo, RingError> {
        Ok(combo_of(&self.cat.decompose_tensor(a, b)?))
    }

    /// `normal_form([A][B])` against the dictionary image of the oracle's
    /// decomposition of `A ⊗ B`.
    pub fn crosscheck_product(&self, a: &IndecLabel, b: &IndecLabel) -> CheckReport {
        let t = Instant::now();
        let rep = CheckReport::new("crosscheck", self.n, json!({"a": a.to_string(), "b": b.to_string()}));
        let run = || -> Result<(RingElement, RingElement, Combo), RingError> {
            let sym = self.pr.multiply(&self.class(a)?, &self.class(b)?);
            let parts = self.tensor(a, b)?;
            Ok((sym, self.class_combo(&parts)?, parts))
        };
        match run() {
            Ok((lhs, rhs, parts)) => {
                let mut r = rep.compare(lhs.to_json(), rhs.to_json());
                r.detail = Some(format!("{lhs} | {}", combo_summary(&parts)));
                r
            }
            Err(e) => with_error(rep, e),
        }
        .timed(t)
    }

    /// The bounded catalogue: every simple and projective, syzygies up to
    /// `syz_max`, bands up to `band_max` over the parameter samples.
    pub fn catalog_labels(&self, syz_max: u32, band_max: u32) -> Vec<IndecLabel> {
        let n = self.n;
        let mut out = Vec::new();
        for r in 0..n as i64 {
            for l in 1..=n {
                out.push(IndecLabel::simple(n, l, r).unwrap());
            }
            for l in 1..n {
                out.push(IndecLabel::proj(n, l, r).unwrap());
            }
            for sign in [Sign::Plus, Sign::Minus] {
                for m in 1..=syz_max {
                    for l in 1..n {
                        out.push(IndecLabel::syz(n, sign, m, l, r).unwrap());
                    }
                }
            }
            for s in 1..=band_max {
                for l in 1..n {
                    for eta in &self.etas {
                        out.push(IndecLabel::band(n, s, l, r, eta.clone()).unwrap());
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Every unordered pair from the bounded catalogue.
    pub fn crosscheck_sweep(&self, syz_max: u32, band_max: u32, jobs: usize) -> Vec<CheckReport> {
        let labels = self.catalog_labels(syz_max, band_max);
        let mut pairs = Vec::new();
        for i in 0..labels.len() {
            for j in i..labels.len() {
                pairs.push((labels[i].clone(), labels[j].clone()));
            }
        }
        fan_out(jobs, &pairs, |(a, b)| self.crosscheck_product(a, b))
    }

    /// Evaluate a raw polynomial in the generators on the module side: each
    /// monomial becomes an iterated tensor product, decomposed by the oracle.
    pub fn oracle_eval(&self, e: &RingElement) -> Result<Combo, RingError> {
        let n = self.n;
        let mut total = Combo::new();
        for (m, c) in e.terms() {
            let mut factors: Vec<IndecLabel> = Vec::new();
            for w in &m.w {
                for _ in 0..w.e {
                    factors.push(IndecLabel::band(n, w.m, 1, 0, w.eta.clone())?);
                }
            }
            factors.extend(std::iter::repeat(IndecLabel::syz(n, Sign::Plus, 1, 1, 0)?).take(m.zp as usize));
            factors.extend(std::iter::repeat(IndecLabel::syz(n, Sign::Minus, 1, 1, 0)?).take(m.zm as usize));
            factors.extend(std::iter::repeat(IndecLabel::simple(n, 2, 0)?).take(m.y as usize));
            let mut cur = Combo::new();
            cur.insert(IndecLabel::simple(n, 1, m.x as i64)?, BigInt::from(1));
            for g in &factors {
                let mut next = Combo::new();
                for (l, k) in &cur {
                    for (p, j) in self.tensor(l, g)? {
                        add_to(&mut next, p, k * j);
                    }
                }
                cur = next;
            }
            for (l, k) in cur {
                add_to(&mut total, l, k * c);
            }
        }
        Ok(total)
    }
}

pub fn combo_summary(c: &Combo) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter()
        .map(|(l, k)| if *k == BigInt::from(1) { l.to_string() } else { format!("{k} {l}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Run `f` over `items` on up to `jobs` threads; results keep input order.
pub fn fan_out<T: Sync, F: Fn(&T) -> CheckReport + Sync>(jobs: usize, items: &[T], f: F) -> Vec<CheckReport> {
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<CheckReport>> = vec![None; items.len()];
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                let f = &f;
                s.spawn(move || {
                    (j..items.len())
                        .step_by(jobs)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|r| r.unwrap()).collect()
}
