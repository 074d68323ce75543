//! Krull-Schmidt splitting of a module into indecomposable summands.

use std::collections::BTreeMap;

use crate::cyclo::CycNum;
use crate::linalg::Mat;

use super::hom::{gram_rank, hom_space};
use super::label::IndecLabel;
use super::module::{GradedMap, ModuleRep, Weight};
use super::ModError;

/// An indecomposable summand together with its embedding into the parent.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: ModuleRep,
    pub embed: GradedMap,
}

/// A decomposition into labelled indecomposables, with the change of basis
/// whose columns are the concatenated summand bases.
#[derive(Clone, Debug)]
pub struct DecompResult {
    pub summands: Vec<(IndecLabel, usize)>,
    pub witness: Mat,
}

impl DecompResult {
    pub fn total_dim(&self, n: u32) -> usize {
        self.summands.iter().map(|(l, k)| l.dim(n) * k).sum()
    }
}

/// Change-of-basis matrix built from summand embeddings.
pub fn witness_matrix(parent: &ModuleRep, parts: &[Summand]) -> Mat {
    let f = parent.field();
    let mut cols = Vec::new();
    for p in parts {
        cols.extend(p.embed.to_dense(f).columns());
    }
    Mat::from_columns(f, parent.dim(), &cols)
}

fn restrict_to_delta(m: &ModuleRep, delta: u8) -> Result<Option<(ModuleRep, GradedMap)>, ModError> {
    let n = m.n() as i64;
    let f = m.field();
    let sub: BTreeMap<Weight, Mat> = m
        .blocks()
        .iter()
        .filter(|(w, _)| (w.0 as i64 - w.1 as i64).rem_euclid(n) as u8 == delta)
        .map(|(w, r)| (*w, Mat::identity(f, r.len())))
        .collect();
    if sub.is_empty() {
        return Ok(None);
    }
    m.module_on(sub).map(Some)
}

/// Split along `ker u^D ⊕ im u^D` for an endomorphism `u`.
fn fitting(x: &ModuleRep, u: &GradedMap) -> Result<[(ModuleRep, GradedMap); 2], ModError> {
    let f = x.field();
    let mut ker = BTreeMap::new();
    let mut im = BTreeMap::new();
    for (w, r) in x.blocks() {
        let b = u.block_for(*w).expect("endomorphism covers every weight");
        let p = b.pow(r.len() as u64);
        let k = p.kernel();
        let i = p.column_space();
        if !k.is_empty() {
            ker.insert(*w, Mat::from_columns(f, r.len(), &k));
        }
        if !i.is_empty() {
            im.insert(*w, Mat::from_columns(f, r.len(), &i));
        }
    }
    Ok([x.module_on(ker)?, x.module_on(im)?])
}

fn splits(u: &GradedMap) -> bool {
    !u.is_nilpotent() && !u.is_invertible()
}

/// Idempotent refinement `e -> 3e^2 - 2e^3`, iterated to a fixed point.
pub fn refine_idempotent(e: &GradedMap) -> GradedMap {
    let mut e = e.clone();
    let f = e.field();
    for _ in 0..16 {
        let e2 = e.compose(&e);
        if e2.sub(&e).is_zero() {
            break;
        }
        let e3 = e2.compose(&e);
        e = e2.scale(&f.int(3)).sub(&e3.scale(&f.int(2)));
    }
    e
}

fn eigen_guesses(u: &GradedMap) -> Vec<CycNum> {
    let mut out: Vec<CycNum> = Vec::new();
    for b in &u.blocks {
        for i in 0..b.rows().min(b.cols()) {
            let v = &b[(i, i)];
            if !v.is_zero() && !out.contains(v) {
                out.push(v.clone());
            }
        }
    }
    out
}

/// Find a non-nilpotent, non-invertible endomorphism.
fn splitting_endomorphism(x: &ModuleRep, basis: &[GradedMap]) -> Option<GradedMap> {
    let f = x.field();
    let id = GradedMap::identity(x);
    let shifted = |u: &GradedMap| -> Option<GradedMap> {
        if splits(u) {
            return Some(u.clone());
        }
        for lam in eigen_guesses(u) {
            let v = u.sub(&id.scale(&lam));
            if splits(&v) {
                return Some(v);
            }
        }
        None
    };
    for u in basis {
        if let Some(v) = shifted(u) {
            return Some(v);
        }
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if let Some(v) = shifted(&basis[i].add(&basis[j])) {
                return Some(v);
            }
        }
    }
    // Endomorphisms killing a basis vector are never invertible.
    for p in 0..x.dim() {
        let cols: Vec<Vec<CycNum>> = basis.iter().map(|u| u.to_dense(f).column(p)).collect();
        let m = Mat::from_columns(f, x.dim(), &cols);
        for c in m.kernel() {
            let u = GradedMap::combine(basis, &c);
            if !u.is_nilpotent() {
                return Some(u);
            }
        }
    }
    None
}

/// Idempotent `psi (phi psi)^-1 phi` factoring through a hint module.
fn hint_idempotent(x: &ModuleRep, hints: &[ModuleRep]) -> Option<GradedMap> {
    for c in hints {
        if c.dim() >= x.dim() {
            continue;
        }
        let into = hom_space(c, x);
        if into.is_empty() {
            continue;
        }
        let out = hom_space(x, c);
        for psi in &into.basis {
            for phi in &out.basis {
                if let Some(inv) = phi.compose(psi).inverse() {
                    let e = psi.compose(&inv).compose(phi);
                    return Some(refine_idempotent(&e));
                }
            }
        }
    }
    None
}

fn split_by_idempotent(x: &ModuleRep, e: &GradedMap) -> Result<[(ModuleRep, GradedMap); 2], ModError> {
    let id = GradedMap::identity(x);
    let f = x.field();
    let comp = id.sub(e);
    let image = |g: &GradedMap| -> BTreeMap<Weight, Mat> {
        x.blocks()
            .iter()
            .filter_map(|(w, r)| {
                let cs = g.block_for(*w)?.column_space();
                (!cs.is_empty()).then(|| (*w, Mat::from_columns(f, r.len(), &cs)))
            })
            .collect()
    };
    Ok([x.module_on(image(e))?, x.module_on(image(&comp))?])
}

/// Decompose `m` into indecomposable summands. `hints` are modules that
/// may occur as summands; they are only used when the endomorphism search
/// fails.
pub fn split_module(m: &ModuleRep, hints: &[ModuleRep]) -> Result<Vec<Summand>, ModError> {
    let mut work: Vec<(ModuleRep, GradedMap)> = Vec::new();
    for delta in m.delta_classes() {
        if let Some(p) = restrict_to_delta(m, delta)? {
            work.push(p);
        }
    }
    let mut done = Vec::new();
    while let Some((x, emb)) = work.pop() {
        if x.dim() == 0 {
            continue;
        }
        let e = hom_space(&x, &x);
        if e.dim() == 1 || gram_rank(&e.basis) == 1 {
            done.push(Summand { module: x, embed: emb });
            continue;
        }
        let pieces = match splitting_endomorphism(&x, &e.basis) {
            Some(u) => fitting(&x, &u)?,
            None => match hint_idempotent(&x, hints) {
                Some(idem) => split_by_idempotent(&x, &idem)?,
                None => return Err(ModError::NonSplitSemisimpleQuotient(x.dim())),
            },
        };
        for (y, ey) in pieces {
            if y.dim() > 0 {
                work.push((y, emb.compose(&ey)));
            }
        }
    }
    Ok(done)
}
