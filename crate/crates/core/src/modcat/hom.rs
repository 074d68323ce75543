//! Module homomorphisms and isomorphism tests.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclo::{CycField, CycNum};
use crate::linalg::{Mat, SparseSolver};

use super::module::{shift, GradedMap, LayoutBlock, ModuleRep, Weight};

/// A basis of `Hom(M, N)`; every element shares one block layout.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub field: &'static CycField,
    pub src_dim: usize,
    pub dst_dim: usize,
    pub layout: Arc<Vec<LayoutBlock>>,
    pub basis: Vec<GradedMap>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn combine(&self, coeffs: &[CycNum]) -> GradedMap {
        if self.basis.is_empty() {
            return self.zero();
        }
        GradedMap::combine(&self.basis, coeffs)
    }

    pub fn zero(&self) -> GradedMap {
        GradedMap {
            field: self.field,
            rows: self.dst_dim,
            cols: self.src_dim,
            layout: self.layout.clone(),
            blocks: self
                .layout
                .iter()
                .map(|b| Mat::zeros(self.field, b.dst.len(), b.src.len()))
                .collect(),
        }
    }

    /// Deterministic search for an element satisfying `pred`: basis
    /// elements, their sum, then seeded random combinations with growing
    /// coefficient bounds.
    pub fn find(&self, tries: usize, pred: impl Fn(&GradedMap) -> bool) -> Option<GradedMap> {
        if self.basis.is_empty() {
            let z = self.zero();
            return pred(&z).then_some(z);
        }
        for b in &self.basis {
            if pred(b) {
                return Some(b.clone());
            }
        }
        let f = self.field;
        let k = self.basis.len();
        if k == 1 {
            return None;
        }
        let all = self.combine(&vec![f.one(); k]);
        if pred(&all) {
            return Some(all);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6772_0001 + k as u64);
        for t in 0..tries {
            let bound: i64 = [3, 10, 100, 1000][(4 * t / tries.max(1)).min(3)];
            let coeffs: Vec<CycNum> = (0..k).map(|_| f.int(rng.gen_range(-bound..=bound))).collect();
            let g = self.combine(&coeffs);
            if pred(&g) {
                return Some(g);
            }
        }
        None
    }
}

fn op_block(m: &ModuleRep, op: &Mat, w: Weight, w2: Weight) -> Option<Mat> {
    let src = m.block(w)?;
    let dst = m.block(w2)?;
    let rows: Vec<usize> = dst.collect();
    let cols: Vec<usize> = src.collect();
    let b = op.submatrix(&rows, &cols);
    (!b.is_zero()).then_some(b)
}

/// Basis of `Hom_H(M, N)` as weight-preserving maps commuting with `a` and `d`.
pub fn hom_space(m: &ModuleRep, n: &ModuleRep) -> HomSpace {
    let f = m.field();
    let nn = f.n();
    let mut layout = Vec::new();
    let mut base: BTreeMap<Weight, (usize, usize, usize)> = BTreeMap::new();
    let mut nvars = 0;
    for (w, src) in m.blocks() {
        if let Some(dst) = n.block(*w) {
            base.insert(*w, (nvars, dst.len(), src.len()));
            nvars += dst.len() * src.len();
            layout.push(LayoutBlock {
                w: *w,
                src: src.clone(),
                dst,
            });
        }
    }
    let var = |w: Weight, i: usize, j: usize| -> usize {
        let (b, _, c) = base[&w];
        b + i * c + j
    };
    let mut solver = SparseSolver::new(f, nvars);
    for (w, src) in m.blocks() {
        for (step, op_m, op_n) in [(1, m.act_a(), n.act_a()), (-1, m.act_d(), n.act_d())] {
            let w2 = shift(nn, *w, step);
            let Some(dst2) = n.block(w2) else { continue };
            let left = if base.contains_key(&w2) { op_block(m, op_m, *w, w2) } else { None };
            let right = if base.contains_key(w) { op_block(n, op_n, *w, w2) } else { None };
            if left.is_none() && right.is_none() {
                continue;
            }
            let mw2 = m.block(w2).map_or(0, |r| r.len());
            let nw = n.block(*w).map_or(0, |r| r.len());
            for i in 0..dst2.len() {
                for j in 0..src.len() {
                    let mut eq = Vec::new();
                    if let Some(l) = &left {
                        for k in 0..mw2 {
                            let c = &l[(k, j)];
                            if !c.is_zero() {
                                eq.push((var(w2, i, k), c.clone()));
                            }
                        }
                    }
                    if let Some(r) = &right {
                        for k in 0..nw {
                            let c = &r[(i, k)];
                            if !c.is_zero() {
                                eq.push((var(*w, k, j), -c));
                            }
                        }
                    }
                    if !eq.is_empty() {
                        solver.push(eq);
                    }
                }
            }
        }
    }
    let layout = Arc::new(layout);
    let basis = solver
        .kernel()
        .into_iter()
        .map(|v| {
            let blocks = layout
                .iter()
                .map(|lb| {
                    let (b0, r, c) = base[&lb.w];
                    let mut blk = Mat::zeros(f, r, c);
                    for i in 0..r {
                        for j in 0..c {
                            blk[(i, j)] = v[b0 + i * c + j].clone();
                        }
                    }
                    blk
                })
                .collect();
            GradedMap {
                field: f,
                rows: n.dim(),
                cols: m.dim(),
                layout: layout.clone(),
                blocks,
            }
        })
        .collect();
    HomSpace {
        field: f,
        src_dim: m.dim(),
        dst_dim: n.dim(),
        layout,
        basis,
    }
}

/// Rank of the trace form `tr(u v)` on a space of endomorphisms; this is
/// the dimension of the space modulo its radical.
pub fn gram_rank(basis: &[GradedMap]) -> usize {
    let k = basis.len();
    if k == 0 {
        return 0;
    }
    let f = basis[0].field();
    let mut g = Mat::zeros(f, k, k);
    for i in 0..k {
        for j in i..k {
            let t = basis[i].trace_of_product(&basis[j]);
            g[(j, i)] = t.clone();
            g[(i, j)] = t;
        }
    }
    g.rank()
}

/// True iff `End(M)` is local.
pub fn is_local(m: &ModuleRep) -> bool {
    let e = hom_space(m, m);
    e.dim() == 1 || gram_rank(&e.basis) == 1
}

#[derive(Clone, Debug)]
pub enum IsoResult {
    Iso(GradedMap),
    NotIso(String),
    Inconclusive,
}

impl IsoResult {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoResult::Iso(_))
    }
}

fn invariants_differ(m: &ModuleRep, n: &ModuleRep) -> Option<String> {
    if m.dim() != n.dim() {
        return Some(format!("dimensions {} and {}", m.dim(), n.dim()));
    }
    if m.weight_multiset() != n.weight_multiset() {
        return Some("weight multisets differ".into());
    }
    None
}

/// Decide `M ≅ N`. Exact when either side has local endomorphism ring.
pub fn is_isomorphic(m: &ModuleRep, n: &ModuleRep) -> IsoResult {
    if let Some(r) = invariants_differ(m, n) {
        return IsoResult::NotIso(r);
    }
    let hmn = hom_space(m, n);
    if hmn.is_empty() {
        return IsoResult::NotIso("no nonzero maps".into());
    }
    let hnm = hom_space(n, m);
    if hnm.dim() != hmn.dim() {
        return IsoResult::NotIso("hom dimension profile differs".into());
    }
    let em = hom_space(m, m);
    let en = hom_space(n, n);
    if em.dim() != en.dim() || em.dim() != hmn.dim() {
        return IsoResult::NotIso("hom dimension profile differs".into());
    }
    if em.dim() == 1 || gram_rank(&em.basis) == 1 {
        return local_pairing(&hmn, &hnm);
    }
    match hmn.find(24, GradedMap::is_invertible) {
        Some(g) => IsoResult::Iso(g),
        None => IsoResult::Inconclusive,
    }
}

/// `M ≅ N` for local `M`, decided by the pairing `Hom(N,M) x Hom(M,N) -> End(M)`.
pub fn local_pairing(hmn: &HomSpace, hnm: &HomSpace) -> IsoResult {
    for phi in &hmn.basis {
        for psi in &hnm.basis {
            if !psi.compose(phi).is_nilpotent() {
                return IsoResult::Iso(phi.clone());
            }
        }
    }
    IsoResult::NotIso("every composite is nilpotent".into())
}

/// Isomorphism test against a module already known to be indecomposable.
pub fn is_isomorphic_to_local(m: &ModuleRep, local: &ModuleRep) -> IsoResult {
    if let Some(r) = invariants_differ(m, local) {
        return IsoResult::NotIso(r);
    }
    let h1 = hom_space(local, m);
    if h1.is_empty() {
        return IsoResult::NotIso("no nonzero maps".into());
    }
    let h2 = hom_space(m, local);
    match local_pairing(&h1, &h2) {
        IsoResult::Iso(phi) => IsoResult::Iso(phi.inverse().expect("injective map of equal dimension")),
        other => other,
    }
}
