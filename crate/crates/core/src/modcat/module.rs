//! Weight-graded module representations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::cyclo::{CycField, CycNum};
use crate::hopf::{rep_validate, GeneratorMatrices, Validation};
use crate::linalg::{Echelon, Mat};

use super::ModError;

/// `(beta, gamma)`: `b` acts by `q^beta`, `c` by `q^gamma`.
pub type Weight = (u8, u8);

/// A finite-dimensional module in a basis of simultaneous `b, c` eigenvectors.
///
/// The basis is kept sorted by weight, so each weight space is a contiguous
/// index range. `a` raises the weight by `(1,1)`, `d` lowers it by `(1,1)`.
#[derive(Clone)]
pub struct ModuleRep {
    field: &'static CycField,
    weights: Vec<Weight>,
    blocks: Vec<(Weight, Range<usize>)>,
    a: Mat,
    d: Mat,
    tag: Option<String>,
}

impl fmt::Debug for ModuleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleRep(dim={}, tag={:?})", self.dim(), self.tag)
    }
}

pub(crate) fn shift(n: u32, w: Weight, k: i64) -> Weight {
    let n = n as i64;
    (
        (w.0 as i64 + k).rem_euclid(n) as u8,
        (w.1 as i64 + k).rem_euclid(n) as u8,
    )
}

impl ModuleRep {
    /// Build from weights and the `a, d` matrices, re-sorting the basis by weight.
    pub fn from_weight_form(
        field: &'static CycField,
        weights: Vec<Weight>,
        a: Mat,
        d: Mat,
        tag: Option<String>,
    ) -> Result<ModuleRep, ModError> {
        let dim = weights.len();
        if a.rows() != dim || a.cols() != dim || d.rows() != dim || d.cols() != dim {
            return Err(ModError::ShapeMismatch);
        }
        let n = field.n() as u8;
        if weights.iter().any(|w| w.0 >= n || w.1 >= n) {
            return Err(ModError::NotWeightGraded);
        }
        let mut perm: Vec<usize> = (0..dim).collect();
        perm.sort_by_key(|&i| weights[i]);
        let sorted = perm.windows(2).all(|w| w[0] < w[1]);
        let (weights, a, d) = if sorted {
            (weights, a, d)
        } else {
            let w2 = perm.iter().map(|&i| weights[i]).collect();
            (w2, a.submatrix(&perm, &perm), d.submatrix(&perm, &perm))
        };
        let m = ModuleRep {
            field,
            blocks: block_ranges(&weights),
            weights,
            a,
            d,
            tag,
        };
        m.check_grading()?;
        Ok(m)
    }

    fn check_grading(&self) -> Result<(), ModError> {
        let n = self.field.n();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !self.a[(i, j)].is_zero() && self.weights[i] != shift(n, self.weights[j], 1) {
                    return Err(ModError::NotWeightGraded);
                }
                if !self.d[(i, j)].is_zero() && self.weights[i] != shift(n, self.weights[j], -1) {
                    return Err(ModError::NotWeightGraded);
                }
            }
        }
        Ok(())
    }

    /// Convert arbitrary generator matrices by diagonalising `b` and `c`.
    pub fn from_generators(g: &GeneratorMatrices, tag: Option<String>) -> Result<ModuleRep, ModError> {
        let f = g.field();
        let dim = g.dim();
        for m in [&g.a, &g.b, &g.c, &g.d] {
            if m.rows() != dim || m.cols() != dim {
                return Err(ModError::ShapeMismatch);
            }
        }
        let n = f.n();
        let mut cols: Vec<Vec<CycNum>> = Vec::new();
        let mut weights = Vec::new();
        for beta in 0..n {
            for gamma in 0..n {
                let mut rows = Vec::new();
                for (m, e) in [(&g.b, beta), (&g.c, gamma)] {
                    let shifted = m.sub(&Mat::identity(f, dim).scale(&f.q_pow(e as i64)));
                    for r in 0..dim {
                        rows.push((0..dim).map(|c| shifted[(r, c)].clone()).collect());
                    }
                }
                for v in Echelon::new(rows, dim).kernel() {
                    cols.push(v);
                    weights.push((beta as u8, gamma as u8));
                }
            }
        }
        if cols.len() != dim {
            return Err(ModError::NotWeightGraded);
        }
        let p = Mat::from_columns(f, dim, &cols);
        let pinv = p.inverse().ok_or(ModError::NotWeightGraded)?;
        let a = pinv.mul(&g.a).mul(&p);
        let d = pinv.mul(&g.d).mul(&p);
        let m = ModuleRep::from_weight_form(f, weights, a, d, tag)?;
        if let Some(rel) = m.first_violation() {
            return Err(ModError::InvalidRepresentation(rel.to_string()));
        }
        Ok(m)
    }

    pub fn to_generators(&self) -> GeneratorMatrices {
        let f = self.field;
        let b: Vec<CycNum> = self.weights.iter().map(|w| f.q_pow(w.0 as i64)).collect();
        let c: Vec<CycNum> = self.weights.iter().map(|w| f.q_pow(w.1 as i64)).collect();
        GeneratorMatrices {
            a: self.a.clone(),
            b: Mat::diagonal(f, &b),
            c: Mat::diagonal(f, &c),
            d: self.d.clone(),
        }
    }

    /// All defining relations hold.
    pub fn validate(&self) -> bool {
        matches!(rep_validate(&self.to_generators()), Ok(Validation::Pass))
    }

    pub fn first_violation(&self) -> Option<&'static str> {
        match rep_validate(&self.to_generators()) {
            Ok(Validation::Fail { relation }) => Some(relation),
            _ => None,
        }
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn blocks(&self) -> &[(Weight, Range<usize>)] {
        &self.blocks
    }

    pub fn block(&self, w: Weight) -> Option<Range<usize>> {
        self.blocks
            .binary_search_by_key(&w, |b| b.0)
            .ok()
            .map(|i| self.blocks[i].1.clone())
    }

    pub fn act_a(&self) -> &Mat {
        &self.a
    }

    pub fn act_d(&self) -> &Mat {
        &self.d
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    /// Weight multiset as a sorted list with multiplicities.
    pub fn weight_multiset(&self) -> Vec<(Weight, usize)> {
        self.blocks.iter().map(|(w, r)| (*w, r.len())).collect()
    }

    /// The invariant `beta - gamma` classes present.
    pub fn delta_classes(&self) -> Vec<u8> {
        let n = self.n() as i64;
        let mut out: Vec<u8> = self
            .weights
            .iter()
            .map(|w| (w.0 as i64 - w.1 as i64).rem_euclid(n) as u8)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// `V(1,s) ⊗ M`: a pure weight shift by `(s, -s)`.
    pub fn twist(&self, s: i64) -> ModuleRep {
        let n = self.n() as i64;
        let weights = self
            .weights
            .iter()
            .map(|w| {
                (
                    (w.0 as i64 + s).rem_euclid(n) as u8,
                    (w.1 as i64 - s).rem_euclid(n) as u8,
                )
            })
            .collect();
        ModuleRep::from_weight_form(self.field, weights, self.a.clone(), self.d.clone(), None)
            .expect("twist preserves grading")
    }

    /// Tensor product through the coproduct `a -> a⊗b + 1⊗a`, `d -> d⊗c + 1⊗d`.
    pub fn tensor(&self, o: &ModuleRep) -> ModuleRep {
        let f = self.field;
        let (dm, dn) = (self.dim(), o.dim());
        let dim = dm * dn;
        let qp: Vec<CycNum> = (0..f.n()).map(|k| f.q_pow(k as i64)).collect();
        let mut weights = Vec::with_capacity(dim);
        for wm in &self.weights {
            for wn in &o.weights {
                weights.push((
                    ((wm.0 as u32 + wn.0 as u32) % f.n()) as u8,
                    ((wm.1 as u32 + wn.1 as u32) % f.n()) as u8,
                ));
            }
        }
        let mut a = Mat::zeros(f, dim, dim);
        let mut d = Mat::zeros(f, dim, dim);
        for i2 in 0..dm {
            for i in 0..dm {
                let am = &self.a[(i2, i)];
                let dmv = &self.d[(i2, i)];
                if am.is_zero() && dmv.is_zero() {
                    continue;
                }
                for j in 0..dn {
                    if !am.is_zero() {
                        a[(i2 * dn + j, i * dn + j)] += &(am * &qp[o.weights[j].0 as usize]);
                    }
                    if !dmv.is_zero() {
                        d[(i2 * dn + j, i * dn + j)] += &(dmv * &qp[o.weights[j].1 as usize]);
                    }
                }
            }
        }
        for j2 in 0..dn {
            for j in 0..dn {
                let an = &o.a[(j2, j)];
                let dnv = &o.d[(j2, j)];
                if an.is_zero() && dnv.is_zero() {
                    continue;
                }
                for i in 0..dm {
                    if !an.is_zero() {
                        a[(i * dn + j2, i * dn + j)] += an;
                    }
                    if !dnv.is_zero() {
                        d[(i * dn + j2, i * dn + j)] += dnv;
                    }
                }
            }
        }
        ModuleRep::from_weight_form(f, weights, a, d, None).expect("tensor preserves grading")
    }

    pub fn direct_sum(parts: &[&ModuleRep]) -> ModuleRep {
        let f = parts[0].field;
        let weights: Vec<Weight> = parts.iter().flat_map(|p| p.weights.iter().copied()).collect();
        let a = Mat::direct_sum(&parts.iter().map(|p| &p.a).collect::<Vec<_>>());
        let d = Mat::direct_sum(&parts.iter().map(|p| &p.d).collect::<Vec<_>>());
        ModuleRep::from_weight_form(f, weights, a, d, None).expect("sum preserves grading")
    }

    /// Apply the action of `a` (or `d`) to a vector.
    pub fn apply_a(&self, v: &[CycNum]) -> Vec<CycNum> {
        self.a.mul_vec(v)
    }

    pub fn apply_d(&self, v: &[CycNum]) -> Vec<CycNum> {
        self.d.mul_vec(v)
    }

    /// Submodule spanned by weight-homogeneous vectors (assumed invariant).
    /// Returns the module and its embedding as a graded map.
    pub fn submodule(&self, gens: &[Vec<CycNum>]) -> Result<(ModuleRep, GradedMap), ModError> {
        let f = self.field;
        let mut by_w: BTreeMap<Weight, Vec<Vec<CycNum>>> = BTreeMap::new();
        for v in gens {
            let w = self.homogeneous_weight(v).ok_or(ModError::NotWeightGraded)?;
            by_w.entry(w).or_default().push(v.clone());
        }
        // Independent basis per weight, kept as local coordinates in the block.
        let mut sub_blocks: BTreeMap<Weight, Mat> = BTreeMap::new();
        for (w, vs) in by_w {
            let r = self.block(w).unwrap();
            let local: Vec<Vec<CycNum>> = vs.iter().map(|v| v[r.clone()].to_vec()).collect();
            let piv = Mat::from_columns(f, r.len(), &local).pivot_columns();
            if piv.is_empty() {
                continue;
            }
            let chosen: Vec<Vec<CycNum>> = piv.iter().map(|&i| local[i].clone()).collect();
            sub_blocks.insert(w, Mat::from_columns(f, r.len(), &chosen));
        }
        self.module_on(sub_blocks)
    }

    fn homogeneous_weight(&self, v: &[CycNum]) -> Option<Weight> {
        let mut w = None;
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                match w {
                    None => w = Some(self.weights[i]),
                    Some(w0) if w0 != self.weights[i] => return None,
                    _ => {}
                }
            }
        }
        w.or_else(|| self.weights.first().copied())
    }

    /// Module structure on an invariant subspace given blockwise by column bases.
    pub fn module_on(&self, sub: BTreeMap<Weight, Mat>) -> Result<(ModuleRep, GradedMap), ModError> {
        let f = self.field;
        let n = self.n();
        let mut weights = Vec::new();
        let mut offsets = BTreeMap::new();
        for (w, b) in &sub {
            offsets.insert(*w, weights.len());
            weights.extend(std::iter::repeat(*w).take(b.cols()));
        }
        let dim = weights.len();
        let mut a = Mat::zeros(f, dim, dim);
        let mut d = Mat::zeros(f, dim, dim);
        for (w, b) in &sub {
            let src = self.block(*w).unwrap();
            for (op, target, out) in [(&self.a, 1i64, &mut a), (&self.d, -1, &mut d)] {
                let w2 = shift(n, *w, target);
                let Some(dst) = self.block(w2) else { continue };
                let opb = op.submatrix(&dst.clone().collect::<Vec<_>>(), &src.clone().collect::<Vec<_>>());
                let img = opb.mul(b);
                if img.is_zero() {
                    continue;
                }
                let Some(b2) = sub.get(&w2) else {
                    return Err(ModError::NotInvariant);
                };
                for j in 0..b.cols() {
                    let col = img.column(j);
                    let x = b2.solve(&col).ok_or(ModError::NotInvariant)?;
                    for (i, xi) in x.into_iter().enumerate() {
                        out[(offsets[&w2] + i, offsets[w] + j)] = xi;
                    }
                }
            }
        }
        let m = ModuleRep::from_weight_form(f, weights, a, d, None)?;
        let layout: Vec<LayoutBlock> = sub
            .keys()
            .map(|w| LayoutBlock {
                w: *w,
                src: m.block(*w).unwrap(),
                dst: self.block(*w).unwrap(),
            })
            .collect();
        let embed = GradedMap {
            field: self.field,
            rows: self.dim(),
            cols: m.dim(),
            layout: Arc::new(layout),
            blocks: sub.into_values().collect(),
        };
        Ok((m, embed))
    }

    /// Quotient by an invariant subspace given by weight-homogeneous vectors.
    /// Returns the quotient module and the projection `M -> M/S`.
    pub fn quotient(&self, gens: &[Vec<CycNum>]) -> Result<(ModuleRep, GradedMap), ModError> {
        let f = self.field;
        let n = self.n();
        let mut by_w: BTreeMap<Weight, Vec<Vec<CycNum>>> = BTreeMap::new();
        for v in gens {
            if v.iter().all(CycNum::is_zero) {
                continue;
            }
            let w = self.homogeneous_weight(v).ok_or(ModError::NotWeightGraded)?;
            let r = self.block(w).unwrap();
            by_w.entry(w).or_default().push(v[r].to_vec());
        }
        // Per block: a basis [S | C] of the weight space and its inverse.
        struct Split {
            s: usize,
            inv: Mat,
            comp: Vec<usize>,
        }
        let mut splits: BTreeMap<Weight, Split> = BTreeMap::new();
        for (w, r) in &self.blocks {
            let k = r.len();
            let svecs = by_w.remove(w).unwrap_or_default();
            let mut cols: Vec<Vec<CycNum>> = Vec::new();
            if !svecs.is_empty() {
                let piv = Mat::from_columns(f, k, &svecs).pivot_columns();
                cols.extend(piv.iter().map(|&i| svecs[i].clone()));
            }
            let s = cols.len();
            for e in 0..k {
                let mut v = vec![f.zero(); k];
                v[e] = f.one();
                let mut trial = cols.clone();
                trial.push(v.clone());
                if Mat::from_columns(f, k, &trial).rank() == trial.len() {
                    cols.push(v);
                }
            }
            let basis = Mat::from_columns(f, k, &cols);
            let inv = basis.inverse().expect("completed basis");
            let comp = (s..k).collect();
            splits.insert(*w, Split { s, inv, comp });
        }
        let mut weights = Vec::new();
        let mut offsets = BTreeMap::new();
        for (w, sp) in &splits {
            offsets.insert(*w, weights.len());
            weights.extend(std::iter::repeat(*w).take(sp.comp.len()));
        }
        let dim = weights.len();
        let mut a = Mat::zeros(f, dim, dim);
        let mut d = Mat::zeros(f, dim, dim);
        // Image of complement vector e_j (standard vector in block) under op,
        // expressed in the target block's [S|C] basis, keep C coordinates.
        for (w, sp) in &splits {
            let src = self.block(*w).unwrap();
            // basis columns of the source complement in local coords: inverse of inv restricted
            let basis = sp.inv.inverse().unwrap();
            for (op, t, out) in [(&self.a, 1i64, &mut a), (&self.d, -1, &mut d)] {
                let w2 = shift(n, *w, t);
                let Some(dst) = self.block(w2) else { continue };
                let sp2 = &splits[&w2];
                let opb = op.submatrix(&dst.clone().collect::<Vec<_>>(), &src.clone().collect::<Vec<_>>());
                for (jj, &j) in sp.comp.iter().enumerate() {
                    let col = basis.column(j);
                    let img = opb.mul_vec(&col);
                    let coords = sp2.inv.mul_vec(&img);
                    for (ii, &i) in sp2.comp.iter().enumerate() {
                        out[(offsets[&w2] + ii, offsets[w] + jj)] = coords[i].clone();
                    }
                }
            }
        }
        let m = ModuleRep::from_weight_form(f, weights, a, d, None)?;
        let mut layout = Vec::new();
        let mut blocks = Vec::new();
        for (w, sp) in &splits {
            if sp.comp.is_empty() {
                continue;
            }
            let rows: Vec<usize> = sp.comp.clone();
            let cols: Vec<usize> = (0..sp.inv.cols()).collect();
            blocks.push(sp.inv.submatrix(&rows, &cols));
            layout.push(LayoutBlock {
                w: *w,
                src: self.block(*w).unwrap(),
                dst: m.block(*w).unwrap(),
            });
            let _ = sp.s;
        }
        let proj = GradedMap {
            field: self.field,
            rows: m.dim(),
            cols: self.dim(),
            layout: Arc::new(layout),
            blocks,
        };
        Ok((m, proj))
    }

    /// Vectors spanning the image of a graded map into this module.
    pub fn image_vectors(&self, map: &GradedMap) -> Vec<Vec<CycNum>> {
        let f = self.field;
        let mut out = Vec::new();
        for (lb, m) in map.layout.iter().zip(&map.blocks) {
            for col in m.column_space() {
                let mut v = vec![f.zero(); self.dim()];
                for (i, x) in col.into_iter().enumerate() {
                    v[lb.dst.start + i] = x;
                }
                out.push(v);
            }
        }
        out
    }

    /// Vectors spanning the kernel of a graded map out of this module.
    pub fn kernel_vectors(&self, map: &GradedMap) -> Vec<Vec<CycNum>> {
        let f = self.field;
        let mut out = Vec::new();
        for (w, r) in &self.blocks {
            let local: Vec<Vec<CycNum>> = match map.block_for(*w) {
                Some(m) => {
                    let k = m.kernel();
                    if m.rows() == 0 {
                        identity_cols(f, r.len())
                    } else {
                        k
                    }
                }
                None => identity_cols(f, r.len()),
            };
            for col in local {
                let mut v = vec![f.zero(); self.dim()];
                for (i, x) in col.into_iter().enumerate() {
                    v[r.start + i] = x;
                }
                out.push(v);
            }
        }
        out
    }
}

fn identity_cols(f: &'static CycField, k: usize) -> Vec<Vec<CycNum>> {
    (0..k)
        .map(|i| {
            let mut v = vec![f.zero(); k];
            v[i] = f.one();
            v
        })
        .collect()
}

fn block_ranges(weights: &[Weight]) -> Vec<(Weight, Range<usize>)> {
    let mut out: Vec<(Weight, Range<usize>)> = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        match out.last_mut() {
            Some((lw, r)) if lw == w => r.end = i + 1,
            _ => out.push((*w, i..i + 1)),
        }
    }
    out
}

/// One weight block of a graded map: `dst` rows × `src` columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayoutBlock {
    pub w: Weight,
    pub src: Range<usize>,
    pub dst: Range<usize>,
}

/// A weight-preserving linear map stored blockwise.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub field: &'static CycField,
    pub rows: usize,
    pub cols: usize,
    pub layout: Arc<Vec<LayoutBlock>>,
    pub blocks: Vec<Mat>,
}

impl GradedMap {
    pub fn block_for(&self, w: Weight) -> Option<&Mat> {
        self.layout
            .iter()
            .position(|b| b.w == w)
            .map(|i| &self.blocks[i])
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn identity(m: &ModuleRep) -> GradedMap {
        let f = m.field();
        let layout: Vec<LayoutBlock> = m
            .blocks()
            .iter()
            .map(|(w, r)| LayoutBlock {
                w: *w,
                src: r.clone(),
                dst: r.clone(),
            })
            .collect();
        let blocks = m.blocks().iter().map(|(_, r)| Mat::identity(f, r.len())).collect();
        GradedMap {
            field: f,
            rows: m.dim(),
            cols: m.dim(),
            layout: Arc::new(layout),
            blocks,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Mat::is_zero)
    }

    pub fn to_dense(&self, field: &'static CycField) -> Mat {
        let mut out = Mat::zeros(field, self.rows, self.cols);
        for (lb, m) in self.layout.iter().zip(&self.blocks) {
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out[(lb.dst.start + i, lb.src.start + j)] = m[(i, j)].clone();
                }
            }
        }
        out
    }

    /// Linear combination of maps sharing one layout.
    pub fn combine(maps: &[GradedMap], coeffs: &[CycNum]) -> GradedMap {
        let mut out = maps[0].scale(&coeffs[0]);
        for (m, c) in maps.iter().zip(coeffs).skip(1) {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.blocks.iter_mut().zip(&m.blocks) {
                o.add_scaled(b, c);
            }
        }
        out
    }

    pub fn scale(&self, c: &CycNum) -> GradedMap {
        GradedMap {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            layout: self.layout.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    pub fn add(&self, o: &GradedMap) -> GradedMap {
        let mut out = self.clone();
        let one = self.field().one();
        for (b, ob) in out.blocks.iter_mut().zip(&o.blocks) {
            b.add_scaled(ob, &one);
        }
        out
    }

    pub fn sub(&self, o: &GradedMap) -> GradedMap {
        let mut out = self.clone();
        let m1 = -self.field().one();
        for (b, ob) in out.blocks.iter_mut().zip(&o.blocks) {
            b.add_scaled(ob, &m1);
        }
        out
    }

    /// `self ∘ o`, where `o: X -> Y` and `self: Y -> Z`.
    pub fn compose(&self, o: &GradedMap) -> GradedMap {
        let f = self.field();
        let mut layout = Vec::new();
        let mut blocks = Vec::new();
        for (lb, m) in o.layout.iter().zip(&o.blocks) {
            if let Some(i) = self.layout.iter().position(|b| b.w == lb.w) {
                let sb = &self.layout[i];
                layout.push(LayoutBlock {
                    w: lb.w,
                    src: lb.src.clone(),
                    dst: sb.dst.clone(),
                });
                blocks.push(self.blocks[i].mul(m));
            }
        }
        GradedMap {
            field: f,
            rows: self.rows,
            cols: o.cols,
            layout: Arc::new(layout),
            blocks,
        }
    }

    /// Endomorphism power.
    pub fn pow(&self, e: u64) -> GradedMap {
        GradedMap {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            layout: self.layout.clone(),
            blocks: self.blocks.iter().map(|b| b.pow(e)).collect(),
        }
    }

    pub fn trace(&self) -> CycNum {
        let mut t = self.field().zero();
        for b in &self.blocks {
            t += &b.trace();
        }
        t
    }

    /// `tr(self ∘ o)` for endomorphisms on one layout.
    pub fn trace_of_product(&self, o: &GradedMap) -> CycNum {
        let mut t = self.field().zero();
        for (b, ob) in self.blocks.iter().zip(&o.blocks) {
            t += &b.trace_of_product(ob);
        }
        t
    }

    /// Invertible iff every weight space is covered by a square invertible block.
    pub fn is_invertible(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let covered: usize = self.layout.iter().map(|b| b.src.len()).sum();
        covered == self.cols
            && self
                .layout
                .iter()
                .zip(&self.blocks)
                .all(|(lb, m)| lb.src.len() == lb.dst.len() && m.is_invertible())
    }

    pub fn is_nilpotent(&self) -> bool {
        self.blocks.iter().all(|b| b.rows() == 0 || b.pow(b.rows() as u64).is_zero())
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Mat::rank).sum()
    }

    pub fn inverse(&self) -> Option<GradedMap> {
        if !self.is_invertible() {
            return None;
        }
        let layout: Vec<LayoutBlock> = self
            .layout
            .iter()
            .map(|b| LayoutBlock {
                w: b.w,
                src: b.dst.clone(),
                dst: b.src.clone(),
            })
            .collect();
        Some(GradedMap {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            layout: Arc::new(layout),
            blocks: self.blocks.iter().map(|b| b.inverse().unwrap()).collect(),
        })
    }
}
