//! Explicit models of every indecomposable family, plus the decomposition
//! oracle built on top of them.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::cyclo::{CycField, CycNum};
use crate::linalg::Mat;

use super::hom::{hom_space, is_isomorphic, is_isomorphic_to_local, IsoResult};
use super::label::{EtaParam, IndecLabel, Sign};
use super::module::{shift, GradedMap, ModuleRep, Weight};
use super::split::{split_module, witness_matrix, DecompResult};
use super::ModError;

fn w(n: u32, b: i64, g: i64) -> Weight {
    let n = n as i64;
    (b.rem_euclid(n) as u8, g.rem_euclid(n) as u8)
}

/// `V(l,r)` in its standard basis.
pub fn build_simple(field: &'static CycField, l: u32, r: i64) -> Result<ModuleRep, ModError> {
    let n = field.n();
    IndecLabel::simple(n, l, r)?;
    let dim = l as usize;
    let mut a = Mat::zeros(field, dim, dim);
    let mut d = Mat::zeros(field, dim, dim);
    for i in 1..dim {
        a[(i, i - 1)] = field.one();
        d[(i - 1, i)] = field.alpha(i as u32, l as i64);
    }
    let weights = (1..=l as i64).map(|i| w(n, r + i - 1, i - r - l as i64)).collect();
    ModuleRep::from_weight_form(field, weights, a, d, Some(format!("V({l},{})", r.rem_euclid(n as i64))))
}

/// `M_s(l,r,eta)` with the wrap scalar replaced by an `s x s` Jordan block
/// (for finite `eta`) or with a nilpotent Jordan block on the broken
/// `a`-arrow (for `eta = inf`). Not validated beyond the defining relations.
pub fn build_jordan_band(
    field: &'static CycField,
    s: u32,
    l: u32,
    r: i64,
    eta: &EtaParam,
) -> Result<ModuleRep, ModError> {
    let n = field.n();
    IndecLabel::band(n, s, l, r, eta.clone())?;
    let (nn, s) = (n as usize, s as usize);
    let dim = nn * s;
    let idx = |i: usize, k: usize| (i - 1) * s + k;
    let mut a = Mat::zeros(field, dim, dim);
    let mut d = Mat::zeros(field, dim, dim);
    let ql = field.q_pow(l as i64);
    let broken = nn - l as usize;
    for k in 0..s {
        for i in 1..nn {
            match eta {
                EtaParam::Inf if i == broken => {
                    if k > 0 {
                        a[(idx(i + 1, k - 1), idx(i, k))] = field.one();
                    }
                }
                _ => a[(idx(i + 1, k), idx(i, k))] = field.one(),
            }
        }
        for i in 2..=nn {
            d[(idx(i - 1, k), idx(i, k))] = field.alpha(i as u32 - 1, (n - l) as i64);
        }
        match eta {
            EtaParam::Inf => d[(idx(nn, k), idx(1, k))] = field.one(),
            EtaParam::Val(e) => {
                d[(idx(nn, k), idx(1, k))] = e * &ql;
                if k > 0 {
                    d[(idx(nn, k - 1), idx(1, k))] = ql.clone();
                }
            }
        }
    }
    let mut weights = Vec::with_capacity(dim);
    for i in 1..=nn as i64 {
        for _ in 0..s {
            weights.push(w(n, r + l as i64 + i - 1, i - r));
        }
    }
    let tag = IndecLabel::band(n, s as u32, l, r, eta.clone())?.to_string();
    let m = ModuleRep::from_weight_form(field, weights, a, d, Some(tag))?;
    match m.first_violation() {
        None => Ok(m),
        Some(rel) => Err(ModError::InvalidRepresentation(rel.to_string())),
    }
}

/// `M_1(l,r,eta)`.
pub fn build_band1(field: &'static CycField, l: u32, r: i64, eta: &EtaParam) -> Result<ModuleRep, ModError> {
    build_jordan_band(field, 1, l, r, eta)
}

/// The band parameter read off a module whose `v_1` weight is
/// `(r+l, 1-r)`: `tr(A^-1 D) / (s q^l)` with `A = a^(n-1)` and `D = d`
/// between the `v_1` and `v_n` weight spaces; `inf` when `A` is singular.
pub fn band_invariant(m: &ModuleRep, l: u32, r: u32) -> Option<EtaParam> {
    let f = m.field();
    let n = f.n();
    let w1 = w(n, (r + l) as i64, 1 - r as i64);
    let wn = shift(n, w1, -1);
    let b1 = m.block(w1)?;
    let bn = m.block(wn)?;
    if b1.len() != bn.len() {
        return None;
    }
    let s = b1.len();
    let rows: Vec<usize> = bn.collect();
    let cols: Vec<usize> = b1.collect();
    let a = m.act_a().pow(n as u64 - 1).submatrix(&rows, &cols);
    let d = m.act_d().submatrix(&rows, &cols);
    match a.inverse() {
        None => Some(EtaParam::Inf),
        Some(ai) => {
            let t = ai.mul(&d).trace();
            let den = &f.int(s as i64) * &f.q_pow(l as i64);
            Some(EtaParam::Val(t.checked_div(&den).ok()?))
        }
    }
}

/// Closure of a set of band parameters under `eta -> -eta q^l` and
/// `eta -> eta q^(1-l) (l)_q` (and its inverse), to bounded depth.
pub fn eta_closure(n: u32, seeds: &[EtaParam], depth: usize) -> HashSet<EtaParam> {
    let mut seen: HashSet<EtaParam> = seeds.iter().cloned().collect();
    let mut frontier: Vec<EtaParam> = seen.iter().cloned().collect();
    for _ in 0..depth {
        let mut next = Vec::new();
        for e in &frontier {
            for l in 1..n {
                for x in [e.omega_shift(l), e.simple_shift(l), e.simple_unshift(l)] {
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
        }
        frontier = next;
        if frontier.is_empty() || seen.len() > 20_000 {
            break;
        }
    }
    seen
}

type Multiset = Vec<(IndecLabel, usize)>;

fn to_multiset(labels: Vec<IndecLabel>) -> Multiset {
    let mut m: BTreeMap<IndecLabel, usize> = BTreeMap::new();
    for l in labels {
        *m.entry(l).or_default() += 1;
    }
    m.into_iter().collect()
}

/// Per-`n` catalogue of module models with memoised derived objects.
/// Every family is stored at `r = 0` and twisted on demand.
pub struct Catalog {
    field: &'static CycField,
    proj0: Vec<ModuleRep>,
    syz0: Mutex<HashMap<(Sign, u32, u32), ModuleRep>>,
    band0: Mutex<HashMap<(u32, u32, EtaParam), Result<ModuleRep, ModError>>>,
    products: Mutex<HashMap<(IndecLabel, IndecLabel), Multiset>>,
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Catalog(n={})", self.n())
    }
}

static REGISTRY: OnceLock<Mutex<HashMap<u32, &'static Catalog>>> = OnceLock::new();

impl Catalog {
    /// Shared catalogue for `n`, built on first use.
    pub fn get(n: u32) -> Result<&'static Catalog, ModError> {
        let reg = REGISTRY.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = reg.lock().unwrap().get(&n) {
            return Ok(c);
        }
        let c: &'static Catalog = Box::leak(Box::new(Catalog::new(n)?));
        Ok(*reg.lock().unwrap().entry(n).or_insert(c))
    }

    pub fn new(n: u32) -> Result<Catalog, ModError> {
        if n < 3 {
            return Err(ModError::Range(format!("n = {n}: need n >= 3")));
        }
        let field = CycField::get(n);
        let mut cat = Catalog {
            field,
            proj0: Vec::new(),
            syz0: Mutex::new(HashMap::new()),
            band0: Mutex::new(HashMap::new()),
            products: Mutex::new(HashMap::new()),
        };
        cat.proj0 = cat.build_projectives()?;
        Ok(cat)
    }

    /// Odd lengths from `V(n,1) ⊗ V(n,0)`, even lengths from `ΩV(1,0) ⊗ V(n,0)`.
    fn build_projectives(&self) -> Result<Vec<ModuleRep>, ModError> {
        let n = self.n();
        let f = self.field;
        let mut found: Vec<Option<ModuleRep>> = vec![None; n as usize - 1];
        let vn0 = build_simple(f, n, 0)?;
        let harvest = |x: &ModuleRep, found: &mut Vec<Option<ModuleRep>>| -> Result<(), ModError> {
            for part in split_module(x, &[])? {
                let p = part.module;
                if p.dim() != 2 * n as usize {
                    continue;
                }
                let top = self.top(&p);
                if let [(IndecLabel::Simple { l, r }, 1)] = top.as_slice() {
                    if *l < n && found[*l as usize - 1].is_none() {
                        let l = *l;
                        found[l as usize - 1] = Some(p.twist(-(*r as i64)).with_tag(format!("P({l},0)")));
                    }
                }
            }
            Ok(())
        };
        harvest(&build_simple(f, n, 1)?.tensor(&vn0), &mut found)?;
        let p10 = found[0].clone().ok_or_else(|| ModError::ConstructionFailed("P(1,0)".into()))?;
        let v10 = build_simple(f, 1, 0)?;
        let cover = hom_space(&p10, &v10)
            .find(8, |g| g.rank() == 1)
            .ok_or(ModError::CoverLiftFailed)?;
        let (omega, _) = p10.submodule(&p10.kernel_vectors(&cover))?;
        harvest(&omega.tensor(&vn0), &mut found)?;
        found
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| ModError::ConstructionFailed(format!("P({},0)", i + 1))))
            .collect()
    }

    pub fn n(&self) -> u32 {
        self.field.n()
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn simple(&self, l: u32, r: i64) -> Result<ModuleRep, ModError> {
        build_simple(self.field, l, r)
    }

    /// `P(l,r)`; `P(n,r) = V(n,r)`.
    pub fn projective(&self, l: u32, r: i64) -> Result<ModuleRep, ModError> {
        let n = self.n();
        if l == n {
            return self.simple(l, r);
        }
        IndecLabel::proj(n, l, r)?;
        let tag = format!("P({l},{})", r.rem_euclid(n as i64));
        Ok(self.proj0[l as usize - 1].twist(r).with_tag(tag))
    }

    /// `M_s(l,r,eta)`; for `s >= 2` the Jordan model must pass the tower gates.
    pub fn band(&self, s: u32, l: u32, r: i64, eta: &EtaParam) -> Result<ModuleRep, ModError> {
        let n = self.n();
        let label = IndecLabel::band(n, s, l, r, eta.clone())?;
        let key = (s, l, eta.clone());
        let cached = self.band0.lock().unwrap().get(&key).cloned();
        let base = match cached {
            Some(b) => b,
            None => {
                let b = build_jordan_band(self.field, s, l, 0, eta).and_then(|m| {
                    if s >= 2 {
                        self.validate_band_tower(&m, s, l, 0, eta)
                            .map_err(ModError::ConstructionFailed)?;
                    }
                    Ok(m)
                });
                self.band0.lock().unwrap().insert(key, b.clone());
                b
            }
        };
        Ok(base?.twist(r).with_tag(label.to_string()))
    }

    /// Gates for an `M_s` model: indecomposable; `M_i ↪ M_s` with quotient
    /// `M_(s-i)`; `Ω M_s ≅ M_s(n-l, r+l, -eta q^l)`; `M_s ↪ sP(l,r)`.
    pub fn validate_band_tower(
        &self,
        m: &ModuleRep,
        s: u32,
        l: u32,
        r: i64,
        eta: &EtaParam,
    ) -> Result<(), String> {
        let n = self.n();
        let gate = |g: &str| format!("{g} for M_{s}({l},{r};eta={eta})");
        if !super::hom::is_local(m) {
            return Err(gate("(i) indecomposable"));
        }
        for i in 1..s {
            let mi = self.band(i, l, r, eta).map_err(|e| gate(&format!("(ii) M_{i}: {e}")))?;
            let rest = self.band(s - i, l, r, eta).map_err(|e| gate(&format!("(ii) M_{}: {e}", s - i)))?;
            let inj = hom_space(&mi, m)
                .find(16, |g| g.rank() == mi.dim())
                .ok_or_else(|| gate(&format!("(ii) no injection of M_{i}")))?;
            let (quot, _) = m
                .quotient(&m.image_vectors(&inj))
                .map_err(|e| gate(&format!("(ii) quotient: {e}")))?;
            if !is_isomorphic_to_local(&quot, &rest).is_iso() {
                return Err(gate(&format!("(ii) quotient by M_{i}")));
            }
        }
        let om = self.syzygy(m).map_err(|e| gate(&format!("(iii) {e}")))?;
        let target = build_jordan_band(self.field, s, n - l, r + l as i64, &eta.omega_shift(l))
            .map_err(|e| gate(&format!("(iii) {e}")))?;
        if !is_isomorphic(&om, &target).is_iso() {
            return Err(gate("(iii) syzygy"));
        }
        let p = self.projective(l, r).map_err(|e| e.to_string())?;
        let sp = ModuleRep::direct_sum(&vec![&p; s as usize]);
        if hom_space(m, &sp).find(24, |g| g.rank() == m.dim()).is_none() {
            return Err(gate("(iv) embedding into sP(l,r)"));
        }
        Ok(())
    }

    fn syz_base(&self, sign: Sign, m: u32, l: u32) -> Result<ModuleRep, ModError> {
        if m == 0 {
            return self.simple(l, 0);
        }
        if let Some(x) = self.syz0.lock().unwrap().get(&(sign, m, l)) {
            return Ok(x.clone());
        }
        let prev = self.syz_base(sign, m - 1, l)?;
        let x = match sign {
            Sign::Plus => self.syzygy(&prev)?,
            Sign::Minus => self.cosyzygy(&prev)?,
        };
        self.syz0.lock().unwrap().insert((sign, m, l), x.clone());
        Ok(x)
    }

    /// `Omega^(±m) V(l,r)`.
    pub fn syz(&self, sign: Sign, m: u32, l: u32, r: i64) -> Result<ModuleRep, ModError> {
        let label = IndecLabel::syz(self.n(), sign, m, l, r)?;
        Ok(self.syz_base(sign, m, l)?.twist(r).with_tag(label.to_string()))
    }

    pub fn build(&self, label: &IndecLabel) -> Result<ModuleRep, ModError> {
        match label {
            IndecLabel::Simple { l, r } => self.simple(*l, *r as i64),
            IndecLabel::Proj { l, r } => self.projective(*l, *r as i64),
            IndecLabel::Syz { sign, m, l, r } => self.syz(*sign, *m, *l, *r as i64),
            IndecLabel::Band { s, l, r, eta } => self.band(*s, *l, *r as i64, eta),
        }
    }

    fn simples_in(&self, m: &ModuleRep) -> Vec<(u32, u32, ModuleRep)> {
        let n = self.n();
        let mut out = Vec::new();
        for l in 1..=n {
            for r in 0..n {
                let s = self.simple(l, r as i64).unwrap();
                if s.weights().iter().all(|w| m.block(*w).is_some()) {
                    out.push((l, r, s));
                }
            }
        }
        out
    }

    /// Composition factors of `M/rad M`.
    pub fn top(&self, m: &ModuleRep) -> Vec<(IndecLabel, usize)> {
        self.simples_in(m)
            .into_iter()
            .filter_map(|(l, r, s)| {
                let k = hom_space(m, &s).dim();
                (k > 0).then(|| (IndecLabel::Simple { l, r }, k))
            })
            .collect()
    }

    /// Composition factors of `soc M`.
    pub fn socle(&self, m: &ModuleRep) -> Vec<(IndecLabel, usize)> {
        self.simples_in(m)
            .into_iter()
            .filter_map(|(l, r, s)| {
                let k = hom_space(&s, m).dim();
                (k > 0).then(|| (IndecLabel::Simple { l, r }, k))
            })
            .collect()
    }

    pub fn top_and_socle(&self, m: &ModuleRep) -> (Vec<(IndecLabel, usize)>, Vec<(IndecLabel, usize)>) {
        (self.top(m), self.socle(m))
    }

    /// `rad M`, the intersection of kernels of all maps to simples.
    pub fn radical(&self, m: &ModuleRep) -> Result<(ModuleRep, GradedMap), ModError> {
        let f = self.field;
        let mut rows: BTreeMap<Weight, Vec<Vec<CycNum>>> = BTreeMap::new();
        for (_, _, s) in self.simples_in(m) {
            for g in hom_space(m, &s).basis {
                for (lb, b) in g.layout.iter().zip(&g.blocks) {
                    let e = rows.entry(lb.w).or_default();
                    for i in 0..b.rows() {
                        e.push((0..b.cols()).map(|j| b[(i, j)].clone()).collect());
                    }
                }
            }
        }
        let mut sub = BTreeMap::new();
        for (wt, r) in m.blocks() {
            let k = match rows.get(wt) {
                None => Mat::identity(f, r.len()).columns(),
                Some(rs) => {
                    let mat = Mat::from_columns(f, r.len(), rs).transpose();
                    mat.kernel()
                }
            };
            if !k.is_empty() {
                sub.insert(*wt, Mat::from_columns(f, r.len(), &k));
            }
        }
        m.module_on(sub)
    }

    pub fn loewy_length(&self, m: &ModuleRep) -> Result<usize, ModError> {
        let mut x = m.clone();
        let mut ll = 0;
        while x.dim() > 0 {
            x = self.radical(&x)?.0;
            ll += 1;
        }
        Ok(ll)
    }

    /// `⊕ P(l_i, r_i)` over the top of `M` with a surjection onto `M`.
    pub fn projective_cover(&self, m: &ModuleRep) -> Result<(ModuleRep, GradedMap), ModError> {
        let mut parts = Vec::new();
        for (lab, k) in self.top(m) {
            let p = self.projective(lab.l(), lab.r() as i64)?;
            parts.extend(std::iter::repeat(p).take(k));
        }
        if parts.is_empty() {
            return Err(ModError::CoverLiftFailed);
        }
        let p = ModuleRep::direct_sum(&parts.iter().collect::<Vec<_>>());
        let g = hom_space(&p, m)
            .find(32, |g| g.rank() == m.dim())
            .ok_or(ModError::CoverLiftFailed)?;
        Ok((p, g))
    }

    pub fn syzygy(&self, m: &ModuleRep) -> Result<ModuleRep, ModError> {
        let (p, g) = self.projective_cover(m)?;
        Ok(p.submodule(&p.kernel_vectors(&g))?.0)
    }

    pub fn cosyzygy(&self, m: &ModuleRep) -> Result<ModuleRep, ModError> {
        let mut parts = Vec::new();
        for (lab, k) in self.socle(m) {
            let p = self.projective(lab.l(), lab.r() as i64)?;
            parts.extend(std::iter::repeat(p).take(k));
        }
        if parts.is_empty() {
            return Err(ModError::EnvelopeEmbedFailed);
        }
        let i = ModuleRep::direct_sum(&parts.iter().collect::<Vec<_>>());
        let g = hom_space(m, &i)
            .find(32, |g| g.rank() == m.dim())
            .ok_or(ModError::EnvelopeEmbedFailed)?;
        Ok(i.quotient(&i.image_vectors(&g))?.0)
    }

    /// Candidate labels with the dimension and weights of `M`.
    fn candidates(&self, m: &ModuleRep, etas: &HashSet<EtaParam>) -> Result<Vec<IndecLabel>, ModError> {
        let n = self.n();
        let nn = n as usize;
        let dim = m.dim();
        let ws = m.weight_multiset();
        let mut out = Vec::new();
        let push_if = |lab: IndecLabel, out: &mut Vec<IndecLabel>| -> Result<(), ModError> {
            if self.build(&lab)?.weight_multiset() == ws {
                out.push(lab);
            }
            Ok(())
        };
        if dim <= nn {
            for r in 0..n as i64 {
                push_if(IndecLabel::simple(n, dim as u32, r)?, &mut out)?;
            }
        }
        if dim == 2 * nn {
            for l in 1..n {
                for r in 0..n as i64 {
                    push_if(IndecLabel::proj(n, l, r)?, &mut out)?;
                }
            }
        }
        if dim > nn && dim % nn != 0 {
            let m_ = (dim / nn) as u32;
            let rem = (dim % nn) as u32;
            let l = if m_ % 2 == 0 { rem } else { n - rem };
            for sign in [Sign::Plus, Sign::Minus] {
                for r in 0..n as i64 {
                    push_if(IndecLabel::syz(n, sign, m_, l, r)?, &mut out)?;
                }
            }
        }
        if dim % nn == 0 {
            let s = (dim / nn) as u32;
            for l in 1..n {
                for r in 0..n {
                    let Some(eta) = band_invariant(m, l, r) else { continue };
                    if !etas.contains(&eta) {
                        continue;
                    }
                    let lab = IndecLabel::band(n, s, l, r as i64, eta)?;
                    let ok = self.build(&lab).map(|b| b.weight_multiset() == ws);
                    if let Ok(true) = ok {
                        out.push(lab);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Name an indecomposable module. Band parameters are only accepted from
    /// the closure of `eta_seeds`.
    pub fn identify(&self, m: &ModuleRep, eta_seeds: &[EtaParam]) -> Result<IndecLabel, ModError> {
        let etas = eta_closure(self.n(), eta_seeds, 3);
        self.identify_in(m, &etas)
    }

    fn identify_in(&self, m: &ModuleRep, etas: &HashSet<EtaParam>) -> Result<IndecLabel, ModError> {
        let cands = self.candidates(m, etas)?;
        let ll = if cands.len() > 1 { Some(self.loewy_length(m)?) } else { None };
        for lab in cands {
            if let (Some(ll), IndecLabel::Proj { .. }) = (ll, &lab) {
                if ll != 3 {
                    continue;
                }
            }
            let model = self.build(&lab)?;
            if is_isomorphic_to_local(m, &model).is_iso() {
                return Ok(lab);
            }
        }
        Err(ModError::Unidentified(m.dim()))
    }

    /// Split and name every summand.
    pub fn decompose(&self, m: &ModuleRep, eta_seeds: &[EtaParam]) -> Result<DecompResult, ModError> {
        let etas = eta_closure(self.n(), eta_seeds, 3);
        let hints: Vec<ModuleRep> = (1..self.n())
            .map(|l| self.projective(l, 0))
            .collect::<Result<_, _>>()?;
        let parts = split_module(m, &hints)?;
        let mut labels = Vec::new();
        for p in &parts {
            labels.push(self.identify_in(&p.module, &etas)?);
        }
        Ok(DecompResult {
            summands: to_multiset(labels),
            witness: witness_matrix(m, &parts),
        })
    }

    /// Summands of `A ⊗ B`, memoised up to a simultaneous twist and the
    /// order of the factors.
    pub fn decompose_tensor(&self, a: &IndecLabel, b: &IndecLabel) -> Result<Multiset, ModError> {
        let n = self.n();
        let shift_by = a.r() as i64 + b.r() as i64;
        let (a0, b0) = (a.twisted(n, -(a.r() as i64)), b.twisted(n, -(b.r() as i64)));
        let key = if a0 <= b0 { (a0, b0) } else { (b0, a0) };
        let cached = self.products.lock().unwrap().get(&key).cloned();
        let base = match cached {
            Some(x) => x,
            None => {
                let m = self.build(&key.0)?.tensor(&self.build(&key.1)?);
                let seeds: Vec<EtaParam> = [key.0.eta(), key.1.eta()].into_iter().flatten().cloned().collect();
                let res = self.decompose(&m, &seeds)?.summands;
                self.products.lock().unwrap().insert(key, res.clone());
                res
            }
        };
        Ok(to_multiset(
            base.into_iter()
                .flat_map(|(l, k)| std::iter::repeat(l.twisted(n, shift_by)).take(k))
                .collect(),
        ))
    }
}

impl IsoResult {
    pub fn witness(&self) -> Option<&GradedMap> {
        match self {
            IsoResult::Iso(g) => Some(g),
            _ => None,
        }
    }
}
