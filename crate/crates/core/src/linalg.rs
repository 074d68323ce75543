//! Dense exact linear algebra over `Q(q)`, plus the few integer and
//! polynomial routines the module oracle needs.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclo::{CycField, CycNum, Rat};

/// Row-major dense matrix over a cyclotomic field.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: &'static CycField,
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = CycNum;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &CycNum {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut CycNum {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zeros(field: &'static CycField, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &'static CycField, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn diagonal(field: &'static CycField, diag: &[CycNum]) -> Mat {
        let mut m = Mat::zeros(field, diag.len(), diag.len());
        for (i, v) in diag.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_columns(field: &'static CycField, rows: usize, cols: &[Vec<CycNum>]) -> Mat {
        let mut m = Mat::zeros(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNum::is_zero)
    }

    pub fn column(&self, c: usize) -> Vec<CycNum> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<CycNum>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Mat::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o.data[k * o.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out.data[i * o.cols + j] += &t;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycNum]) -> Vec<CycNum> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (k, x) in v.iter().enumerate() {
                let a = &self[(i, k)];
                if !a.is_zero() && !x.is_zero() {
                    *o += &(a * x);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &CycNum) -> Mat {
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// `self + s * o`, in place.
    pub fn add_scaled(&mut self, o: &Mat, s: &CycNum) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&o.data) {
            if !b.is_zero() {
                *a += &(b * s);
            }
        }
    }

    pub fn trace(&self) -> CycNum {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t += &self[(i, i)];
        }
        t
    }

    /// `tr(self * o)` without forming the product.
    pub fn trace_of_product(&self, o: &Mat) -> CycNum {
        assert_eq!(self.cols, o.rows);
        assert_eq!(self.rows, o.cols);
        let mut t = self.field.zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let b = &o[(k, i)];
                if !b.is_zero() {
                    t += &(a * b);
                }
            }
        }
        t
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Mat::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Mat {
        let mut out = Mat::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[&Mat]) -> Mat {
        let field = blocks[0].field;
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Mat::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn rank(&self) -> usize {
        Echelon::new(self.to_rows(), self.cols).rank()
    }

    fn to_rows(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        if self.rows == 0 {
            return (0..self.cols)
                .map(|i| {
                    let mut v = vec![self.field.zero(); self.cols];
                    v[i] = self.field.one();
                    v
                })
                .collect();
        }
        Echelon::new(self.to_rows(), self.cols).kernel()
    }

    /// Basis of the column space, as a subset of the columns.
    pub fn column_space(&self) -> Vec<Vec<CycNum>> {
        let ech = Echelon::new(self.transpose().to_rows(), self.rows);
        // Row space of the transpose, already reduced.
        ech.rows
    }

    /// Indices of a maximal independent subset of columns, chosen greedily left to right.
    pub fn pivot_columns(&self) -> Vec<usize> {
        Echelon::new(self.to_rows(), self.cols).pivots
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut rows = self.to_rows();
        for (i, row) in rows.iter_mut().enumerate() {
            row.extend((0..n).map(|j| {
                if i == j {
                    self.field.one()
                } else {
                    self.field.zero()
                }
            }));
        }
        let ech = Echelon::with_limit(rows, 2 * n, n);
        if ech.rank() < n || ech.pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut out = Mat::zeros(self.field, n, n);
        for (i, row) in ech.rows.iter().enumerate() {
            for j in 0..n {
                out[(i, j)] = row[n + j].clone();
            }
        }
        Some(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Solve `self * x = b` for one particular solution.
    pub fn solve(&self, b: &[CycNum]) -> Option<Vec<CycNum>> {
        assert_eq!(b.len(), self.rows);
        let mut rows = self.to_rows();
        for (row, v) in rows.iter_mut().zip(b) {
            row.push(v.clone());
        }
        let ech = Echelon::new(rows, self.cols + 1);
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if p == self.cols {
                return None;
            }
            x[p] = row[self.cols].clone();
        }
        Some(x)
    }

    pub fn char_poly(&self) -> KPoly {
        char_poly(self)
    }
}

/// Reduced row echelon form of a list of rows.
pub struct Echelon {
    field: Option<&'static CycField>,
    pub rows: Vec<Vec<CycNum>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn new(rows: Vec<Vec<CycNum>>, ncols: usize) -> Echelon {
        Echelon::with_limit(rows, ncols, ncols)
    }

    /// RREF where pivots are only searched in the first `limit` columns
    /// (columns beyond are carried along, as for augmented systems).
    pub fn with_limit(mut rows: Vec<Vec<CycNum>>, ncols: usize, limit: usize) -> Echelon {
        let field = rows.iter().find_map(|r| r.first()).map(CycNum::field);
        let mut pivots = Vec::new();
        let mut r = 0;
        let nrows = rows.len();
        for col in 0..limit.min(ncols) {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][col].inv().expect("nonzero pivot");
            let nz: Vec<usize> = (col..ncols).filter(|&j| !rows[r][j].is_zero()).collect();
            for &j in &nz {
                rows[r][j] = &rows[r][j] * &inv;
            }
            let prow: Vec<(usize, CycNum)> = nz.iter().map(|&j| (j, rows[r][j].clone())).collect();
            for i in 0..nrows {
                if i == r || rows[i][col].is_zero() {
                    continue;
                }
                let fac = rows[i][col].clone();
                for (j, v) in &prow {
                    let t = v * &fac;
                    rows[i][*j] -= &t;
                }
            }
            pivots.push(col);
            r += 1;
        }
        rows.truncate(r);
        Echelon {
            field,
            rows,
            pivots,
            ncols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel(&self) -> Vec<Vec<CycNum>> {
        let Some(field) = self.field else {
            // No equations and no way to name the field: callers handle this case.
            return Vec::new();
        };
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); self.ncols];
            v[free] = field.one();
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    v[p] = -&row[free];
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Nullspace of a system given as sparse rows over `ncols` unknowns.
pub fn sparse_kernel(
    field: &'static CycField,
    ncols: usize,
    rows: Vec<Vec<(usize, CycNum)>>,
) -> Vec<Vec<CycNum>> {
    let dense: Vec<Vec<CycNum>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|(_, v)| !v.is_zero()))
        .map(|r| {
            let mut row = vec![field.zero(); ncols];
            for (j, v) in r {
                row[j] += &v;
            }
            row
        })
        .collect();
    if dense.is_empty() {
        return (0..ncols)
            .map(|i| {
                let mut v = vec![field.zero(); ncols];
                v[i] = field.one();
                v
            })
            .collect();
    }
    Echelon::new(dense, ncols).kernel()
}

/// Incremental sparse Gaussian elimination for nullspace computations.
pub struct SparseSolver {
    field: &'static CycField,
    ncols: usize,
    pivot_of: Vec<Option<usize>>,
    rows: Vec<Vec<(usize, CycNum)>>,
}

fn sparse_axpy(row: &[(usize, CycNum)], s: &CycNum, prow: &[(usize, CycNum)]) -> Vec<(usize, CycNum)> {
    // row - s * prow
    let mut out = Vec::with_capacity(row.len() + prow.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < prow.len() {
        let take_row = j >= prow.len() || (i < row.len() && row[i].0 < prow[j].0);
        let take_p = i >= row.len() || (j < prow.len() && prow[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_p {
            out.push((prow[j].0, -&(s * &prow[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(s * &prow[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SparseSolver {
    pub fn new(field: &'static CycField, ncols: usize) -> Self {
        SparseSolver {
            field,
            ncols,
            pivot_of: vec![None; ncols],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Add an equation; entries may be unsorted and repeated.
    pub fn push(&mut self, mut entries: Vec<(usize, CycNum)>) {
        entries.sort_by_key(|e| e.0);
        let mut row: Vec<(usize, CycNum)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 += &v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|e| !e.1.is_zero());
        while let Some((lead, _)) = row.first() {
            match self.pivot_of[*lead] {
                Some(p) => {
                    let s = row[0].1.clone();
                    row = sparse_axpy(&row, &s, &self.rows[p]);
                }
                None => {
                    let inv = row[0].1.inv().expect("nonzero lead");
                    for e in row.iter_mut() {
                        e.1 = &e.1 * &inv;
                    }
                    self.pivot_of[row[0].0] = Some(self.rows.len());
                    self.rows.push(row);
                    return;
                }
            }
        }
    }

    /// Basis of the solution space of the homogeneous system.
    pub fn kernel(mut self) -> Vec<Vec<CycNum>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r][0].0));
        for &r in &order {
            // Eliminate non-leading pivot columns, which are already fully reduced.
            loop {
                let pos = self.rows[r]
                    .iter()
                    .skip(1)
                    .position(|e| self.pivot_of[e.0].is_some());
                let Some(pos) = pos else { break };
                let (c, s) = self.rows[r][pos + 1].clone();
                let p = self.pivot_of[c].unwrap();
                let prow = std::mem::take(&mut self.rows[p]);
                self.rows[r] = sparse_axpy(&self.rows[r], &s, &prow);
                self.rows[p] = prow;
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if self.pivot_of[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.ncols];
            v[free] = self.field.one();
            basis.push(v);
        }
        let free_index: Vec<Option<usize>> = {
            let mut k = 0;
            (0..self.ncols)
                .map(|c| {
                    if self.pivot_of[c].is_none() {
                        k += 1;
                        Some(k - 1)
                    } else {
                        None
                    }
                })
                .collect()
        };
        for row in &self.rows {
            let lead = row[0].0;
            for (c, v) in &row[1..] {
                if let Some(k) = free_index[*c] {
                    basis[k][lead] = -v;
                }
            }
        }
        basis
    }
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<CycNum>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].len();
    Echelon::new(vectors.to_vec(), n).rank()
}

/// Univariate polynomial over `Q(q)`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KPoly {
    field: &'static CycField,
    coeffs: Vec<CycNum>,
}

impl KPoly {
    pub fn new(field: &'static CycField, mut coeffs: Vec<CycNum>) -> KPoly {
        while coeffs.last().is_some_and(CycNum::is_zero) {
            coeffs.pop();
        }
        KPoly { field, coeffs }
    }

    pub fn one(field: &'static CycField) -> KPoly {
        KPoly::new(field, vec![field.one()])
    }

    /// `t - lambda`.
    pub fn linear(lambda: &CycNum) -> KPoly {
        let f = lambda.field();
        KPoly::new(f, vec![-lambda, f.one()])
    }

    pub fn coeffs(&self) -> &[CycNum] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> KPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                KPoly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn mul(&self, o: &KPoly) -> KPoly {
        if self.is_zero() || o.is_zero() {
            return KPoly::new(self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        KPoly::new(self.field, out)
    }

    pub fn divrem(&self, d: &KPoly) -> (KPoly, KPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lead_inv = d.coeffs[dd].inv().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (KPoly::new(self.field, vec![]), self.clone());
        }
        let mut quo = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    let t = dj * &c;
                    rem[k + j] -= &t;
                }
            }
            quo[k] = c;
        }
        (KPoly::new(self.field, quo), KPoly::new(self.field, rem))
    }

    pub fn gcd(&self, o: &KPoly) -> KPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> KPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rat::int(k as i64)))
            .collect();
        KPoly::new(self.field, c)
    }

    /// Square-free factors grouped by multiplicity (Yun's algorithm).
    pub fn squarefree_parts(&self) -> Vec<KPoly> {
        let f = self.monic();
        if f.is_constant() {
            return vec![];
        }
        let mut parts = Vec::new();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        loop {
            let g = b.gcd(&d);
            if !g.is_constant() {
                parts.push(g.clone());
            }
            b = b.divrem(&g).0;
            if b.is_constant() {
                break;
            }
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            a = a.divrem(&g).0;
        }
        let _ = a;
        parts
    }

    pub fn sub(&self, o: &KPoly) -> KPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) - o.coeffs.get(i).unwrap_or(&z))
            .collect();
        KPoly::new(self.field, c)
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let n = m.rows();
        let mut acc = Mat::zeros(self.field, n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }
}

/// Refine a family of polynomials into pairwise coprime monic factors whose
/// products generate the same multiplicative structure.
pub fn coprime_base(polys: &[KPoly]) -> Vec<KPoly> {
    let mut base: Vec<KPoly> = Vec::new();
    for p in polys {
        let mut pending = vec![p.monic()];
        while let Some(mut f) = pending.pop() {
            if f.is_constant() {
                continue;
            }
            let mut i = 0;
            while i < base.len() {
                let g = f.gcd(&base[i]);
                if g.is_constant() {
                    i += 1;
                    continue;
                }
                let b = base.swap_remove(i);
                let b_rest = b.divrem(&g).0;
                let f_rest = f.divrem(&g).0;
                pending.push(b_rest);
                pending.push(g.clone());
                f = f_rest;
                if f.is_constant() {
                    break;
                }
                i = 0;
            }
            if !f.is_constant() {
                base.push(f);
            }
        }
    }
    // Repeated factors collapse to their radical for the purposes of splitting.
    let mut out: Vec<KPoly> = Vec::new();
    for b in base {
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

/// Characteristic polynomial `det(t I - A)` by Faddeev–LeVerrier.
pub fn char_poly(a: &Mat) -> KPoly {
    assert!(a.is_square());
    let f = a.field();
    let n = a.rows();
    let mut c = vec![f.zero(); n + 1];
    c[n] = f.one();
    let mut m = Mat::zeros(f, n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        let ck = &c[n - k + 1];
        for i in 0..n {
            next[(i, i)] += ck;
        }
        m = next;
        let t = a.trace_of_product(&m);
        c[n - k] = -t.scale(&Rat::new(1, k as i64));
    }
    KPoly::new(f, c)
}

/// Determinant of an integer matrix (fraction-free Bareiss elimination).
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> &'static CycField {
        CycField::get(3)
    }

    fn mat(rows: &[&[i64]]) -> Mat {
        let f = field();
        let mut m = Mat::zeros(f, rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = f.int(v);
            }
        }
        m
    }

    #[test]
    fn kernel_and_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(CycNum::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let f = field();
        let mut m = mat(&[&[1, 2], &[3, 4]]);
        m[(0, 1)] = f.q();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(f, 2));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = field();
        let m = mat(&[&[1, 1], &[2, 2]]);
        assert!(m.solve(&[f.int(1), f.int(2)]).is_some());
        assert!(m.solve(&[f.int(1), f.int(3)]).is_none());
    }

    #[test]
    fn char_poly_of_companion() {
        let f = field();
        // Companion of t^2 - 3t + 2.
        let m = mat(&[&[0, -2], &[1, 3]]);
        let p = m.char_poly();
        assert_eq!(p.coeffs(), &[f.int(2), f.int(-3), f.int(1)]);
    }

    #[test]
    fn squarefree_and_coprime() {
        let f = field();
        let l1 = KPoly::linear(&f.int(1));
        let l2 = KPoly::linear(&f.q());
        let p = l1.mul(&l1).mul(&l2);
        let parts = p.squarefree_parts();
        assert_eq!(parts, vec![l2.clone(), l1.clone()]);
        let base = coprime_base(&[l1.mul(&l2), l1.mul(&l1)]);
        assert_eq!(base.len(), 2);
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let f = field();
        let m = mat(&[&[1, 2, 0, 3], &[0, 1, 1, 1], &[1, 3, 1, 4]]);
        let mut s = SparseSolver::new(f, 4);
        for r in 0..3 {
            s.push((0..4).map(|c| (c, m[(r, c)].clone())).collect());
        }
        assert_eq!(s.rank(), 2);
        let k = s.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(CycNum::is_zero));
        }
    }

    #[test]
    fn bareiss_determinant() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 2]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(int_det(&m), BigInt::from(6));
    }
}
