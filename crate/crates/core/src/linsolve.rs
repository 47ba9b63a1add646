//! Dense linear algebra over F_p.
//!
//! [`MatFp`] covers the small one-shot problems (spans, determinants,
//! intersections). Large interpolation problems go through
//! [`EchelonAccumulator`], which keeps an echelon basis of everything absorbed
//! so far and reduces new rows against it with delayed modular reduction.

use crate::exactfield::{Fe, PrimeField};

/// Row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatFp {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl MatFp {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatFp { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    /// Builds a matrix from rows of equal length; an empty list gives `0 x cols`.
    pub fn from_rows(rows: &[Vec<Fe>], cols: usize) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        MatFp { rows: rows.len(), cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Fe>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> MatFp {
        let mut t = MatFp::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &PrimeField, other: &MatFp) -> MatFp {
        assert_eq!(self.cols, other.rows);
        let t = other.transpose();
        let mut out = MatFp::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out.set(i, j, f.dot(self.row(i), t.row(j)));
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &PrimeField, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| f.dot(self.row(i), v)).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self, f: &PrimeField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = f.inv(self.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &PrimeField) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn kernel(&self, f: &PrimeField) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.get(r, free));
            }
            out.push(v);
        }
        out
    }

    pub fn determinant(&self, f: &PrimeField) -> Fe {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Fe::ONE;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Fe::ZERO;
            };
            if pr != c {
                m.swap_rows(pr, c);
                det = f.neg(det);
            }
            let piv = m.get(c, c);
            det = f.mul(det, piv);
            let inv = f.inv(piv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(m.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self, f: &PrimeField) -> Option<MatFp> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = MatFp::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = MatFp::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }

    /// One solution of `M x = b`, or `None` if inconsistent.
    pub fn solve(&self, f: &PrimeField, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = MatFp::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let piv = aug.rref(f);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// A linear subspace of F_p^ambient, viewed projectively.
///
/// The basis is kept in reduced row echelon form, so two equal subspaces have
/// identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjSubspace {
    pub ambient: usize,
    basis: Vec<Vec<Fe>>,
}

impl ProjSubspace {
    pub fn span(f: &PrimeField, ambient: usize, vectors: &[Vec<Fe>]) -> Self {
        let mut m = MatFp::from_rows(vectors, ambient);
        let piv = m.rref(f);
        let basis = (0..piv.len()).map(|i| m.row(i).to_vec()).collect();
        ProjSubspace { ambient, basis }
    }

    pub fn zero(ambient: usize) -> Self {
        ProjSubspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = MatFp::identity(ambient).row_vecs();
        ProjSubspace { ambient, basis }
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn proj_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, f: &PrimeField, v: &[Fe]) -> bool {
        self.coords_of(f, v).is_some()
    }

    pub fn contains_space(&self, f: &PrimeField, other: &ProjSubspace) -> bool {
        other.basis.iter().all(|v| self.contains(f, v))
    }

    /// Coefficients of `v` in this basis.
    pub fn coords_of(&self, f: &PrimeField, v: &[Fe]) -> Option<Vec<Fe>> {
        if self.basis.is_empty() {
            return v.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        MatFp::from_cols(&self.basis, self.ambient).solve(f, v)
    }

    pub fn join(&self, f: &PrimeField, other: &ProjSubspace) -> ProjSubspace {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        ProjSubspace::span(f, self.ambient, &all)
    }

    pub fn meet(&self, f: &PrimeField, other: &ProjSubspace) -> ProjSubspace {
        span_meet(f, self, other)
    }

    /// The dual subspace `{w : w·u = 0 for all u}`.
    pub fn annihilator(&self, f: &PrimeField) -> ProjSubspace {
        let k = MatFp::from_rows(&self.basis, self.ambient).kernel(f);
        ProjSubspace::span(f, self.ambient, &k)
    }
}

/// Intersection of two subspaces of the same ambient space.
pub fn span_meet(f: &PrimeField, u: &ProjSubspace, v: &ProjSubspace) -> ProjSubspace {
    assert_eq!(u.ambient, v.ambient);
    let n = u.ambient;
    // Columns u_i and -v_j; a kernel vector (a, b) gives Σ a_i u_i = Σ b_j v_j.
    let mut cols: Vec<Vec<Fe>> = u.basis.clone();
    cols.extend(v.basis.iter().map(|w| w.iter().map(|&x| f.neg(x)).collect()));
    if cols.is_empty() {
        return ProjSubspace::zero(n);
    }
    let ker = MatFp::from_cols(&cols, n).kernel(f);
    let vecs: Vec<Vec<Fe>> = ker
        .iter()
        .map(|k| {
            let mut x = vec![Fe::ZERO; n];
            for (i, ui) in u.basis.iter().enumerate() {
                if k[i].is_zero() {
                    continue;
                }
                for (xj, &uj) in x.iter_mut().zip(ui) {
                    *xj = f.add(*xj, f.mul(k[i], uj));
                }
            }
            x
        })
        .collect();
    ProjSubspace::span(f, n, &vecs)
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize(f: &PrimeField, v: &[Fe]) -> Option<Vec<Fe>> {
    let lead = v.iter().copied().find(|x| !x.is_zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

/// True if `a` and `b` are nonzero and proportional.
pub fn same_point(f: &PrimeField, a: &[Fe], b: &[Fe]) -> bool {
    match (normalize(f, a), normalize(f, b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// Incremental echelon basis of a growing row space.
///
/// Stored rows are in semi-echelon form: each has a leading 1 in its pivot
/// column and zeros before it, and rows are kept sorted by pivot column. A new
/// row is reduced against every stored row in pivot order. Accumulation is in
/// `u64` lanes with a modular reduction only when a lane is read as a
/// multiplier or when the overflow budget runs out.
#[derive(Clone, Debug)]
pub struct EchelonAccumulator {
    field: PrimeField,
    cols: usize,
    /// Pivot rows, sorted by pivot column.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    is_pivot: Vec<bool>,
    absorbed: usize,
}

const BLOCK: usize = 16;

impl EchelonAccumulator {
    pub fn new(field: PrimeField, cols: usize) -> Self {
        EchelonAccumulator {
            field,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
            is_pivot: vec![false; cols],
            absorbed: 0,
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.pivots.len()
    }

    /// Total rows offered so far (independent or not).
    pub fn rows_absorbed(&self) -> usize {
        self.absorbed
    }

    /// Reduces a block of rows against the stored basis, in place.
    fn reduce_block(&self, acc: &mut [Vec<u64>]) {
        let p = self.field.modulus() as u64;
        let limit = self.field.accumulation_limit();
        let mut since = 0usize;
        for (prow, &pc) in self.rows.iter().zip(&self.pivots) {
            if since >= limit {
                for a in acc.iter_mut() {
                    for x in a.iter_mut() {
                        *x %= p;
                    }
                }
                since = 0;
            }
            let mut touched = false;
            for a in acc.iter_mut() {
                let c = a[pc] % p;
                if c == 0 {
                    a[pc] = 0;
                    continue;
                }
                touched = true;
                let neg = p - c;
                let tail = &mut a[pc..];
                let src = &prow[pc..];
                for (x, &y) in tail.iter_mut().zip(src) {
                    *x = x.wrapping_add(neg.wrapping_mul(y as u64));
                }
            }
            if touched {
                since += 1;
            }
        }
        for a in acc.iter_mut() {
            for x in a.iter_mut() {
                *x %= p;
            }
        }
    }

    fn insert(&mut self, mut row: Vec<u64>) -> bool {
        let f = self.field;
        let p = f.modulus() as u64;
        // Reduce against rows that may have been inserted since the block pass.
        for (prow, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = row[pc] % p;
            if c == 0 {
                continue;
            }
            let neg = p - c;
            for (x, &y) in row[pc..].iter_mut().zip(&prow[pc..]) {
                *x = (*x + neg * y as u64) % p;
            }
        }
        let Some(lead) = row.iter().position(|&x| x % p != 0) else {
            return false;
        };
        let inv = f.inv(Fe((row[lead] % p) as u32)).expect("nonzero lead").0 as u64;
        let stored: Vec<u32> = row.iter().map(|&x| ((x % p) * inv % p) as u32).collect();
        let pos = self.pivots.partition_point(|&c| c < lead);
        self.pivots.insert(pos, lead);
        self.rows.insert(pos, stored);
        self.is_pivot[lead] = true;
        true
    }

    /// Absorbs rows; returns how many raised the rank.
    pub fn absorb(&mut self, rows: &[Vec<Fe>]) -> usize {
        let mut gained = 0;
        for chunk in rows.chunks(BLOCK) {
            let mut acc: Vec<Vec<u64>> = chunk
                .iter()
                .map(|r| {
                    assert_eq!(r.len(), self.cols);
                    r.iter().map(|x| x.0 as u64).collect()
                })
                .collect();
            self.reduce_block(&mut acc);
            for a in acc {
                if self.insert(a) {
                    gained += 1;
                }
            }
            self.absorbed += chunk.len();
        }
        gained
    }

    /// Basis of the common kernel of all absorbed rows.
    pub fn kernel(&self) -> Vec<Vec<Fe>> {
        let f = self.field;
        let p = f.modulus() as u64;
        let free: Vec<usize> = (0..self.cols).filter(|&c| !self.is_pivot[c]).collect();
        let k = free.len();
        if k == 0 {
            return Vec::new();
        }
        // vals[c * k + j] is coordinate c of kernel vector j.
        let mut vals = vec![0u64; self.cols * k];
        for (j, &c) in free.iter().enumerate() {
            vals[c * k + j] = 1;
        }
        let limit = f.accumulation_limit();
        let mut acc = vec![0u64; k];
        for (prow, &pc) in self.rows.iter().zip(&self.pivots).rev() {
            acc.iter_mut().for_each(|a| *a = 0);
            let mut n = 0;
            for c in pc + 1..self.cols {
                let y = prow[c] as u64;
                if y == 0 {
                    continue;
                }
                let src = &vals[c * k..(c + 1) * k];
                for (a, &v) in acc.iter_mut().zip(src) {
                    *a = a.wrapping_add(y.wrapping_mul(v));
                }
                n += 1;
                if n >= limit {
                    acc.iter_mut().for_each(|a| *a %= p);
                    n = 0;
                }
            }
            let dst = &mut vals[pc * k..(pc + 1) * k];
            for (d, &a) in dst.iter_mut().zip(&acc) {
                let r = a % p;
                *d = if r == 0 { 0 } else { p - r };
            }
        }
        (0..k)
            .map(|j| (0..self.cols).map(|c| Fe(vals[c * k + j] as u32)).collect())
            .collect()
    }

    /// Reduces `row` against the stored basis and reports whether anything is
    /// left, without storing it.
    pub fn is_independent(&self, row: &[Fe]) -> bool {
        let mut acc = vec![row.iter().map(|x| x.0 as u64).collect::<Vec<u64>>()];
        self.reduce_block(&mut acc);
        acc[0].iter().any(|&x| x != 0)
    }
}
