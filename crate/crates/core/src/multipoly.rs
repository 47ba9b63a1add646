//! Dense homogeneous forms over F_p.
//!
//! Monomials of degree `d` in `m` variables are ranked in lexicographic order
//! with `x0^d` first and `x_{m-1}^d` last. Within one degree this coincides
//! with graded lex, and it has the useful property that all monomials sharing
//! a prefix of exponents form a contiguous block.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exactfield::{Fe, PrimeField};
use crate::linsolve::MatFp;
use crate::unipoly::UniPoly;

/// Label written into exported files for the monomial order above.
pub const MONOMIAL_ORDER: &str = "grevlex-fixed";

/// Binomial coefficient as an integer (small arguments).
pub fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// Number of monomials of degree `d` in `m` variables.
pub fn monomial_count(m: usize, d: usize) -> usize {
    if m == 0 {
        return usize::from(d == 0);
    }
    binom(m + d - 1, d)
}

/// Rank of an exponent vector among monomials of the same degree.
pub fn rank_of(exps: &[u8]) -> usize {
    let m = exps.len();
    let mut rem: usize = exps.iter().map(|&e| e as usize).sum();
    let mut r = 0;
    for (i, &e) in exps.iter().enumerate().take(m.saturating_sub(1)) {
        let e = e as usize;
        if rem > e {
            r += monomial_count(m - i, rem - e - 1);
        }
        rem -= e;
    }
    r
}

/// Enumeration of monomials of fixed degree and variable count.
#[derive(Debug)]
pub struct MonomialIndex {
    pub degree: usize,
    pub vars: usize,
    exps: Vec<u8>,
}

impl MonomialIndex {
    pub fn new(degree: usize, vars: usize) -> Self {
        let n = monomial_count(vars, degree);
        let mut exps = Vec::with_capacity(n * vars);
        let mut cur = vec![0u8; vars];
        fn rec(i: usize, rem: usize, cur: &mut Vec<u8>, out: &mut Vec<u8>) {
            let m = cur.len();
            if i + 1 == m {
                cur[i] = rem as u8;
                out.extend_from_slice(cur);
                return;
            }
            for a in (0..=rem).rev() {
                cur[i] = a as u8;
                rec(i + 1, rem - a, cur, out);
            }
            cur[i] = 0;
        }
        if vars > 0 {
            rec(0, degree, &mut cur, &mut exps);
        }
        MonomialIndex { degree, vars, exps }
    }

    /// Process-wide cached index.
    pub fn shared(degree: usize, vars: usize) -> Arc<MonomialIndex> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<MonomialIndex>>>> =
            OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().expect("monomial cache poisoned");
        guard
            .entry((degree, vars))
            .or_insert_with(|| Arc::new(MonomialIndex::new(degree, vars)))
            .clone()
    }

    pub fn len(&self) -> usize {
        if self.vars == 0 {
            return usize::from(self.degree == 0);
        }
        self.exps.len() / self.vars
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exps(&self, rank: usize) -> &[u8] {
        &self.exps[rank * self.vars..(rank + 1) * self.vars]
    }

    pub fn rank(&self, exps: &[u8]) -> usize {
        debug_assert_eq!(exps.len(), self.vars);
        rank_of(exps)
    }

    pub fn unrank(&self, rank: usize) -> Vec<u8> {
        self.exps(rank).to_vec()
    }
}

/// Values at `pt` of all degree-`d` monomials, in rank order.
pub fn monomial_values(f: &PrimeField, pt: &[Fe], d: usize) -> Vec<Fe> {
    let m = pt.len();
    if m == 0 {
        return if d == 0 { vec![Fe::ONE] } else { Vec::new() };
    }
    // tables[e] = values of degree-e monomials in variables k..m, built from k = m-1 down.
    let mut tables: Vec<Vec<Fe>> = (0..=d).map(|e| vec![f.pow(pt[m - 1], e as u64)]).collect();
    for k in (0..m - 1).rev() {
        let powers: Vec<Fe> = (0..=d).map(|a| f.pow(pt[k], a as u64)).collect();
        let mut next = Vec::with_capacity(d + 1);
        for e in 0..=d {
            let mut v = Vec::with_capacity(monomial_count(m - k, e));
            for a in (0..=e).rev() {
                let pa = powers[a];
                v.extend(tables[e - a].iter().map(|&x| f.mul(pa, x)));
            }
            next.push(v);
        }
        tables = next;
    }
    tables.swap_remove(d)
}

/// Π (γ_i + β_i)! / γ_i!, the constant produced by applying ∂^β to x^(β+γ).
pub fn falling_coeff(f: &PrimeField, beta: &[u8], gamma: &[u8]) -> Fe {
    let mut c = Fe::ONE;
    for (&b, &g) in beta.iter().zip(gamma) {
        for t in 0..b as u64 {
            c = f.mul(c, f.elem(g as u64 + b as u64 - t));
        }
    }
    c
}

/// Precomputed pairing of degree-`k` differential operators with degree
/// `d - k` monomials: for each β and each γ, the rank of β+γ in degree `d`
/// and the constant `falling_coeff(β, γ)`.
#[derive(Debug)]
pub struct DerivativePlan {
    pub d: usize,
    pub m: usize,
    pub k: usize,
    /// `targets[b * n_gamma + g]`.
    pub targets: Vec<u32>,
    pub coeffs: Vec<Fe>,
    pub n_beta: usize,
    pub n_gamma: usize,
}

impl DerivativePlan {
    pub fn new(f: &PrimeField, d: usize, m: usize, k: usize) -> Self {
        assert!(k <= d);
        let bi = MonomialIndex::shared(k, m);
        let gi = MonomialIndex::shared(d - k, m);
        let (nb, ng) = (bi.len(), gi.len());
        let mut targets = Vec::with_capacity(nb * ng);
        let mut coeffs = Vec::with_capacity(nb * ng);
        let mut sum = vec![0u8; m];
        for b in 0..nb {
            let beta = bi.exps(b);
            for g in 0..ng {
                let gamma = gi.exps(g);
                for i in 0..m {
                    sum[i] = beta[i] + gamma[i];
                }
                targets.push(rank_of(&sum) as u32);
                coeffs.push(falling_coeff(f, beta, gamma));
            }
        }
        DerivativePlan { d, m, k, targets, coeffs, n_beta: nb, n_gamma: ng }
    }
}

/// Homogeneous form of degree `d` in `m` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogForm {
    pub field: PrimeField,
    pub d: usize,
    pub m: usize,
    pub coeffs: Vec<Fe>,
}

impl HomogForm {
    pub fn zero(field: PrimeField, d: usize, m: usize) -> Self {
        HomogForm { field, d, m, coeffs: vec![Fe::ZERO; monomial_count(m, d)] }
    }

    pub fn from_coeffs(field: PrimeField, d: usize, m: usize, coeffs: Vec<Fe>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(m, d), "coefficient count");
        HomogForm { field, d, m, coeffs }
    }

    pub fn monomial(field: PrimeField, exps: &[u8], c: Fe) -> Self {
        let d = exps.iter().map(|&e| e as usize).sum();
        let mut out = Self::zero(field, d, exps.len());
        out.coeffs[rank_of(exps)] = c;
        out
    }

    /// Linear form Σ c_i x_i.
    pub fn linear(field: PrimeField, c: &[Fe]) -> Self {
        // In degree 1 the rank of x_i is i.
        Self::from_coeffs(field, 1, c.len(), c.to_vec())
    }

    pub fn random(field: PrimeField, d: usize, m: usize, rng: &mut crate::FieldRng) -> Self {
        Self::from_coeffs(field, d, m, rng.vector(monomial_count(m, d)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, pt: &[Fe]) -> Fe {
        assert_eq!(pt.len(), self.m);
        let vals = monomial_values(&self.field, pt, self.d);
        self.field.dot(&self.coeffs, &vals)
    }

    pub fn add(&self, o: &HomogForm) -> HomogForm {
        assert_eq!((self.d, self.m), (o.d, o.m));
        let f = self.field;
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        HomogForm { coeffs: c, ..self.clone() }
    }

    pub fn sub(&self, o: &HomogForm) -> HomogForm {
        assert_eq!((self.d, self.m), (o.d, o.m));
        let f = self.field;
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
        HomogForm { coeffs: c, ..self.clone() }
    }

    pub fn scale(&self, s: Fe) -> HomogForm {
        let f = self.field;
        HomogForm { coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect(), ..self.clone() }
    }

    /// Linear combination Σ c_i F_i of forms of equal shape.
    pub fn combination(forms: &[HomogForm], c: &[Fe]) -> HomogForm {
        assert!(!forms.is_empty());
        let f = forms[0].field;
        let mut out = HomogForm::zero(f, forms[0].d, forms[0].m);
        for (form, &ci) in forms.iter().zip(c) {
            if ci.is_zero() {
                continue;
            }
            for (o, &a) in out.coeffs.iter_mut().zip(&form.coeffs) {
                *o = f.add(*o, f.mul(a, ci));
            }
        }
        out
    }

    pub fn mul(&self, o: &HomogForm) -> HomogForm {
        assert_eq!(self.m, o.m);
        let f = self.field;
        let m = self.m;
        let ai = MonomialIndex::shared(self.d, m);
        let bi = MonomialIndex::shared(o.d, m);
        let mut out = HomogForm::zero(f, self.d + o.d, m);
        let mut sum = vec![0u8; m];
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = ai.exps(a);
            for (b, &cb) in o.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let eb = bi.exps(b);
                for i in 0..m {
                    sum[i] = ea[i] + eb[i];
                }
                let r = rank_of(&sum);
                out.coeffs[r] = f.add(out.coeffs[r], f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> HomogForm {
        let mut acc = HomogForm::monomial(self.field, &vec![0u8; self.m], Fe::ONE);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// All order-`k` partial derivatives, indexed by degree-`k` monomials.
    pub fn partials(&self, k: usize) -> Vec<HomogForm> {
        assert!(k <= self.d);
        let plan = DerivativePlan::new(&self.field, self.d, self.m, k);
        let f = self.field;
        (0..plan.n_beta)
            .map(|b| {
                let range = b * plan.n_gamma..(b + 1) * plan.n_gamma;
                let c = plan.targets[range.clone()]
                    .iter()
                    .zip(&plan.coeffs[range])
                    .map(|(&t, &c)| f.mul(self.coeffs[t as usize], c))
                    .collect();
                HomogForm { field: f, d: self.d - k, m: self.m, coeffs: c }
            })
            .collect()
    }

    pub fn gradient(&self) -> Vec<HomogForm> {
        self.partials(1)
    }

    /// Gradient evaluated at a point.
    pub fn gradient_at(&self, pt: &[Fe]) -> Vec<Fe> {
        self.gradient().iter().map(|g| g.eval(pt)).collect()
    }

    /// `t ↦ F(A + tU)` as a polynomial of degree at most `d`.
    pub fn restrict_to_line(&self, a: &[Fe], u: &[Fe]) -> Result<UniPoly> {
        let f = self.field;
        if MatFp::from_rows(&[a.to_vec(), u.to_vec()], self.m).rank(&f) < 2 {
            return Err(Error::DegeneratePair);
        }
        let ts: Vec<Fe> = (0..=self.d as u64).map(|t| f.elem(t)).collect();
        let vals: Vec<Fe> = ts
            .iter()
            .map(|&t| {
                let pt: Vec<Fe> = a.iter().zip(u).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
                self.eval(&pt)
            })
            .collect();
        UniPoly::interpolate(&f, &ts, &vals)
    }

    /// `G(y) = F(M y)` where `M` is `m x k` with full column rank.
    pub fn substitute_linear(&self, map: &MatFp) -> Result<HomogForm> {
        assert_eq!(map.rows, self.m);
        let f = self.field;
        let k = map.cols;
        if map.rank(&f) < k {
            return Err(Error::RankDeficient);
        }
        if let Some(sel) = coordinate_selection(map) {
            return Ok(self.select_coordinates(&sel));
        }
        // Powers of the linear forms L_i(y) = row i of M.
        let lin: Vec<HomogForm> = (0..self.m)
            .map(|i| HomogForm::linear(f, map.row(i)))
            .collect();
        let powers: Vec<Vec<HomogForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![HomogForm::monomial(f, &vec![0u8; k], Fe::ONE)];
                for e in 1..=self.d {
                    let next = v[e - 1].mul(l);
                    v.push(next);
                }
                v
            })
            .collect();
        Ok(subst_rec(&f, &self.coeffs, 0, self.d, self.m, k, &powers))
    }

    /// Restriction to a coordinate subspace: `sel[j]` is the ambient index of
    /// the j-th retained coordinate, all others set to zero.
    pub fn select_coordinates(&self, sel: &[usize]) -> HomogForm {
        let k = sel.len();
        let idx = MonomialIndex::shared(self.d, k);
        let mut full = vec![0u8; self.m];
        let coeffs = (0..idx.len())
            .map(|r| {
                full.iter_mut().for_each(|x| *x = 0);
                for (j, &e) in idx.exps(r).iter().enumerate() {
                    full[sel[j]] = e;
                }
                self.coeffs[rank_of(&full)]
            })
            .collect();
        HomogForm { field: self.field, d: self.d, m: k, coeffs }
    }

    /// Coefficients of the powers of `x_0`: entry `e` is the form of degree
    /// `d - e` in `x_1, ..., x_(m-1)` multiplying `x_0^e`.
    pub fn split_first_var(&self) -> Vec<HomogForm> {
        assert!(self.m >= 2);
        let mut out: Vec<HomogForm> =
            (0..=self.d).map(|e| HomogForm::zero(self.field, self.d - e, self.m - 1)).collect();
        let idx = MonomialIndex::shared(self.d, self.m);
        for (r, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ex = idx.exps(r);
            let e = ex[0] as usize;
            out[e].coeffs[rank_of(&ex[1..])] = c;
        }
        out
    }
}

/// If every column of `map` is a distinct standard basis vector, the ambient
/// index of each column.
fn coordinate_selection(map: &MatFp) -> Option<Vec<usize>> {
    let mut sel = Vec::with_capacity(map.cols);
    let mut seen = vec![false; map.rows];
    for j in 0..map.cols {
        let mut hit = None;
        for i in 0..map.rows {
            let v = map.get(i, j);
            if v.is_zero() {
                continue;
            }
            if v != Fe::ONE || hit.is_some() {
                return None;
            }
            hit = Some(i);
        }
        let i = hit?;
        if seen[i] {
            return None;
        }
        seen[i] = true;
        sel.push(i);
    }
    Some(sel)
}

/// Substitutes into the block of coefficients of monomials in variables
/// `i..m` of degree `e`. The block is contiguous in rank order.
fn subst_rec(
    f: &PrimeField,
    block: &[Fe],
    i: usize,
    e: usize,
    m: usize,
    k: usize,
    powers: &[Vec<HomogForm>],
) -> HomogForm {
    if i + 1 == m {
        return powers[i][e].scale(block[0]);
    }
    let mut out = HomogForm::zero(*f, e, k);
    let mut offset = 0;
    for a in (0..=e).rev() {
        let len = monomial_count(m - i - 1, e - a);
        let sub = &block[offset..offset + len];
        offset += len;
        if sub.iter().all(|c| c.is_zero()) {
            continue;
        }
        let inner = subst_rec(f, sub, i + 1, e - a, m, k, powers);
        let term = if a == 0 { inner } else { powers[i][a].mul(&inner) };
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{FieldRng, PrimeContext};

    fn ctx(seed: u64) -> (PrimeField, FieldRng) {
        let c = PrimeContext::new(1_000_003, seed).unwrap();
        (c.field(), c.rng(0))
    }

    #[test]
    fn counts_and_ranks() {
        assert_eq!(monomial_count(8, 3), 120);
        assert_eq!(monomial_count(14, 5), 8568);
        for (d, m) in [(0, 3), (1, 4), (3, 8), (4, 5), (6, 11), (2, 17), (6, 3)] {
            let idx = MonomialIndex::new(d, m);
            assert_eq!(idx.len(), monomial_count(m, d));
            for r in 0..idx.len() {
                assert_eq!(idx.rank(idx.exps(r)), r);
            }
        }
        let idx = MonomialIndex::new(2, 3);
        assert_eq!(idx.exps(0), &[2, 0, 0]);
        assert_eq!(idx.exps(1), &[1, 1, 0]);
        assert_eq!(idx.exps(5), &[0, 0, 2]);
    }

    #[test]
    fn eval_examples() {
        let (f, mut rng) = ctx(1);
        let x0x1 = HomogForm::monomial(f, &[1, 1, 0], Fe::ONE);
        assert_eq!(x0x1.eval(&[Fe(1), Fe(1), Fe(0)]), Fe(1));
        let g = HomogForm::random(f, 4, 5, &mut rng);
        let pt = rng.vector(5);
        let lam = rng.elem();
        let scaled: Vec<Fe> = pt.iter().map(|&x| f.mul(x, lam)).collect();
        assert_eq!(g.eval(&scaled), f.mul(f.pow(lam, 4), g.eval(&pt)));
    }

    #[test]
    fn monomial_values_match_direct() {
        let (f, mut rng) = ctx(2);
        let pt = rng.vector(4);
        let idx = MonomialIndex::new(3, 4);
        let vals = monomial_values(&f, &pt, 3);
        for r in 0..idx.len() {
            let direct = idx
                .exps(r)
                .iter()
                .zip(&pt)
                .fold(Fe::ONE, |acc, (&e, &x)| f.mul(acc, f.pow(x, e as u64)));
            assert_eq!(vals[r], direct);
        }
    }

    #[test]
    fn partial_examples() {
        let (f, mut rng) = ctx(3);
        let sq = HomogForm::monomial(f, &[2, 0, 0], Fe::ONE);
        let g = sq.partials(1);
        assert_eq!(g[0], HomogForm::monomial(f, &[1, 0, 0], Fe(2)));
        assert!(g[1].is_zero() && g[2].is_zero());
        for _ in 0..50 {
            let form = HomogForm::random(f, 3, 4, &mut rng);
            let grad = form.gradient();
            let pt = rng.vector(4);
            let euler = f.sum(grad.iter().zip(&pt).map(|(gi, &xi)| f.mul(gi.eval(&pt), xi)));
            assert_eq!(euler, f.mul(f.elem(3), form.eval(&pt)));
        }
        // mixed partial symmetry
        let form = HomogForm::random(f, 4, 3, &mut rng);
        let d01 = form.gradient()[0].gradient()[1].clone();
        let d10 = form.gradient()[1].gradient()[0].clone();
        assert_eq!(d01, d10);
        // order-2 list agrees: ∂0∂1 is at rank of x0x1 among degree-2 monomials.
        assert_eq!(form.partials(2)[1], d01);
    }

    #[test]
    fn line_restriction() {
        let (f, mut rng) = ctx(4);
        let x0x1 = HomogForm::monomial(f, &[1, 1, 0], Fe::ONE);
        let r = x0x1
            .restrict_to_line(&[Fe(1), Fe(0), Fe(0)], &[Fe(0), Fe(1), Fe(0)])
            .unwrap();
        assert_eq!(r, UniPoly::x());
        assert!(matches!(
            x0x1.restrict_to_line(&[Fe(1), Fe(2), Fe(0)], &[Fe(2), Fe(4), Fe(0)]),
            Err(Error::DegeneratePair)
        ));
        // Cubic through A: linear coefficient is the directional derivative.
        let cubic = HomogForm::random(f, 3, 4, &mut rng);
        let a = rng.vector(4);
        let shifted = cubic.sub(&HomogForm::monomial(f, &[3, 0, 0, 0], Fe::ONE).scale(
            f.div(cubic.eval(&a), f.pow(a[0], 3)).unwrap(),
        ));
        assert!(shifted.eval(&a).is_zero());
        let u = rng.vector(4);
        let poly = shifted.restrict_to_line(&a, &u).unwrap();
        assert!(poly.coeff(0).is_zero());
        let grad = shifted.gradient_at(&a);
        assert_eq!(poly.coeff(1), f.dot(&grad, &u));
        // brute-force check of all coefficients via evaluation
        let t = rng.elem();
        let pt: Vec<Fe> = a.iter().zip(&u).map(|(&x, &y)| f.add(x, f.mul(t, y))).collect();
        assert_eq!(poly.eval(&f, t), shifted.eval(&pt));
    }

    #[test]
    fn substitution_commutes() {
        let (f, mut rng) = ctx(5);
        for t in 0..100 {
            let m = 2 + t % 5;
            let k = 1 + rng.index(m);
            let d = 1 + t % 4;
            let form = HomogForm::random(f, d, m, &mut rng);
            let map = MatFp { rows: m, cols: k, data: rng.vector(m * k) };
            let g = form.substitute_linear(&map).unwrap();
            let q = rng.vector(k);
            assert_eq!(g.eval(&q), form.eval(&map.mul_vec(&f, &q)));
        }
        let form = HomogForm::random(f, 3, 4, &mut rng);
        assert_eq!(form.substitute_linear(&MatFp::identity(4)).unwrap(), form);
        let bad = MatFp::from_cols(&[vec![Fe(1), Fe(0), Fe(0)], vec![Fe(2), Fe(0), Fe(0)]], 3);
        assert!(matches!(
            HomogForm::random(f, 2, 3, &mut rng).substitute_linear(&bad),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn selection_fast_path_agrees() {
        let (f, mut rng) = ctx(6);
        let form = HomogForm::random(f, 3, 5, &mut rng);
        let sel = [3usize, 0, 4];
        let map = MatFp::from_cols(
            &sel.iter()
                .map(|&i| (0..5).map(|r| if r == i { Fe::ONE } else { Fe::ZERO }).collect())
                .collect::<Vec<_>>(),
            5,
        );
        let fast = form.substitute_linear(&map).unwrap();
        let q = rng.vector(3);
        assert_eq!(fast.eval(&q), form.eval(&map.mul_vec(&f, &q)));
        // A form vanishing on the subspace restricts to zero.
        let x1 = HomogForm::monomial(f, &[0, 1, 0, 0, 0], Fe::ONE);
        let vanish = x1.mul(&HomogForm::random(f, 2, 5, &mut rng));
        assert!(vanish.substitute_linear(&map).unwrap().is_zero());
    }

    #[test]
    fn substitution_functorial() {
        let (f, mut rng) = ctx(7);
        for _ in 0..20 {
            let form = HomogForm::random(f, 3, 5, &mut rng);
            let m2 = MatFp { rows: 5, cols: 4, data: rng.vector(20) };
            let m1 = MatFp { rows: 4, cols: 3, data: rng.vector(12) };
            let lhs = form.substitute_linear(&m2).unwrap().substitute_linear(&m1).unwrap();
            let rhs = form.substitute_linear(&m2.mul(&f, &m1)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rank_unrank_roundtrip(d in 0usize..7, m in 1usize..18, seed in 0u64..10_000) {
                let n = monomial_count(m, d);
                let idx = MonomialIndex::shared(d, m);
                let r = (seed as usize * 7919) % n;
                prop_assert_eq!(rank_of(&idx.unrank(r)), r);
            }
        }
    }
}
