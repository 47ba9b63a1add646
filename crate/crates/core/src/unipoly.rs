//! Univariate polynomials and truncated power series over F_p.

use crate::error::{Error, Result};
use crate::exactfield::{Fe, PrimeField};
use crate::linsolve::MatFp;

/// Dense polynomial, lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Fe>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_u64(f: &PrimeField, coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| f.elem(c)).collect())
    }

    pub fn from_i64(f: &PrimeField, coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| f.from_i64(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Fe::ONE)
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        UniPoly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    /// `x - r`.
    pub fn linear_root(f: &PrimeField, r: Fe) -> Self {
        UniPoly::new(vec![f.neg(r), Fe::ONE])
    }

    pub fn from_roots(f: &PrimeField, roots: &[Fe]) -> Self {
        roots
            .iter()
            .fold(UniPoly::one(), |acc, &r| acc.mul(f, &UniPoly::linear_root(f, r)))
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn eval(&self, f: &PrimeField, x: Fe) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &PrimeField, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &PrimeField, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &PrimeField) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &PrimeField, s: Fe) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Fe::ZERO; k];
        c.extend_from_slice(&self.coeffs);
        UniPoly { coeffs: c }
    }

    pub fn mul(&self, f: &PrimeField, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let n = self.coeffs.len() + o.coeffs.len() - 1;
        let p = f.modulus() as u64;
        let limit = f.accumulation_limit();
        let mut acc = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] += a.0 as u64 * b.0 as u64;
            }
            if (i + 1) % limit == 0 {
                acc.iter_mut().for_each(|x| *x %= p);
            }
        }
        UniPoly::new(acc.into_iter().map(|x| f.elem(x)).collect())
    }

    pub fn pow(&self, f: &PrimeField, mut e: u64) -> UniPoly {
        let mut base = self.clone();
        let mut acc = UniPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        acc
    }

    /// Quotient and remainder; errors on division by the zero polynomial.
    pub fn divrem(&self, f: &PrimeField, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((UniPoly::zero(), UniPoly::zero()));
        };
        if nd < dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let inv = f.inv(d.lc())?;
        let mut r = self.coeffs.clone();
        let mut q = vec![Fe::ZERO; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = f.mul(r[k + dd], inv);
            q[k] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((UniPoly::new(q), UniPoly::new(r)))
    }

    pub fn rem(&self, f: &PrimeField, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(f, d)?.1)
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, f: &PrimeField, d: &UniPoly) -> UniPoly {
        let (q, r) = self.divrem(f, d).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, f: &PrimeField) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        self.scale(f, f.inv(self.lc()).expect("nonzero lc"))
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, f: &PrimeField, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod m`.
    pub fn powmod(&self, f: &PrimeField, mut e: u64, m: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(f, m)?;
        let mut acc = UniPoly::one().rem(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m)?;
            }
            base = base.mul(f, &base).rem(f, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn deriv(&self, f: &PrimeField) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.elem(i as u64)))
                .collect(),
        )
    }

    /// `self(x + a)`.
    pub fn shift_arg(&self, f: &PrimeField, a: Fe) -> UniPoly {
        let xa = UniPoly::new(vec![a, Fe::ONE]);
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, &c| acc.mul(f, &xa).add(f, &UniPoly::constant(c)))
    }

    /// Reversal `x^n self(1/x)` for a chosen `n >= deg`.
    pub fn reverse(&self, n: usize) -> UniPoly {
        let mut c = vec![Fe::ZERO; n + 1];
        for (i, &v) in self.coeffs.iter().enumerate() {
            c[n - i] = v;
        }
        UniPoly::new(c)
    }

    pub fn is_squarefree(&self, f: &PrimeField) -> bool {
        self.gcd(f, &self.deriv(f)).degree() == Some(0)
    }

    /// Roots in F_p with multiplicity, sorted.
    pub fn roots_in_field(&self, f: &PrimeField) -> Result<Vec<Fe>> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self.monic(f);
        if q.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let xp = UniPoly::x().powmod(f, f.modulus() as u64, &q)?;
        let split = xp.sub(f, &UniPoly::x()).gcd(f, &q);
        let mut distinct = Vec::new();
        equal_degree_split(f, &split, &mut distinct)?;
        distinct.sort();
        let mut out = Vec::new();
        for r in distinct {
            let lin = UniPoly::linear_root(f, r);
            let mut rest = q.clone();
            loop {
                let (qq, rr) = rest.divrem(f, &lin)?;
                if !rr.is_zero() {
                    break;
                }
                out.push(r);
                rest = qq;
            }
        }
        Ok(out)
    }

    /// Resultant as the determinant of the Sylvester matrix.
    pub fn resultant(&self, f: &PrimeField, o: &UniPoly) -> Fe {
        let (Some(m), Some(n)) = (self.degree(), o.degree()) else {
            return Fe::ZERO;
        };
        let size = m + n;
        if size == 0 {
            return Fe::ONE;
        }
        let mut s = MatFp::zeros(size, size);
        for i in 0..n {
            for (k, &c) in self.coeffs.iter().rev().enumerate() {
                s.set(i, i + k, c);
            }
        }
        for i in 0..m {
            for (k, &c) in o.coeffs.iter().rev().enumerate() {
                s.set(n + i, i + k, c);
            }
        }
        s.determinant(f)
    }

    /// Interpolating polynomial of degree `< xs.len()` (Newton form).
    pub fn interpolate(f: &PrimeField, xs: &[Fe], ys: &[Fe]) -> Result<UniPoly> {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut dd = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = f.sub(xs[i], xs[i - j]);
                dd[i] = f.div(f.sub(dd[i], dd[i - 1]), den)?;
            }
        }
        let mut acc = UniPoly::zero();
        for i in (0..n).rev() {
            acc = acc
                .mul(f, &UniPoly::linear_root(f, xs[i]))
                .add(f, &UniPoly::constant(dd[i]));
        }
        Ok(acc)
    }
}

/// Splits a monic squarefree product of distinct linear factors into roots.
fn equal_degree_split(f: &PrimeField, g: &UniPoly, out: &mut Vec<Fe>) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(f.neg(g.coeff(0)));
            return Ok(());
        }
        _ => {}
    }
    let p = f.modulus() as u64;
    if p == 2 {
        // Only 0 and 1 can be roots.
        for r in [Fe(0), Fe(1)] {
            if g.eval(f, r).is_zero() {
                out.push(r);
            }
        }
        return Ok(());
    }
    for a in 0..64u64 {
        let shifted = UniPoly::new(vec![f.elem(a), Fe::ONE]);
        let h = shifted
            .powmod(f, (p - 1) / 2, g)?
            .sub(f, &UniPoly::one())
            .gcd(f, g);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && Some(dh) < g.degree() {
            let other = g.div_exact(f, &h);
            equal_degree_split(f, &h, out)?;
            equal_degree_split(f, &other.monic(f), out)?;
            return Ok(());
        }
    }
    Err(Error::InternalRandomnessExhausted)
}

/// Power series truncated at `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub coeffs: Vec<Fe>,
    pub order: usize,
}

impl TruncSeries {
    pub fn new(mut coeffs: Vec<Fe>, order: usize) -> Self {
        coeffs.resize(order, Fe::ZERO);
        TruncSeries { coeffs, order }
    }

    pub fn from_poly(p: &UniPoly, order: usize) -> Self {
        Self::new(p.coeffs().iter().take(order).copied().collect(), order)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn mul(&self, f: &PrimeField, o: &TruncSeries) -> TruncSeries {
        let order = self.order.min(o.order);
        let mut c = vec![Fe::ZERO; order];
        for i in 0..order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..order - i {
                c[i + j] = f.add(c[i + j], f.mul(self.coeffs[i], o.coeffs[j]));
            }
        }
        TruncSeries { coeffs: c, order }
    }

    pub fn neg(&self, f: &PrimeField) -> TruncSeries {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            order: self.order,
        }
    }

    /// Square root with constant term `branch`; `None` when the constant term
    /// of `self` vanishes. Requires `branch^2 = self(0)`.
    pub fn sqrt(&self, f: &PrimeField, branch: Fe) -> Option<TruncSeries> {
        let s0 = self.coeff(0);
        if s0.is_zero() || branch.is_zero() {
            return None;
        }
        assert_eq!(f.mul(branch, branch), s0, "branch is not a square root of s(0)");
        let n = self.order;
        let inv2r0 = f.inv(f.add(branch, branch)).ok()?;
        let mut r = vec![Fe::ZERO; n];
        if n > 0 {
            r[0] = branch;
        }
        for k in 1..n {
            let mut acc = self.coeffs[k];
            for i in 1..k {
                acc = f.sub(acc, f.mul(r[i], r[k - i]));
            }
            r[k] = f.mul(acc, inv2r0);
        }
        Some(TruncSeries { coeffs: r, order: n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn big() -> PrimeField {
        PrimeField::new(1_000_003).unwrap()
    }

    fn rand_poly(rng: &mut crate::FieldRng, deg: usize) -> UniPoly {
        let mut c = rng.vector(deg + 1);
        c[deg] = rng.nonzero();
        UniPoly::new(c)
    }

    #[test]
    fn roots_small_examples() {
        let f = f7();
        let p = UniPoly::from_i64(&f, &[-1, 0, 1]);
        assert_eq!(p.roots_in_field(&f).unwrap(), vec![Fe(1), Fe(6)]);
        let q = UniPoly::from_i64(&f, &[-3, 0, 1]);
        assert!(q.roots_in_field(&f).unwrap().is_empty());
        let r = UniPoly::from_roots(&f, &[Fe(2), Fe(2), Fe(5)]);
        assert_eq!(r.roots_in_field(&f).unwrap(), vec![Fe(2), Fe(2), Fe(5)]);
    }

    #[test]
    fn roots_large_field() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 5).unwrap().rng(0);
        for _ in 0..30 {
            let k = 1 + rng.index(12);
            let mut roots: Vec<Fe> = (0..k).map(|_| rng.elem()).collect();
            roots.push(roots[0]);
            let extra = UniPoly::from_u64(&f, &[1, 0, 0]).add(&f, &UniPoly::x().pow(&f, 2));
            // x^2 + 1 has no roots since 1000003 ≡ 3 mod 4.
            let p = UniPoly::from_roots(&f, &roots).mul(&f, &extra).scale(&f, Fe(17));
            roots.sort();
            assert_eq!(p.roots_in_field(&f).unwrap(), roots);
        }
    }

    #[test]
    fn root_count_bounded_and_divides() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 6).unwrap().rng(0);
        for _ in 0..50 {
            let n = 1 + rng.index(20);
            let p = rand_poly(&mut rng, n);
            let roots = p.roots_in_field(&f).unwrap();
            assert!(roots.len() <= p.degree().unwrap());
            let prod = UniPoly::from_roots(&f, &roots);
            assert!(p.rem(&f, &prod).unwrap().is_zero());
        }
    }

    #[test]
    fn resultant_examples() {
        let f = f7();
        let a = UniPoly::from_i64(&f, &[1, 0, 1]);
        let b = UniPoly::from_i64(&f, &[1, 1]);
        assert_eq!(a.resultant(&f, &b), Fe(2));
    }

    #[test]
    fn resultant_laws() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 7).unwrap().rng(0);
        for t in 0..500 {
            let da = 1 + rng.index(6);
            let db = 1 + rng.index(6);
            let (a, b) = if t % 2 == 0 {
                let common = UniPoly::linear_root(&f, rng.elem());
                (
                    rand_poly(&mut rng, da - 1).mul(&f, &common),
                    rand_poly(&mut rng, db - 1).mul(&f, &common),
                )
            } else {
                (rand_poly(&mut rng, da), rand_poly(&mut rng, db))
            };
            let r = a.resultant(&f, &b);
            let g = a.gcd(&f, &b);
            assert_eq!(r.is_zero(), g.degree().unwrap() >= 1);
            let rb = b.resultant(&f, &a);
            let sign = (a.degree().unwrap() * b.degree().unwrap()) % 2 == 1;
            assert_eq!(r, if sign { f.neg(rb) } else { rb });
        }
        // shared root at 3
        let c = rand_poly(&mut rng, 3);
        let b = UniPoly::linear_root(&f, Fe(3)).mul(&f, &c);
        let a = UniPoly::linear_root(&f, Fe(3)).mul(&f, &rand_poly(&mut rng, 2));
        assert!(a.resultant(&f, &b).is_zero());
    }

    #[test]
    fn gcd_divides() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 8).unwrap().rng(0);
        for _ in 0..100 {
            let nc = rng.index(4);
            let c = rand_poly(&mut rng, nc);
            let na = rng.index(6);
            let a = rand_poly(&mut rng, na).mul(&f, &c);
            let nb = rng.index(6);
            let b = rand_poly(&mut rng, nb).mul(&f, &c);
            let g = a.gcd(&f, &b);
            assert!(a.rem(&f, &g).unwrap().is_zero());
            assert!(b.rem(&f, &g).unwrap().is_zero());
            assert!(g.degree().unwrap() <= a.degree().unwrap().min(b.degree().unwrap()));
            assert!(g.degree() >= c.degree());
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 9).unwrap().rng(0);
        let p = rand_poly(&mut rng, 7);
        let xs: Vec<Fe> = (0..8).map(|i| f.elem(i * 3 + 1)).collect();
        let ys: Vec<Fe> = xs.iter().map(|&x| p.eval(&f, x)).collect();
        assert_eq!(UniPoly::interpolate(&f, &xs, &ys).unwrap(), p);
    }

    #[test]
    fn shift_and_reverse() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 10).unwrap().rng(0);
        let p = rand_poly(&mut rng, 5);
        let a = rng.elem();
        let x = rng.elem();
        assert_eq!(p.shift_arg(&f, a).eval(&f, x), p.eval(&f, f.add(x, a)));
        let r = p.reverse(6);
        let xi = f.inv(x).unwrap();
        assert_eq!(r.eval(&f, x), f.mul(f.pow(x, 6), p.eval(&f, xi)));
    }

    #[test]
    fn series_sqrt_binomial() {
        let f = big();
        let s = TruncSeries::new(vec![Fe(1), Fe(1)], 3);
        let r = s.sqrt(&f, Fe(1)).unwrap();
        let half = f.inv(Fe(2)).unwrap();
        let eighth = f.inv(Fe(8)).unwrap();
        assert_eq!(r.coeffs, vec![Fe(1), half, f.neg(eighth)]);
        let rn = s.sqrt(&f, f.neg(Fe(1))).unwrap();
        assert_eq!(rn, r.neg(&f));
        let zero_start = TruncSeries::new(vec![Fe(0), Fe(1)], 3);
        assert!(zero_start.sqrt(&f, Fe(0)).is_none());
    }

    #[test]
    fn series_sqrt_squares_back() {
        let f = big();
        let mut rng = PrimeContext::new(1_000_003, 11).unwrap().rng(0);
        for _ in 0..100 {
            let b = rng.nonzero();
            let mut c = rng.vector(8);
            c[0] = f.mul(b, b);
            let s = TruncSeries::new(c, 8);
            let r = s.sqrt(&f, b).unwrap();
            assert_eq!(r.mul(&f, &r), s);
        }
    }
}
