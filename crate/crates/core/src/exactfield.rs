//! Arithmetic in the prime field F_p and seeded sampling.
//!
//! Elements are stored as canonical `u32` residues; the modulus lives in a
//! small `Copy` context ([`PrimeField`]) that every operation is routed
//! through. Products of two residues fit in a `u64`, which the linear algebra
//! exploits by delaying reductions.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default modulus used by every suite.
pub const DEFAULT_PRIME: u64 = 1_000_003;

/// A residue modulo the prime of the surrounding [`PrimeField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub(crate) u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for Fe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field F_p for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for n < 3.3e24 with these bases.
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= n;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe(0)
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe(1)
    }

    #[inline]
    pub fn elem(&self, v: u64) -> Fe {
        Fe((v % self.p as u64) as u32)
    }

    pub fn from_i64(&self, v: i64) -> Fe {
        let p = self.p as i64;
        Fe(v.rem_euclid(p) as u32)
    }

    /// Interprets `v` as an integer in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: Fe) -> i64 {
        let v = a.0 as i64;
        if v > self.p as i64 / 2 {
            v - self.p as i64
        } else {
            v
        }
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let s = a.0 + b.0;
        Fe(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        Fe(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32)
    }

    pub fn pow(&self, a: Fe, mut e: u64) -> Fe {
        let mut base = a;
        let mut acc = Fe(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        // Extended Euclid on machine integers.
        let (mut r0, mut r1) = (self.p as i64, a.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(self.from_i64(t0))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Legendre symbol: 1, -1, or 0.
    pub fn legendre(&self, a: Fe) -> i32 {
        if a.0 == 0 {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let r = self.pow(a, (self.p as u64 - 1) / 2);
        if r.0 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn is_square(&self, a: Fe) -> bool {
        self.legendre(a) >= 0
    }

    /// Square root by Tonelli-Shanks; `None` for non-residues.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return Some(Fe(0));
        }
        if self.p == 2 {
            return Some(a);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        let p = self.p as u64;
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // Smallest non-residue, found deterministically.
        let mut z = Fe(2);
        while self.legendre(z) != -1 {
            z = Fe(z.0 + 1);
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t.0 != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2.0 != 1 {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }

    pub fn sum<I: IntoIterator<Item = Fe>>(&self, it: I) -> Fe {
        let mut acc = 0u64;
        for v in it {
            acc += v.0 as u64;
        }
        self.elem(acc)
    }

    /// Σ aᵢ·bᵢ with a single final reduction where the bound allows it.
    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        let limit = self.accumulation_limit();
        let mut acc = 0u64;
        for (k, (x, y)) in a.iter().zip(b).enumerate() {
            acc = acc.wrapping_add(x.0 as u64 * y.0 as u64);
            if (k + 1) % limit == 0 {
                acc %= self.p as u64;
            }
        }
        self.elem(acc)
    }

    /// How many products of two residues can be added to a reduced residue
    /// before a `u64` accumulator may overflow.
    pub fn accumulation_limit(&self) -> usize {
        let pm = (self.p - 1) as u64;
        if pm == 0 {
            return usize::MAX;
        }
        let lim = (u64::MAX - pm) / (pm * pm);
        lim.min(usize::MAX as u64).max(1) as usize
    }

    /// Binomial coefficient reduced mod p (small arguments only).
    pub fn binomial(&self, n: usize, k: usize) -> Fe {
        if k > n {
            return Fe(0);
        }
        let k = k.min(n - k);
        let mut num = Fe(1);
        let mut den = Fe(1);
        for i in 0..k {
            num = self.mul(num, self.elem((n - i) as u64));
            den = self.mul(den, self.elem((i + 1) as u64));
        }
        self.mul(num, self.inv(den).expect("binomial needs k < p"))
    }
}

/// Modulus plus seed; immutable once created and freely shared across threads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeContext {
    pub p: u64,
    pub seed: u64,
}

impl PrimeContext {
    /// Largest form degree used anywhere in the suites.
    pub const MAX_FORM_DEGREE: u64 = 6;

    pub fn new(p: u64, seed: u64) -> Result<Self> {
        PrimeField::new(p)?;
        if p <= 2 * Self::MAX_FORM_DEGREE {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeContext { p, seed })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    /// Independent sub-stream number `stream` of this context's seed.
    pub fn rng(&self, stream: u64) -> FieldRng {
        FieldRng::new(self.field(), self.seed, stream)
    }
}

/// Deterministic pseudorandom field elements.
///
/// The generator is ChaCha with 8 rounds. The 256-bit key is the seed in
/// little-endian order followed by 24 zero bytes; the ChaCha stream id is the
/// sub-stream index. Field elements are drawn from successive 32-bit outputs
/// by rejection: values at or above `floor(2^32 / p) * p` are discarded and
/// the rest reduced mod p.
#[derive(Clone, Debug)]
pub struct FieldRng {
    field: PrimeField,
    inner: ChaCha8Rng,
    zone: u64,
}

impl FieldRng {
    pub fn new(field: PrimeField, seed: u64, stream: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(stream);
        let p = field.modulus() as u64;
        let zone = ((1u64 << 32) / p) * p;
        FieldRng { field, inner, zone }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    pub fn elem(&mut self) -> Fe {
        loop {
            let v = self.inner.next_u32() as u64;
            if v < self.zone {
                return Fe((v % self.field.modulus() as u64) as u32);
            }
        }
    }

    pub fn nonzero(&mut self) -> Fe {
        loop {
            let v = self.elem();
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn vector(&mut self, n: usize) -> Vec<Fe> {
        (0..n).map(|_| self.elem()).collect()
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n = n as u64;
        let zone = (u64::MAX / n) * n;
        loop {
            let v = self.inner.next_u64();
            if v < zone {
                return (v % n) as usize;
            }
        }
    }

    /// A fresh generator derived from this one; used to hand work items their
    /// own stream without disturbing the parent sequence order.
    pub fn fork(&mut self, stream: u64) -> FieldRng {
        let seed = self.inner.next_u64();
        FieldRng::new(self.field, seed, stream)
    }

    /// Random subset of `k` distinct indices from `0..n`, in increasing order.
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.index(n - i);
            idx.swap(i, j);
        }
        let mut out = idx[..k].to_vec();
        out.sort_unstable();
        out
    }
}
