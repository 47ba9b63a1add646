//! The hyperelliptic curve `y^2 = f(x)` with `deg f = 2g + 2`.
//!
//! The leading coefficient of `f` is a nonzero square `s^2`, so the curve has
//! two rational places at infinity, `∞+` and `∞-`, where `y ~ +s x^(g+1)` and
//! `y ~ -s x^(g+1)` respectively. The canonical divisor is then
//! `K = (g - 1)(∞+ + ∞-)`.
//!
//! Riemann-Roch spaces are computed with the ansatz `(a(x) + b(x) y) / den(x)`:
//! `den` clears the allowed finite poles, the degrees of `a` and `b` are
//! bounded by the allowed poles at infinity, and the remaining requirements
//! are linear conditions on truncated local expansions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeContext, PrimeField};
use crate::linsolve::{normalize, MatFp, ProjSubspace};
use crate::unipoly::{TruncSeries, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Affine { x: Fe, y: Fe },
    InfPlus,
    InfMinus,
}

impl CurvePoint {
    pub fn x(&self) -> Option<Fe> {
        match self {
            CurvePoint::Affine { x, .. } => Some(*x),
            _ => None,
        }
    }
}

/// Formal integer combination of distinct curve points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    terms: Vec<(CurvePoint, i64)>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn point(p: CurvePoint) -> Self {
        Divisor { terms: vec![(p, 1)] }
    }

    pub fn from_terms(terms: &[(CurvePoint, i64)]) -> Self {
        let mut d = Divisor::zero();
        for &(p, n) in terms {
            d.add_point(p, n);
        }
        d
    }

    /// Sum of the given points with multiplicity one each (repeats add up).
    pub fn from_points(pts: &[CurvePoint]) -> Self {
        let mut d = Divisor::zero();
        for &p in pts {
            d.add_point(p, 1);
        }
        d
    }

    pub fn add_point(&mut self, p: CurvePoint, n: i64) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.0 == p) {
            t.1 += n;
        } else {
            self.terms.push((p, n));
        }
        self.terms.retain(|t| t.1 != 0);
        self.terms.sort();
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for &(p, n) in &o.terms {
            d.add_point(p, n);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut d = Divisor::zero();
        for &(p, n) in &self.terms {
            d.add_point(p, n * k);
        }
        d
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.scale(-1))
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn terms(&self) -> &[(CurvePoint, i64)] {
        &self.terms
    }

    pub fn multiplicity(&self, p: &CurvePoint) -> i64 {
        self.terms.iter().find(|t| t.0 == *p).map_or(0, |t| t.1)
    }

    /// Support points, each listed once.
    pub fn support(&self) -> Vec<CurvePoint> {
        self.terms.iter().map(|t| t.0).collect()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.iter().all(|t| t.1 >= 0)
    }
}

/// A function `(a(x) + b(x) y) / den(x)` on the curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRFunction {
    pub a: UniPoly,
    pub b: UniPoly,
    pub den: UniPoly,
}

/// Replayable description of a curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub p: String,
    pub g: usize,
    pub f_coeffs: Vec<String>,
    pub seed: String,
}

#[derive(Clone, Debug)]
pub struct HypCurve {
    pub field: PrimeField,
    pub g: usize,
    pub f: UniPoly,
    /// Square root of the leading coefficient of `f`, the branch at `∞+`.
    pub s: Fe,
    pub seed: u64,
    /// `±sqrt(f_rev(w))` at `∞+` and `∞-`, long enough for every use here.
    inf_series: [TruncSeries; 2],
}

const INF_SERIES_ORDER: usize = 160;

impl HypCurve {
    pub fn from_poly(field: PrimeField, g: usize, f: UniPoly, seed: u64) -> Result<Self> {
        if f.degree() != Some(2 * g + 2) || !f.is_squarefree(&field) {
            return Err(Error::DegenerateConfiguration);
        }
        let s = field.sqrt(f.lc()).ok_or(Error::DegenerateConfiguration)?;
        let rev = f.reverse(2 * g + 2);
        let series = TruncSeries::from_poly(&rev, INF_SERIES_ORDER);
        let plus = series.sqrt(&field, s).ok_or(Error::DegenerateConfiguration)?;
        let minus = plus.neg(&field);
        Ok(HypCurve { field, g, f, s, seed, inf_series: [plus, minus] })
    }

    /// Random curve of genus `g`; `f` is resampled until it has a square
    /// leading coefficient and no repeated roots.
    pub fn random(ctx: &PrimeContext, g: usize, rng: &mut FieldRng) -> Result<Self> {
        assert!(g >= 2);
        let field = ctx.field();
        for _ in 0..10_000 {
            let mut c = rng.vector(2 * g + 3);
            let s = rng.nonzero();
            c[2 * g + 2] = field.mul(s, s);
            let f = UniPoly::new(c);
            if f.is_squarefree(&field) {
                return Self::from_poly(field, g, f, ctx.seed);
            }
        }
        Err(Error::SamplingExhausted(10_000))
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            p: self.field.modulus().to_string(),
            g: self.g,
            f_coeffs: (0..=2 * self.g + 2).map(|i| self.f.coeff(i).to_string()).collect(),
            seed: self.seed.to_string(),
        }
    }

    pub fn is_on_curve(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Affine { x, y } => self.field.mul(*y, *y) == self.f.eval(&self.field, *x),
            _ => true,
        }
    }

    pub fn is_weierstrass(&self, p: &CurvePoint) -> bool {
        matches!(p, CurvePoint::Affine { y, .. } if y.is_zero())
    }

    pub fn involution(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: *x, y: self.field.neg(*y) },
            CurvePoint::InfPlus => CurvePoint::InfMinus,
            CurvePoint::InfMinus => CurvePoint::InfPlus,
        }
    }

    /// The affine point above `x` with the sign of `y` chosen by the RNG, if
    /// `f(x)` is a nonzero square.
    pub fn point_above(&self, x: Fe, rng: &mut FieldRng) -> Option<CurvePoint> {
        let fx = self.f.eval(&self.field, x);
        if fx.is_zero() {
            return None;
        }
        let y = self.field.sqrt(fx)?;
        let y = if rng.next_u32() & 1 == 1 { self.field.neg(y) } else { y };
        Some(CurvePoint::Affine { x, y })
    }

    /// Uniformly drawn affine non-Weierstrass point.
    pub fn random_point(&self, rng: &mut FieldRng) -> Result<CurvePoint> {
        for _ in 0..10_000 {
            let x = rng.elem();
            if let Some(p) = self.point_above(x, rng) {
                return Ok(p);
            }
        }
        Err(Error::SamplingExhausted(10_000))
    }

    /// `k` random points with pairwise distinct x-coordinates avoiding `avoid_x`.
    pub fn random_points_distinct_x(
        &self,
        k: usize,
        avoid_x: &[Fe],
        rng: &mut FieldRng,
    ) -> Result<Vec<CurvePoint>> {
        let mut out: Vec<CurvePoint> = Vec::with_capacity(k);
        let mut tries = 0;
        while out.len() < k {
            tries += 1;
            if tries > 10_000 {
                return Err(Error::SamplingExhausted(10_000));
            }
            let p = self.random_point(rng)?;
            let x = p.x().expect("affine");
            if avoid_x.contains(&x) || out.iter().any(|q| q.x() == Some(x)) {
                continue;
            }
            out.push(p);
        }
        Ok(out)
    }

    pub fn canonical_divisor(&self) -> Divisor {
        let k = self.g as i64 - 1;
        Divisor::from_terms(&[(CurvePoint::InfPlus, k), (CurvePoint::InfMinus, k)])
    }

    fn inf_series(&self, p: &CurvePoint) -> &TruncSeries {
        match p {
            CurvePoint::InfPlus => &self.inf_series[0],
            CurvePoint::InfMinus => &self.inf_series[1],
            CurvePoint::Affine { .. } => unreachable!("affine point"),
        }
    }

    /// Local branch `y(x0 + t)` at an affine non-Weierstrass point.
    fn local_y(&self, x0: Fe, y0: Fe, order: usize) -> Result<TruncSeries> {
        let fx = TruncSeries::from_poly(&self.f.shift_arg(&self.field, x0), order);
        fx.sqrt(&self.field, y0).ok_or(Error::UnsupportedSupport)
    }

    /// Coefficients `t^0 .. t^(order-1)` of `a(x0+t) + b(x0+t) y` at an affine point.
    pub fn expand_affine(&self, a: &UniPoly, b: &UniPoly, p: &CurvePoint, order: usize) -> Result<Vec<Fe>> {
        let f = self.field;
        let CurvePoint::Affine { x, y } = *p else {
            unreachable!("affine point expected");
        };
        if y.is_zero() {
            return Err(Error::UnsupportedSupport);
        }
        let ys = self.local_y(x, y, order)?;
        let sa = TruncSeries::from_poly(&a.shift_arg(&f, x), order);
        let sb = TruncSeries::from_poly(&b.shift_arg(&f, x), order);
        let prod = sb.mul(&f, &ys);
        Ok((0..order).map(|i| f.add(sa.coeff(i), prod.coeff(i))).collect())
    }

    /// Laurent coefficient of `x^k` in `a + b y` at `∞±`.
    pub fn laurent_coeff(&self, a: &UniPoly, b: &UniPoly, p: &CurvePoint, k: i64) -> Fe {
        let f = self.field;
        let s = self.inf_series(p);
        let mut c = if k >= 0 { a.coeff(k as usize) } else { Fe::ZERO };
        for (i, &bi) in b.coeffs().iter().enumerate() {
            let idx = i as i64 + self.g as i64 + 1 - k;
            if idx < 0 || bi.is_zero() {
                continue;
            }
            assert!((idx as usize) < s.order, "expansion at infinity too short");
            c = f.add(c, f.mul(bi, s.coeff(idx as usize)));
        }
        c
    }

    /// Pole bound of `a + b y` at infinity from the degrees alone.
    fn numerator_top(&self, a: &UniPoly, b: &UniPoly) -> i64 {
        let da = a.degree().map_or(i64::MIN, |d| d as i64);
        let db = b.degree().map_or(i64::MIN, |d| d as i64 + self.g as i64 + 1);
        da.max(db)
    }

    /// Order of `a + b y` at a point; `None` for the zero function.
    pub fn numerator_order(&self, a: &UniPoly, b: &UniPoly, p: &CurvePoint) -> Result<Option<i64>> {
        if a.is_zero() && b.is_zero() {
            return Ok(None);
        }
        match p {
            CurvePoint::Affine { .. } => {
                let order = 4 * (self.numerator_top(a, b).max(0) as usize) + 8;
                let c = self.expand_affine(a, b, p, order)?;
                let k = c.iter().position(|x| !x.is_zero());
                Ok(Some(k.expect("nonzero function has finite order") as i64))
            }
            _ => {
                let top = self.numerator_top(a, b);
                let mut k = top;
                while self.laurent_coeff(a, b, p, k).is_zero() {
                    k -= 1;
                    assert!(k > -2 * top.max(0) - 8, "order search ran away");
                }
                Ok(Some(-k))
            }
        }
    }

    /// Order of a function `(a + b y)/den` at a point.
    pub fn order_at(&self, h: &RRFunction, p: &CurvePoint) -> Result<Option<i64>> {
        let Some(num) = self.numerator_order(&h.a, &h.b, p)? else {
            return Ok(None);
        };
        let den = match p {
            CurvePoint::Affine { x, .. } => {
                let lin = UniPoly::linear_root(&self.field, *x);
                let mut d = h.den.clone();
                let mut k = 0;
                loop {
                    let (q, r) = d.divrem(&self.field, &lin)?;
                    if !r.is_zero() {
                        break;
                    }
                    d = q;
                    k += 1;
                }
                k
            }
            _ => -(h.den.degree().expect("nonzero denominator") as i64),
        };
        Ok(Some(num - den))
    }

    /// Shape of the `(a + b y)/den` ansatz for `L(D)`.
    pub fn rr_layout(&self, d: &Divisor) -> Result<RRLayout> {
        let f = self.field;
        let mut groups: Vec<(Fe, Fe, i64, i64)> = Vec::new(); // (x, y, n_P, n_iP) with P = (x, y)
        let (mut m_plus, mut m_minus) = (0i64, 0i64);
        for &(p, n) in d.terms() {
            match p {
                CurvePoint::InfPlus => m_plus = n,
                CurvePoint::InfMinus => m_minus = n,
                CurvePoint::Affine { x, y } => {
                    if y.is_zero() {
                        return Err(Error::UnsupportedSupport);
                    }
                    if !self.is_on_curve(&p) {
                        return Err(Error::DegenerateConfiguration);
                    }
                    if let Some(gr) = groups.iter_mut().find(|gr| gr.0 == x) {
                        if gr.1 == y {
                            gr.2 += n;
                        } else {
                            gr.3 += n;
                        }
                    } else {
                        groups.push((x, y, n, 0));
                    }
                }
            }
        }
        let mut den = UniPoly::one();
        let mut finite = Vec::new();
        for &(x, y, np, nq) in &groups {
            let e = np.max(nq).max(0);
            if e > 0 {
                den = den.mul(&f, &UniPoly::linear_root(&f, x).pow(&f, e as u64));
            }
            finite.push(LocalCondition { point: CurvePoint::Affine { x, y }, count: (e - np) as usize });
            finite.push(LocalCondition {
                point: CurvePoint::Affine { x, y: f.neg(y) },
                count: (e - nq) as usize,
            });
        }
        let delta = den.degree().unwrap() as i64;
        let top = delta + m_plus.max(m_minus);
        let na = if top >= 0 { top as usize + 1 } else { 0 };
        let nb = if top - self.g as i64 - 1 >= 0 { (top - self.g as i64) as usize } else { 0 };
        Ok(RRLayout { den, delta, m_plus, m_minus, top, na, nb, finite })
    }

    /// Basis of `L(D)`.
    pub fn rr_space(&self, d: &Divisor) -> Result<Vec<RRFunction>> {
        let layout = self.rr_layout(d)?;
        Ok(self
            .rr_vectors(&layout)?
            .iter()
            .map(|v| layout.function(v))
            .collect())
    }

    /// `h^0(D)`.
    pub fn h0(&self, d: &Divisor) -> Result<usize> {
        let layout = self.rr_layout(d)?;
        Ok(self.rr_vectors(&layout)?.len())
    }

    /// Condition matrix of the ansatz; its kernel is `L(D)` in ansatz coordinates.
    pub fn rr_conditions(&self, layout: &RRLayout) -> Result<Vec<Vec<Fe>>> {
        let f = self.field;
        let n = layout.na + layout.nb;
        let mut rows = Vec::new();
        for (p, m) in [(CurvePoint::InfPlus, layout.m_plus), (CurvePoint::InfMinus, layout.m_minus)] {
            let s = self.inf_series(&p);
            for k in (layout.delta + m + 1)..=layout.top {
                let mut row = vec![Fe::ZERO; n];
                if k >= 0 && (k as usize) < layout.na {
                    row[k as usize] = Fe::ONE;
                }
                for i in 0..layout.nb {
                    let idx = i as i64 + self.g as i64 + 1 - k;
                    if idx >= 0 {
                        row[layout.na + i] = s.coeff(idx as usize);
                    }
                }
                rows.push(row);
            }
        }
        for cond in &layout.finite {
            if cond.count == 0 {
                continue;
            }
            let CurvePoint::Affine { x, y } = cond.point else { unreachable!() };
            let order = cond.count;
            let ys = self.local_y(x, y, order)?;
            // Expansion of x^i around x0: column i of binomial shifts.
            let pow_exp = |i: usize, j: usize| -> Fe {
                if j > i {
                    Fe::ZERO
                } else {
                    f.mul(f.binomial(i, j), f.pow(x, (i - j) as u64))
                }
            };
            for j in 0..order {
                let mut row = vec![Fe::ZERO; n];
                for (i, slot) in row.iter_mut().enumerate().take(layout.na) {
                    *slot = pow_exp(i, j);
                }
                for i in 0..layout.nb {
                    let mut c = Fe::ZERO;
                    for l in 0..=j.min(i) {
                        c = f.add(c, f.mul(pow_exp(i, l), ys.coeff(j - l)));
                    }
                    row[layout.na + i] = c;
                }
                rows.push(row);
            }
        }
        Ok(rows)
    }

    /// Kernel vectors of the ansatz conditions.
    pub fn rr_vectors(&self, layout: &RRLayout) -> Result<Vec<Vec<Fe>>> {
        let n = layout.na + layout.nb;
        if n == 0 {
            return Ok(Vec::new());
        }
        let rows = self.rr_conditions(layout)?;
        if rows.is_empty() {
            return Ok(MatFp::identity(n).row_vecs());
        }
        Ok(MatFp::from_rows(&rows, n).kernel(&self.field))
    }

    /// Generic effective divisor of degree `k`: distinct affine points with
    /// distinct x-coordinates.
    pub fn random_effective(&self, k: usize, rng: &mut FieldRng) -> Result<Divisor> {
        Ok(Divisor::from_points(&self.random_points_distinct_x(k, &[], rng)?))
    }

    /// Samples `N ∈ |2D|` made of `2g` distinct rational affine points, disjoint
    /// from `D`, with no two conjugate under the involution and none fixed by it.
    ///
    /// `g` of the points are drawn at random; the section of `L(2D)` vanishing
    /// there is unique, and the attempt succeeds when its remaining `g` zeros
    /// are rational and admissible.
    pub fn sample_n(&self, d: &Divisor, rng: &mut FieldRng) -> Result<NData> {
        let f = self.field;
        let g = self.g;
        let d_xs: Vec<Fe> = d.support().iter().filter_map(|p| p.x()).collect();
        let two_d = d.scale(2);
        for _ in 0..1000 {
            let q = self.random_points_distinct_x(g, &d_xs, rng)?;
            let target = two_d.sub(&Divisor::from_points(&q));
            let basis = self.rr_space(&target)?;
            if basis.len() != 1 {
                continue;
            }
            let s = basis.into_iter().next().unwrap();
            let mut rest = s.a.mul(&f, &s.a).sub(&f, &s.b.mul(&f, &s.b).mul(&f, &self.f));
            let mut ok = true;
            for p in &q {
                let lin = UniPoly::linear_root(&f, p.x().unwrap());
                let (qq, r) = rest.divrem(&f, &lin)?;
                if !r.is_zero() {
                    ok = false;
                    break;
                }
                rest = qq;
            }
            if !ok {
                continue;
            }
            for &x in &d_xs {
                let lin2 = UniPoly::linear_root(&f, x).pow(&f, 2);
                let (qq, r) = rest.divrem(&f, &lin2)?;
                if !r.is_zero() {
                    ok = false;
                    break;
                }
                rest = qq;
            }
            if !ok || rest.degree() != Some(g) {
                continue;
            }
            let roots = rest.roots_in_field(&f)?;
            if roots.len() != g || roots.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let mut pts = q.clone();
            for &x0 in &roots {
                if d_xs.contains(&x0) || q.iter().any(|p| p.x() == Some(x0)) {
                    ok = false;
                    break;
                }
                let bx = s.b.eval(&f, x0);
                if bx.is_zero() {
                    ok = false;
                    break;
                }
                let y0 = f.neg(f.div(s.a.eval(&f, x0), bx)?);
                if y0.is_zero() {
                    ok = false;
                    break;
                }
                let p = CurvePoint::Affine { x: x0, y: y0 };
                debug_assert!(self.is_on_curve(&p));
                pts.push(p);
            }
            if !ok {
                continue;
            }
            return Ok(NData { n: Divisor::from_points(&pts), points: pts, section: s });
        }
        Err(Error::SamplingExhausted(1000))
    }

    /// Draws `D` (degree g) and `N ∈ |2D|` together, redrawing `D` whenever
    /// `N` sampling is exhausted or `h^0(2D) != g + 1`.
    pub fn sample_generic_pair(&self, rng: &mut FieldRng) -> Result<(Divisor, NData)> {
        for _ in 0..20 {
            let d = self.random_effective(self.g, rng)?;
            if self.h0(&d.scale(2))? != self.g + 1 {
                continue;
            }
            match self.sample_n(&d, rng) {
                Ok(n) => return Ok((d, n)),
                Err(Error::SamplingExhausted(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::SamplingExhausted(20))
    }
}

#[derive(Clone, Debug)]
pub struct LocalCondition {
    pub point: CurvePoint,
    /// Number of leading expansion coefficients forced to vanish.
    pub count: usize,
}

/// Ansatz data for `L(D)`: `na` coefficients of `a`, then `nb` of `b`.
#[derive(Clone, Debug)]
pub struct RRLayout {
    pub den: UniPoly,
    pub delta: i64,
    pub m_plus: i64,
    pub m_minus: i64,
    pub top: i64,
    pub na: usize,
    pub nb: usize,
    pub finite: Vec<LocalCondition>,
}

impl RRLayout {
    pub fn function(&self, v: &[Fe]) -> RRFunction {
        RRFunction {
            a: UniPoly::new(v[..self.na].to_vec()),
            b: UniPoly::new(v[self.na..self.na + self.nb].to_vec()),
            den: self.den.clone(),
        }
    }

    /// Ansatz coordinates of a numerator `(a, b)` over this layout's denominator.
    pub fn vector(&self, a: &UniPoly, b: &UniPoly) -> Option<Vec<Fe>> {
        if a.degree().is_some_and(|d| d >= self.na) || b.degree().is_some_and(|d| d >= self.nb) {
            return None;
        }
        let mut v = vec![Fe::ZERO; self.na + self.nb];
        for i in 0..self.na {
            v[i] = a.coeff(i);
        }
        for i in 0..self.nb {
            v[self.na + i] = b.coeff(i);
        }
        Some(v)
    }
}

/// `N ∈ |2D|` together with the section of `L(2D)` cutting it out.
#[derive(Clone, Debug)]
pub struct NData {
    pub n: Divisor,
    pub points: Vec<CurvePoint>,
    pub section: RRFunction,
}

/// The map `C -> P^(h0 - 1)` given by a basis of a Riemann-Roch space.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub curve: HypCurve,
    pub divisor: Divisor,
    pub layout: RRLayout,
    pub basis: Vec<RRFunction>,
}

impl Embedding {
    pub fn new(curve: &HypCurve, divisor: &Divisor) -> Result<Self> {
        let layout = curve.rr_layout(divisor)?;
        let basis = curve
            .rr_vectors(&layout)?
            .iter()
            .map(|v| layout.function(v))
            .collect();
        Ok(Embedding { curve: curve.clone(), divisor: divisor.clone(), layout, basis })
    }

    /// The `|K + 2D|` embedding with a basis whose last `g` functions span
    /// `L(K + 2D - N)`, so that the span of `N` is the coordinate subspace
    /// where the last `g` coordinates vanish.
    pub fn adapted(curve: &HypCurve, d: &Divisor, n: &NData) -> Result<Self> {
        let f = curve.field;
        let g = curve.g;
        let divisor = curve.canonical_divisor().add(&d.scale(2));
        let layout = curve.rr_layout(&divisor)?;
        let full = curve.rr_vectors(&layout)?;
        let dim = full.len();
        // L(K + 2D - N) = section * L(K), and L(K) = <1, x, ..., x^(g-1)>.
        let mut tail = Vec::with_capacity(g);
        for j in 0..g {
            let xj = UniPoly::one().shift(j);
            let v = layout
                .vector(&n.section.a.mul(&f, &xj), &n.section.b.mul(&f, &xj))
                .ok_or(Error::DegenerateConfiguration)?;
            tail.push(v);
        }
        if n.section.den != layout.den {
            return Err(Error::DegenerateConfiguration);
        }
        let space = ProjSubspace::span(&f, layout.na + layout.nb, &full);
        for v in &tail {
            if !space.contains(&f, v) {
                return Err(Error::DegenerateConfiguration);
            }
        }
        // Complete the tail to a basis using the kernel vectors in order.
        let mut head = Vec::new();
        let mut current = ProjSubspace::span(&f, layout.na + layout.nb, &tail);
        for v in &full {
            if head.len() + g == dim {
                break;
            }
            if !current.contains(&f, v) {
                current = current.join(&f, &ProjSubspace::span(&f, current.ambient, &[v.clone()]));
                head.push(v.clone());
            }
        }
        if head.len() + g != dim {
            return Err(Error::DegenerateConfiguration);
        }
        head.extend(tail);
        let basis = head.iter().map(|v| layout.function(v)).collect();
        Ok(Embedding { curve: curve.clone(), divisor, layout, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Leading local coefficients of all basis numerators at `p`.
    pub fn point(&self, p: &CurvePoint) -> Result<Vec<Fe>> {
        let c = &self.curve;
        let f = c.field;
        match p {
            CurvePoint::Affine { .. } => {
                let fast: Vec<Fe> = {
                    let CurvePoint::Affine { x, y } = *p else { unreachable!() };
                    self.basis
                        .iter()
                        .map(|h| f.add(h.a.eval(&f, x), f.mul(h.b.eval(&f, x), y)))
                        .collect()
                };
                if let Some(v) = normalize(&f, &fast) {
                    return Ok(v);
                }
                let order = 4 * (self.layout.top.max(0) as usize) + 8;
                let exps: Vec<Vec<Fe>> = self
                    .basis
                    .iter()
                    .map(|h| c.expand_affine(&h.a, &h.b, p, order))
                    .collect::<Result<_>>()?;
                for k in 0..order {
                    let v: Vec<Fe> = exps.iter().map(|e| e[k]).collect();
                    if let Some(v) = normalize(&f, &v) {
                        return Ok(v);
                    }
                }
                Err(Error::IndeterminateAt)
            }
            _ => {
                let top = self.layout.top;
                for k in (-2 * top.max(0) - 8..=top).rev() {
                    let v: Vec<Fe> = self.basis.iter().map(|h| c.laurent_coeff(&h.a, &h.b, p, k)).collect();
                    if let Some(v) = normalize(&f, &v) {
                        return Ok(v);
                    }
                }
                Err(Error::IndeterminateAt)
            }
        }
    }

    /// Numerators `A(x)`, `B(x)` with `φ(x, y) = A(x) + y B(x)` away from the
    /// denominator roots.
    pub fn numerator_vectors(&self) -> (Vec<UniPoly>, Vec<UniPoly>) {
        (
            self.basis.iter().map(|h| h.a.clone()).collect(),
            self.basis.iter().map(|h| h.b.clone()).collect(),
        )
    }

    /// Number of zeros, over the algebraic closure and with multiplicity, of
    /// the section `Σ c_j h_j` of the embedding line bundle.
    ///
    /// Affine zeros away from the denominator come from the norm polynomial;
    /// zeros at denominator roots and at infinity come from local expansions.
    pub fn hyperplane_section_degree(&self, c: &[Fe]) -> Result<i64> {
        let curve = &self.curve;
        let f = curve.field;
        assert_eq!(c.len(), self.dim());
        let mut a = UniPoly::zero();
        let mut b = UniPoly::zero();
        for (h, &ci) in self.basis.iter().zip(c) {
            a = a.add(&f, &h.a.scale(&f, ci));
            b = b.add(&f, &h.b.scale(&f, ci));
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::DegenerateHyperplane);
        }
        let norm = a.mul(&f, &a).sub(&f, &b.mul(&f, &b).mul(&f, &curve.f));
        let mut total = norm.degree().ok_or(Error::DegenerateHyperplane)? as i64;
        let h = RRFunction { a: a.clone(), b: b.clone(), den: self.layout.den.clone() };
        // Places above denominator roots: replace their norm contribution by
        // the order of the section there.
        let mut seen: Vec<Fe> = Vec::new();
        for cond in &self.layout.finite {
            let CurvePoint::Affine { x, .. } = cond.point else { unreachable!() };
            if seen.contains(&x) {
                continue;
            }
            seen.push(x);
            let lin = UniPoly::linear_root(&f, x);
            let mut rest = norm.clone();
            let mut norm_order = 0i64;
            loop {
                let (q, r) = rest.divrem(&f, &lin)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                norm_order += 1;
            }
            let pts = [cond.point, curve.involution(&cond.point)];
            let mut local_sum = 0;
            for p in &pts {
                let ord = curve.numerator_order(&a, &b, p)?.expect("nonzero numerator");
                local_sum += ord;
                let section_order = curve.order_at(&h, p)?.unwrap() + self.divisor.multiplicity(p);
                if section_order < 0 {
                    return Err(Error::DegenerateHyperplane);
                }
                total += section_order;
            }
            if local_sum != norm_order {
                return Err(Error::DegenerateHyperplane);
            }
            total -= norm_order;
        }
        for p in [CurvePoint::InfPlus, CurvePoint::InfMinus] {
            let section_order = curve.order_at(&h, &p)?.unwrap() + self.divisor.multiplicity(&p);
            if section_order < 0 {
                return Err(Error::DegenerateHyperplane);
            }
            total += section_order;
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(g: usize, seed: u64) -> (HypCurve, FieldRng) {
        let ctx = PrimeContext::new(1_000_003, seed).unwrap();
        let mut rng = ctx.rng(0);
        let c = HypCurve::random(&ctx, g, &mut rng).unwrap();
        (c, rng)
    }

    #[test]
    fn points_and_involution() {
        let (c, mut rng) = setup(3, 1);
        let mut xs = std::collections::HashSet::new();
        for _ in 0..1000 {
            let p = c.random_point(&mut rng).unwrap();
            assert!(c.is_on_curve(&p));
            let q = c.involution(&p);
            assert!(c.is_on_curve(&q));
            assert_ne!(p, q);
            assert_eq!(c.involution(&q), p);
            xs.insert(p.x().unwrap());
        }
        assert!(xs.len() >= 990);
        assert_eq!(c.involution(&CurvePoint::InfPlus), CurvePoint::InfMinus);
        // Fixed points of the involution are the roots of f.
        for r in c.f.roots_in_field(&c.field).unwrap() {
            let w = CurvePoint::Affine { x: r, y: Fe::ZERO };
            assert_eq!(c.involution(&w), w);
        }
    }

    #[test]
    fn small_rr_spaces() {
        for g in [3, 4, 5] {
            let (c, mut rng) = setup(g, 10 + g as u64);
            assert_eq!(c.h0(&Divisor::zero()).unwrap(), 1);
            let k = c.canonical_divisor();
            let kb = c.rr_space(&k).unwrap();
            assert_eq!(kb.len(), g);
            for h in &kb {
                assert!(h.b.is_zero());
                assert!(h.a.degree().unwrap_or(0) < g);
                for p in [CurvePoint::InfPlus, CurvePoint::InfMinus] {
                    assert!(c.order_at(h, &p).unwrap().unwrap() >= -(g as i64 - 1));
                }
            }
            let d0 = c.random_effective(g, &mut rng).unwrap();
            assert_eq!(c.h0(&k.add(&d0.scale(2))).unwrap(), 3 * g - 1);
            let p = c.random_point(&mut rng).unwrap();
            let pencil = Divisor::from_points(&[p, c.involution(&p)]);
            assert_eq!(c.h0(&pencil).unwrap(), 2);
        }
    }

    #[test]
    fn riemann_roch_random_divisors() {
        for g in [3, 4] {
            let (c, mut rng) = setup(g, 20 + g as u64);
            for t in 0..30 {
                let k = 1 + rng.index(4);
                let pts = c.random_points_distinct_x(k, &[], &mut rng).unwrap();
                let mut d = Divisor::zero();
                for p in &pts {
                    d.add_point(*p, 1 + rng.index(3) as i64 - i64::from(t % 5 == 0));
                }
                d.add_point(CurvePoint::InfPlus, rng.index(2 * g + 2) as i64);
                d.add_point(CurvePoint::InfMinus, rng.index(2 * g) as i64 - 1);
                let deg = d.degree();
                let basis = c.rr_space(&d).unwrap();
                if deg > 2 * g as i64 - 2 {
                    assert_eq!(basis.len() as i64, deg - g as i64 + 1, "{d:?}");
                }
                for h in &basis {
                    for (p, n) in d.terms() {
                        assert!(c.order_at(h, p).unwrap().unwrap() >= -n);
                    }
                }
            }
        }
    }

    #[test]
    fn weierstrass_support_is_rejected() {
        let ctx = PrimeContext::new(1_000_003, 0).unwrap();
        let f = ctx.field();
        // f with a rational root at 0
        let mut seed = 0;
        let c = loop {
            let mut rng = ctx.rng(seed);
            let mut coeffs = rng.vector(8);
            coeffs[0] = Fe::ZERO;
            coeffs[7] = Fe::ONE;
            coeffs.push(Fe::ONE);
            if let Ok(c) = HypCurve::from_poly(f, 3, UniPoly::new(coeffs), 0) {
                break c;
            }
            seed += 1;
        };
        let w = CurvePoint::Affine { x: Fe::ZERO, y: Fe::ZERO };
        assert!(matches!(c.h0(&Divisor::point(w)), Err(Error::UnsupportedSupport)));
    }

    #[test]
    fn n_sampling_and_embedding() {
        for g in [3, 4] {
            let (c, mut rng) = setup(g, 30 + g as u64);
            let (d, n) = c.sample_generic_pair(&mut rng).unwrap();
            assert_eq!(n.n.degree(), 2 * g as i64);
            assert_eq!(n.points.len(), 2 * g);
            assert_eq!(c.h0(&d.scale(2).sub(&n.n)).unwrap(), 1);
            for p in &n.points {
                assert!(c.is_on_curve(p));
                assert!(!n.points.contains(&c.involution(p)));
                assert_eq!(d.multiplicity(p), 0);
            }
            let emb = Embedding::adapted(&c, &d, &n).unwrap();
            assert_eq!(emb.dim(), 3 * g - 1);
            for p in &n.points {
                let v = emb.point(p).unwrap();
                assert!(v[2 * g - 1..].iter().all(|x| x.is_zero()));
            }
            for _ in 0..20 {
                let h = rng.vector(emb.dim());
                assert_eq!(emb.hyperplane_section_degree(&h).unwrap(), 4 * g as i64 - 2);
            }
            // Hyperplane through one D point and infinity-adjacent checks still count 4g-2.
            let dp = d.support()[0];
            let phi = emb.point(&dp).unwrap();
            let mut h = rng.vector(emb.dim());
            let dotv = c.field.dot(&h, &phi);
            let lead = phi.iter().position(|x| !x.is_zero()).unwrap();
            h[lead] = c.field.sub(h[lead], c.field.div(dotv, phi[lead]).unwrap());
            assert!(c.field.dot(&h, &phi).is_zero());
            assert_eq!(emb.hyperplane_section_degree(&h).unwrap(), 4 * g as i64 - 2);
            let mut seen = Vec::new();
            for _ in 0..100 {
                let p = c.random_point(&mut rng).unwrap();
                let v = emb.point(&p).unwrap();
                assert_ne!(v, emb.point(&c.involution(&p)).unwrap());
                assert!(!seen.contains(&v));
                seen.push(v);
            }
            emb.point(&CurvePoint::InfPlus).unwrap();
            emb.point(&dp).unwrap();
        }
    }
}
