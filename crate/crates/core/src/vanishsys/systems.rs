//! The concrete systems: forms vanishing to high order on the embedded curve,
//! forms through its secant varieties, the analogous system for the
//! complementary embedding, and the nested systems on the span of `N`.

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeField};
use crate::hypcurve::{Embedding, HypCurve, NData};
use crate::incidence::{n_span, sample_gamma, sample_secant, w_coords, SpanModel};
use crate::multipoly::{monomial_count, HomogForm};
use crate::vanishsys::prolong::ProlongationChain;
use crate::vanishsys::{
    stabilized_kernel, system, Budget, ConditionRows, FormSystem, RowSource, SystemMeta, VanishingComponent,
    VanishingSpec,
};

/// Sampler of embedded curve points.
pub fn curve_sampler(emb: &Embedding) -> impl FnMut(&mut FieldRng) -> Result<Vec<Fe>> + '_ {
    move |rng| {
        let p = emb.curve.random_point(rng)?;
        emb.point(&p)
    }
}

/// Degree of the embedded curve; bounds the degree of sampled coordinates.
pub fn curve_degree(emb: &Embedding) -> usize {
    emb.divisor.degree().max(1) as usize
}

/// Degree-`g` forms vanishing to order `g - 1` on the curve, computed
/// directly in the monomial basis.
pub fn bertram_direct(emb: &Embedding, rng: &mut FieldRng, budget: Budget) -> Result<FormSystem> {
    let g = emb.curve.g;
    let deg = curve_degree(emb);
    let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(curve_sampler(emb), g - 1, "C", deg)]);
    system(&emb.curve.field, g, emb.dim(), &mut spec, rng, budget)
}

/// Quadrics through the embedded curve.
pub fn curve_quadrics(emb: &Embedding, rng: &mut FieldRng, budget: Budget) -> Result<FormSystem> {
    let deg = curve_degree(emb);
    let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(curve_sampler(emb), 1, "C", deg)]);
    system(&emb.curve.field, 2, emb.dim(), &mut spec, rng, budget)
}

/// The same system as [`bertram_direct`], built by prolonging the quadrics
/// through the curve up to degree `g`.
pub fn bertram_chain(emb: &Embedding, rng: &mut FieldRng, budget: Budget) -> Result<ProlongationChain> {
    let q = curve_quadrics(emb, rng, budget)?;
    let mut chain = ProlongationChain::new(emb.curve.field, emb.dim(), q.basis);
    chain.metas.insert(0, q.meta);
    chain.extend_to(emb.curve.g, rng, budget)?;
    Ok(chain)
}

/// Degree-`g` forms vanishing on `Sec^(g-2)(C)`.
pub fn secant_system(emb: &Embedding, rng: &mut FieldRng, budget: Budget) -> Result<FormSystem> {
    let g = emb.curve.g;
    let deg = curve_degree(emb);
    let sampler = move |r: &mut FieldRng| sample_secant(emb, g - 2, r);
    let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(sampler, 1, "Sec", deg)]);
    system(&emb.curve.field, g, emb.dim(), &mut spec, rng, budget)
}

/// Membership spec for vanishing to order `g - 1` on the curve.
pub fn curve_spec(emb: &Embedding, mult: usize) -> VanishingSpec<'_> {
    VanishingSpec::new(vec![VanishingComponent::sampled(curve_sampler(emb), mult, "C", curve_degree(emb))])
}

/// Membership spec for vanishing on `Sec^k(C)`.
pub fn secant_spec(emb: &Embedding, k: usize) -> VanishingSpec<'_> {
    let sampler = move |r: &mut FieldRng| sample_secant(emb, k, r);
    VanishingSpec::new(vec![VanishingComponent::sampled(sampler, 1, "Sec", curve_degree(emb))])
}

/// The complementary embedding by `|3K - 2D|` and the degree `g - 2` forms
/// vanishing to order `g - 3` along its image.
pub fn b_side_system(
    curve: &HypCurve,
    d: &crate::hypcurve::Divisor,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<(Embedding, FormSystem)> {
    let g = curve.g;
    assert!(g >= 3);
    let divisor = curve.canonical_divisor().scale(3).sub(&d.scale(2));
    let emb = Embedding::new(curve, &divisor)?;
    let deg = curve_degree(&emb);
    let sys = {
        let mut spec =
            VanishingSpec::new(vec![VanishingComponent::sampled(curve_sampler(&emb), g - 3, "C", deg)]);
        system(&curve.field, g - 2, emb.dim(), &mut spec, rng, budget)?
    };
    Ok((emb, sys))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Degree-`d` forms vanishing on every span of `k` of the given points.
///
/// The spans are visited cyclically, so every span is hit once per cycle and
/// the error bound counts full cycles.
pub fn secant_of_points_system(
    f: &PrimeField,
    points: &[Vec<Fe>],
    k: usize,
    d: usize,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    let subs = subsets(points.len(), k);
    let cycle = subs.len();
    let m = points[0].len();
    let mut next = 0usize;
    let pts = points.to_vec();
    let fc = *f;
    let sampler = move |r: &mut FieldRng| {
        let s = &subs[next % subs.len()];
        next += 1;
        let mut out = vec![Fe::ZERO; m];
        for &i in s {
            let c = r.nonzero();
            for (o, x) in out.iter_mut().zip(&pts[i]) {
                *o = fc.add(*o, fc.mul(c, *x));
            }
        }
        Ok(out)
    };
    let mut comp = VanishingComponent::sampled(sampler, 1, "Sec(N)", 1);
    comp.cycle = cycle;
    let mut spec = VanishingSpec::new(vec![comp]);
    system(f, d, m, &mut spec, rng, budget)
}

/// Rows `F ↦ ∂^β F(γ)` expressed in the coordinates of a fixed basis.
struct SubsystemRows<'a> {
    field: PrimeField,
    basis: &'a [HomogForm],
    builder: ConditionRows,
    sampler: Box<dyn FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a>,
    param_degree: usize,
}

impl RowSource for SubsystemRows<'_> {
    fn cols(&self) -> usize {
        self.basis.len()
    }

    fn fixed_rows(&mut self) -> Result<Vec<Vec<Fe>>> {
        Ok(Vec::new())
    }

    fn sample_rows(&mut self, rng: &mut FieldRng) -> Result<Option<Vec<Vec<Fe>>>> {
        if self.builder.rows_per_point() == 0 {
            return Ok(None);
        }
        let q = (self.sampler)(rng)?;
        let f = self.field;
        let rows = self
            .builder
            .rows_at(&f, &q)
            .iter()
            .map(|r| self.basis.iter().map(|h| f.dot(r, &h.coeffs)).collect())
            .collect();
        Ok(Some(rows))
    }

    fn miss_probability(&self) -> f64 {
        let e = self.builder.d + 1 - self.builder.mult;
        ((2 * e * self.param_degree) as f64 / self.field.modulus() as f64).min(1.0)
    }
}

/// The forms of `sys` with multiplicity `mult` at sampled points.
pub fn subsystem_with_multiplicity<'a>(
    sys: &FormSystem,
    mult: usize,
    sampler: impl FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a,
    param_degree: usize,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    let f = sys.field;
    let mut src = SubsystemRows {
        field: f,
        basis: &sys.basis,
        builder: ConditionRows::new(&f, sys.d, sys.m, mult),
        sampler: Box::new(sampler),
        param_degree,
    };
    let (ker, meta) = stabilized_kernel(&f, &mut src, rng, budget)?;
    let forms: Vec<HomogForm> = ker.iter().map(|c| HomogForm::combination(&sys.basis, c)).collect();
    let mut out = FormSystem::span_of(f, sys.d, sys.m, &forms, meta);
    if out.dim() != ker.len() {
        return Err(Error::RankDeficient);
    }
    out.meta.rows += sys.meta.rows;
    Ok(out)
}

/// How the restricted high-order system is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BertramRoute {
    /// Interpolation in the full monomial basis of the ambient space.
    Direct,
    /// Prolongation of the quadrics through the curve.
    Prolongation,
}

/// `N₁ ⊆ N₂ ⊆ N₃` on the span of `N`, in its `2g - 1` coordinates.
#[derive(Clone, Debug)]
pub struct NestedSystems {
    pub n1: FormSystem,
    pub n2: FormSystem,
    pub n3: FormSystem,
}

impl NestedSystems {
    /// Inclusions `N₁ ⊆ N₂ ⊆ N₃`, checked by exact span membership.
    pub fn check_inclusions(&self) -> Result<()> {
        if !self.n3.contains_system(&self.n2) {
            return Err(Error::InclusionViolated("N2 in N3".into()));
        }
        if !self.n2.contains_system(&self.n1) {
            return Err(Error::InclusionViolated("N1 in N2".into()));
        }
        Ok(())
    }
}

/// Forms on the span of `N` vanishing on all `(g - 2)`-planes through `g - 1`
/// points of `N`.
pub fn n3_system(emb: &Embedding, n: &NData, rng: &mut FieldRng, budget: Budget) -> Result<FormSystem> {
    let g = emb.curve.g;
    let pts: Vec<Vec<Fe>> = n
        .points
        .iter()
        .map(|p| emb.point(p).and_then(|v| w_coords(g, &v).ok_or(Error::DegenerateConfiguration)))
        .collect::<Result<_>>()?;
    secant_of_points_system(&emb.curve.field, &pts, g - 1, g, rng, budget)
}

/// `N₃` forms with multiplicity `g - 2` along `Γ`.
pub fn n2_system(
    emb: &Embedding,
    span: &SpanModel,
    n3: &FormSystem,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    let g = emb.curve.g;
    let sampler = move |r: &mut FieldRng| sample_gamma(emb, span, r);
    subsystem_with_multiplicity(n3, g - 2, sampler, 2 * g - 2, rng, budget)
}

/// Restriction of the high-order curve system to the span of `N`.
pub fn n1_system(emb: &Embedding, route: BertramRoute, rng: &mut FieldRng, budget: Budget) -> Result<FormSystem> {
    let g = emb.curve.g;
    let f = emb.curve.field;
    let sel: Vec<usize> = (0..2 * g - 1).collect();
    let (forms, meta) = match route {
        BertramRoute::Direct => {
            let b = bertram_direct(emb, rng, budget)?;
            (b.basis.iter().map(|h| h.select_coordinates(&sel)).collect::<Vec<_>>(), b.meta)
        }
        BertramRoute::Prolongation => {
            let chain = bertram_chain(emb, rng, budget)?;
            let meta = combine_metas(&chain.metas);
            (chain.restricted_top(&sel), meta)
        }
    };
    Ok(FormSystem::span_of(f, g, sel.len(), &forms, meta))
}

/// Summed rows and error bounds of a sequence of stabilizations.
pub fn combine_metas(metas: &[SystemMeta]) -> SystemMeta {
    SystemMeta {
        rows: metas.iter().map(|m| m.rows).sum(),
        batches: metas.iter().map(|m| m.batches).sum(),
        stable_batches: metas.iter().map(|m| m.stable_batches).min().unwrap_or(0),
        test_points: metas.iter().map(|m| m.test_points).sum(),
        error_bound: metas.iter().map(|m| m.error_bound).sum::<f64>().min(1.0),
    }
}

/// Computes `N₁`, `N₂`, `N₃` and checks the inclusions.
pub fn nested_systems(
    emb: &Embedding,
    n: &NData,
    route: BertramRoute,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<NestedSystems> {
    let span = n_span(emb, n)?;
    let n3 = n3_system(emb, n, rng, budget)?;
    let n2 = n2_system(emb, &span, &n3, rng, budget)?;
    let n1 = n1_system(emb, route, rng, budget)?;
    let out = NestedSystems { n1, n2, n3 };
    out.check_inclusions()?;
    Ok(out)
}

/// Catalan number, the expected dimension of `N₃`.
pub fn catalan(n: usize) -> usize {
    crate::multipoly::binom(2 * n, n) / (n + 1)
}

/// Expected vector dimension of the complementary system:
/// `Σ_{i ≤ g-2} C(g, i)`.
pub fn b_side_expected_dim(g: usize) -> usize {
    (0..=g - 2).map(|i| crate::multipoly::binom(g, i)).sum()
}

/// Monomial count for degree-`g` forms on the span of `N`.
pub fn nested_columns(g: usize) -> usize {
    monomial_count(2 * g - 1, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;
    use crate::vanishsys::member;

    fn setup(g: usize, seed: u64) -> (HypCurve, crate::hypcurve::Divisor, NData, Embedding, FieldRng) {
        let ctx = PrimeContext::new(1_000_003, seed).unwrap();
        let mut rng = ctx.rng(0);
        let c = HypCurve::random(&ctx, g, &mut rng).unwrap();
        let (d, n) = c.sample_generic_pair(&mut rng).unwrap();
        let emb = Embedding::adapted(&c, &d, &n).unwrap();
        (c, d, n, emb, rng)
    }

    #[test]
    fn subsets_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(6, 2)[0], vec![0, 1]);
        assert_eq!(subsets(6, 2).last().unwrap(), &vec![4, 5]);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(catalan(3), 5);
        assert_eq!(catalan(6), 132);
        assert_eq!(b_side_expected_dim(4), 11);
    }

    #[test]
    fn genus_three_systems() {
        let (c, d, n, emb, mut rng) = setup(3, 7);
        let b = bertram_direct(&emb, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(b.dim(), 8);
        let chain = bertram_chain(&emb, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(chain.top_dim(), 8);
        let explicit = FormSystem::span_of(c.field, 3, 8, &chain.explicit_top(), SystemMeta::default());
        assert!(b.contains_system(&explicit) && explicit.contains_system(&b));
        let mut sec = secant_spec(&emb, 1);
        for h in &b.basis {
            assert!(member(h, &mut sec, 50, &mut rng).unwrap().0);
        }
        let (_, bs) = b_side_system(&c, &d, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(bs.dim(), 4);
        let nested = nested_systems(&emb, &n, BertramRoute::Direct, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!((nested.n1.dim(), nested.n2.dim(), nested.n3.dim()), (4, 4, 5));
    }
}
