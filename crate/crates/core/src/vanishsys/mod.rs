//! Linear systems of forms cut out by sampled vanishing conditions.
//!
//! A system is the common kernel of condition rows produced at sample points.
//! Since the number of points needed is not known in advance, rows are added
//! in batches until the kernel dimension has stayed the same for three
//! consecutive batches (see [`stabilized_kernel`]).

pub mod prolong;
pub mod systems;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeField};
use crate::linsolve::{EchelonAccumulator, MatFp, ProjSubspace};
use crate::multipoly::{monomial_count, monomial_values, DerivativePlan, HomogForm, MONOMIAL_ORDER};

/// Number of consecutive unchanged batches required before a kernel is accepted.
pub const STABLE_BATCHES: usize = 3;

/// Row generator for one multiplicity condition: given `Q`, produces the
/// functionals `F ↦ ∂^β F(Q)` for all `|β| = μ - 1`.
///
/// By Euler's identity the lower-order derivatives are combinations of these,
/// so vanishing of the top order ones is vanishing to order `μ` (valid when
/// `p > d`).
#[derive(Debug)]
pub struct ConditionRows {
    pub d: usize,
    pub m: usize,
    pub mult: usize,
    plan: Option<DerivativePlan>,
}

impl ConditionRows {
    pub fn new(f: &PrimeField, d: usize, m: usize, mult: usize) -> Self {
        assert!(mult <= d, "multiplicity above the degree");
        let plan = (mult >= 1).then(|| DerivativePlan::new(f, d, m, mult - 1));
        ConditionRows { d, m, mult, plan }
    }

    pub fn rows_per_point(&self) -> usize {
        self.plan.as_ref().map_or(0, |p| p.n_beta)
    }

    pub fn rows_at(&self, f: &PrimeField, q: &[Fe]) -> Vec<Vec<Fe>> {
        let Some(plan) = &self.plan else {
            return Vec::new();
        };
        assert_eq!(q.len(), self.m);
        let vals = monomial_values(f, q, self.d + 1 - self.mult);
        let cols = monomial_count(self.m, self.d);
        (0..plan.n_beta)
            .map(|b| {
                let mut row = vec![Fe::ZERO; cols];
                let base = b * plan.n_gamma;
                for (g, &v) in vals.iter().enumerate() {
                    let t = plan.targets[base + g] as usize;
                    row[t] = f.mul(plan.coeffs[base + g], v);
                }
                row
            })
            .collect()
    }
}

/// Rows of the functionals `F ↦ ∂^β F(Q)`, `|β| = μ - 1`, on degree-`d` forms.
pub fn conditions_at(f: &PrimeField, q: &[Fe], mult: usize, d: usize) -> Vec<Vec<Fe>> {
    ConditionRows::new(f, d, q.len(), mult).rows_at(f, q)
}

/// Where the points of a vanishing condition come from.
pub enum PointSource<'a> {
    /// A finite list, imposed once in full.
    Fixed(Vec<Vec<Fe>>),
    /// An unbounded sampler of random points of a locus.
    Sampler(Box<dyn FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a>),
}

pub struct VanishingComponent<'a> {
    pub source: PointSource<'a>,
    pub mult: usize,
    pub label: String,
    /// Degree of the sampled coordinates as functions of the sampling
    /// parameters; enters the error bound only.
    pub param_degree: usize,
    /// Samples after which every component of the sampled locus has been
    /// visited at least once (1 for an irreducible locus).
    pub cycle: usize,
}

impl<'a> VanishingComponent<'a> {
    pub fn fixed(points: Vec<Vec<Fe>>, mult: usize, label: &str) -> Self {
        VanishingComponent { source: PointSource::Fixed(points), mult, label: label.into(), param_degree: 1, cycle: 1 }
    }

    pub fn sampled(
        sampler: impl FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a,
        mult: usize,
        label: &str,
        param_degree: usize,
    ) -> Self {
        VanishingComponent {
            source: PointSource::Sampler(Box::new(sampler)),
            mult,
            label: label.into(),
            param_degree,
            cycle: 1,
        }
    }
}

pub struct VanishingSpec<'a> {
    pub components: Vec<VanishingComponent<'a>>,
}

impl<'a> VanishingSpec<'a> {
    pub fn new(components: Vec<VanishingComponent<'a>>) -> Self {
        VanishingSpec { components }
    }
}

/// Limits on a stabilization run.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_rows: usize,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn rows(max_rows: usize) -> Self {
        Budget { max_rows, deadline: None }
    }

    pub fn unlimited() -> Self {
        Budget { max_rows: usize::MAX, deadline: None }
    }

    fn exceeded(&self, rows: usize) -> bool {
        rows > self.max_rows || self.deadline.is_some_and(|d| Instant::now() > d)
    }
}

/// How a kernel was obtained.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SystemMeta {
    pub rows: usize,
    pub batches: usize,
    pub stable_batches: usize,
    /// Sample points used by the final stability test batches.
    pub test_points: usize,
    /// Upper bound on the probability that the kernel is too large.
    pub error_bound: f64,
}

/// Source of condition rows, one sample at a time.
pub trait RowSource {
    fn cols(&self) -> usize;
    /// Rows imposed once up front.
    fn fixed_rows(&mut self) -> Result<Vec<Vec<Fe>>>;
    /// Rows of one fresh sample; `None` if there are no samplers.
    fn sample_rows(&mut self, rng: &mut FieldRng) -> Result<Option<Vec<Vec<Fe>>>>;
    /// Per-visit probability of failing to detect a too-large kernel.
    fn miss_probability(&self) -> f64;
    /// Samples needed to visit every component of the sampled locus.
    fn cycle(&self) -> usize {
        1
    }
}

/// Grows the kernel of sampled rows until it is unchanged by
/// [`STABLE_BATCHES`] consecutive test batches.
///
/// While the rank is still climbing steadily, batches are absorbed outright.
/// Once a batch contributes dependent rows, the kernel is computed and later
/// batches are only tested against it (a row leaves the rank unchanged exactly
/// when it is orthogonal to the kernel). Each test batch has about twice the
/// current nullity in rows. A failed test absorbs the batch and resets the count.
pub fn stabilized_kernel(
    f: &PrimeField,
    src: &mut dyn RowSource,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<(Vec<Vec<Fe>>, SystemMeta)> {
    let cols = src.cols();
    let mut acc = EchelonAccumulator::new(*f, cols);
    let fixed = src.fixed_rows()?;
    acc.absorb(&fixed);
    let mut meta = SystemMeta { rows: fixed.len(), ..Default::default() };
    let mut kernel: Option<Vec<Vec<Fe>>> = None;
    let mut growing = true;
    let mut test_points = 0usize;
    loop {
        let nul = acc.nullity();
        if nul == 0 {
            meta.stable_batches = STABLE_BATCHES;
            meta.error_bound = 0.0;
            return Ok((Vec::new(), meta));
        }
        let target = if growing { nul } else { 2 * nul };
        let min_points = if growing { 1 } else { src.cycle().div_ceil(STABLE_BATCHES) };
        let mut batch: Vec<Vec<Fe>> = Vec::new();
        let mut points = 0;
        while batch.len() < target || points < min_points {
            match src.sample_rows(rng)? {
                Some(rows) => {
                    batch.extend(rows);
                    points += 1;
                }
                None => {
                    // Only fixed conditions: the kernel is exact.
                    let k = acc.kernel();
                    meta.stable_batches = STABLE_BATCHES;
                    meta.error_bound = 0.0;
                    return Ok((k, meta));
                }
            }
        }
        meta.rows += batch.len();
        meta.batches += 1;
        if budget.exceeded(meta.rows) {
            return Err(Error::Unstabilized { rows: meta.rows, dim: nul });
        }
        if growing {
            let gained = acc.absorb(&batch);
            if gained < batch.len() {
                growing = false;
            }
            continue;
        }
        let k = kernel.get_or_insert_with(|| acc.kernel());
        let stable = batch.iter().all(|row| k.iter().all(|v| f.dot(row, v).is_zero()));
        if stable {
            meta.stable_batches += 1;
            test_points += points;
            if meta.stable_batches == STABLE_BATCHES {
                meta.test_points = test_points;
                let visits = (test_points / src.cycle()).min(i32::MAX as usize) as i32;
                meta.error_bound = src.miss_probability().powi(visits);
                return Ok((kernel.unwrap(), meta));
            }
        } else {
            acc.absorb(&batch);
            kernel = None;
            meta.stable_batches = 0;
            test_points = 0;
        }
    }
}

/// Rows from a [`VanishingSpec`] on degree-`d` forms in `m` variables.
struct SpecRows<'s, 'a> {
    field: PrimeField,
    d: usize,
    m: usize,
    spec: &'s mut VanishingSpec<'a>,
    builders: Vec<ConditionRows>,
    next: usize,
}

impl<'s, 'a> SpecRows<'s, 'a> {
    fn new(f: &PrimeField, d: usize, m: usize, spec: &'s mut VanishingSpec<'a>) -> Self {
        let builders = spec.components.iter().map(|c| ConditionRows::new(f, d, m, c.mult)).collect();
        SpecRows { field: *f, d, m, spec, builders, next: 0 }
    }
}

impl RowSource for SpecRows<'_, '_> {
    fn cols(&self) -> usize {
        monomial_count(self.m, self.d)
    }

    fn fixed_rows(&mut self) -> Result<Vec<Vec<Fe>>> {
        let mut rows = Vec::new();
        for (c, b) in self.spec.components.iter().zip(&self.builders) {
            if let PointSource::Fixed(pts) = &c.source {
                for q in pts {
                    rows.extend(b.rows_at(&self.field, q));
                }
            }
        }
        Ok(rows)
    }

    fn sample_rows(&mut self, rng: &mut FieldRng) -> Result<Option<Vec<Vec<Fe>>>> {
        let n = self.spec.components.len();
        for step in 0..n {
            let i = (self.next + step) % n;
            let b = &self.builders[i];
            if b.rows_per_point() == 0 {
                continue;
            }
            if let PointSource::Sampler(s) = &mut self.spec.components[i].source {
                self.next = (i + 1) % n;
                let q = s(rng)?;
                return Ok(Some(b.rows_at(&self.field, &q)));
            }
        }
        Ok(None)
    }

    fn miss_probability(&self) -> f64 {
        let p = self.field.modulus() as f64;
        self.spec
            .components
            .iter()
            .filter(|c| matches!(c.source, PointSource::Sampler(_)) && c.mult > 0)
            .map(|c| (2 * (self.d + 1 - c.mult) * c.param_degree) as f64 / p)
            .fold(0.0, f64::max)
            .min(1.0)
    }

    fn cycle(&self) -> usize {
        let samplers: Vec<&VanishingComponent> = self
            .spec
            .components
            .iter()
            .filter(|c| matches!(c.source, PointSource::Sampler(_)) && c.mult > 0)
            .collect();
        samplers.len().max(1) * samplers.iter().map(|c| c.cycle).max().unwrap_or(1)
    }
}

/// A linear system of forms, stored by an explicit basis.
#[derive(Clone, Debug)]
pub struct FormSystem {
    pub field: PrimeField,
    pub d: usize,
    pub m: usize,
    pub basis: Vec<HomogForm>,
    pub meta: SystemMeta,
}

impl FormSystem {
    pub fn from_vectors(f: PrimeField, d: usize, m: usize, vecs: Vec<Vec<Fe>>, meta: SystemMeta) -> Self {
        let basis = vecs.into_iter().map(|v| HomogForm::from_coeffs(f, d, m, v)).collect();
        FormSystem { field: f, d, m, basis, meta }
    }

    /// Independent span of the given forms.
    pub fn span_of(f: PrimeField, d: usize, m: usize, forms: &[HomogForm], meta: SystemMeta) -> Self {
        let vecs: Vec<Vec<Fe>> = forms.iter().map(|h| h.coeffs.clone()).collect();
        let s = ProjSubspace::span(&f, monomial_count(m, d), &vecs);
        Self::from_vectors(f, d, m, s.basis().to_vec(), meta)
    }

    /// Vector-space dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn proj_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn subspace(&self) -> ProjSubspace {
        let vecs: Vec<Vec<Fe>> = self.basis.iter().map(|h| h.coeffs.clone()).collect();
        ProjSubspace::span(&self.field, monomial_count(self.m, self.d), &vecs)
    }

    /// Exact span membership.
    pub fn contains(&self, form: &HomogForm) -> bool {
        self.subspace().contains(&self.field, &form.coeffs)
    }

    pub fn contains_system(&self, o: &FormSystem) -> bool {
        let s = self.subspace();
        o.basis.iter().all(|h| s.contains(&self.field, &h.coeffs))
    }

    /// Values of all basis forms at a point.
    pub fn eval(&self, pt: &[Fe]) -> Vec<Fe> {
        let vals = monomial_values(&self.field, pt, self.d);
        self.basis.iter().map(|h| self.field.dot(&h.coeffs, &vals)).collect()
    }

    pub fn to_json(&self, metadata: serde_json::Value) -> FormSystemJson {
        FormSystemJson {
            degree: self.d,
            vars: self.m,
            monomial_order: MONOMIAL_ORDER.to_string(),
            basis: self
                .basis
                .iter()
                .map(|h| h.coeffs.iter().map(|c| c.to_string()).collect())
                .collect(),
            metadata,
        }
    }
}

/// Serialized [`FormSystem`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormSystemJson {
    pub degree: usize,
    pub vars: usize,
    pub monomial_order: String,
    pub basis: Vec<Vec<String>>,
    pub metadata: serde_json::Value,
}

/// Degree-`d` forms in `m` variables satisfying every condition of `spec`.
pub fn system(
    f: &PrimeField,
    d: usize,
    m: usize,
    spec: &mut VanishingSpec<'_>,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    for c in &spec.components {
        assert!(c.mult <= d, "multiplicity {} exceeds degree {}", c.mult, d);
    }
    let mut rows = SpecRows::new(f, d, m, spec);
    let (k, meta) = stabilized_kernel(f, &mut rows, rng, budget)?;
    Ok(FormSystem::from_vectors(*f, d, m, k, meta))
}

/// Tests `form` against `trials` fresh sample points of each sampled component
/// (and all fixed points). Returns the verdict and the probability that a
/// non-member would have passed.
pub fn member(
    form: &HomogForm,
    spec: &mut VanishingSpec<'_>,
    trials: usize,
    rng: &mut FieldRng,
) -> Result<(bool, f64)> {
    let f = form.field;
    let mut rows = SpecRows::new(&f, form.d, form.m, spec);
    let check = |rs: &[Vec<Fe>]| rs.iter().all(|r| f.dot(r, &form.coeffs).is_zero());
    if !check(&rows.fixed_rows()?) {
        return Ok((false, 0.0));
    }
    let miss = rows.miss_probability();
    let mut used = 0;
    for _ in 0..trials {
        match rows.sample_rows(rng)? {
            Some(rs) => {
                used += 1;
                if !check(&rs) {
                    return Ok((false, 0.0));
                }
            }
            None => break,
        }
    }
    Ok((true, if used == 0 { 0.0 } else { miss.powi(used as i32) }))
}

/// Restriction of every form of `s` along the linear map `map` (`m x k`, full
/// column rank), reduced to an independent basis.
pub fn restrict_system(s: &FormSystem, map: &MatFp) -> Result<FormSystem> {
    let forms: Vec<HomogForm> = s.basis.iter().map(|h| h.substitute_linear(map)).collect::<Result<_>>()?;
    Ok(FormSystem::span_of(s.field, s.d, map.cols, &forms, s.meta.clone()))
}

/// Degree-`r` relations among the coordinates of a map, found as the forms
/// vanishing on sampled image points.
pub fn fit_image_relations<'a>(
    f: &PrimeField,
    target_vars: usize,
    r: usize,
    image_sampler: impl FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a,
    param_degree: usize,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(
        image_sampler,
        1,
        "image",
        param_degree,
    )]);
    system(f, r, target_vars, &mut spec, rng, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;

    fn ctx(seed: u64) -> (PrimeField, FieldRng) {
        let c = PrimeContext::new(1_000_003, seed).unwrap();
        (c.field(), c.rng(0))
    }

    #[test]
    fn condition_row_counts() {
        let (f, mut rng) = ctx(1);
        let q = rng.vector(6);
        assert_eq!(conditions_at(&f, &q, 1, 3).len(), 1);
        assert_eq!(conditions_at(&f, &q, 2, 3).len(), 6);
        assert_eq!(conditions_at(&f, &q, 3, 4).len(), 21);
        assert!(conditions_at(&f, &q, 0, 3).is_empty());
        // μ = 1 row is plain evaluation.
        let form = HomogForm::random(f, 3, 6, &mut rng);
        let row = &conditions_at(&f, &q, 1, 3)[0];
        assert_eq!(f.dot(row, &form.coeffs), form.eval(&q));
    }

    #[test]
    fn kernel_forms_vanish_to_order_along_lines() {
        let (f, mut rng) = ctx(2);
        let (d, m, mult) = (4, 4, 3);
        let q = rng.vector(m);
        let mut spec = VanishingSpec::new(vec![VanishingComponent::fixed(vec![q.clone()], mult, "Q")]);
        let sys = system(&f, d, m, &mut spec, &mut rng, Budget::unlimited()).unwrap();
        // one condition per partial of order mult - 1: 35 - 10
        assert_eq!(sys.dim(), monomial_count(m, d) - monomial_count(m, mult - 1));
        for h in &sys.basis {
            for _ in 0..20 {
                let u = rng.vector(m);
                let poly = h.restrict_to_line(&q, &u).unwrap();
                for i in 0..mult {
                    assert!(poly.coeff(i).is_zero());
                }
            }
        }
    }

    #[test]
    fn conic_through_five_points() {
        let (f, mut rng) = ctx(3);
        let pts: Vec<Vec<Fe>> = (0..5).map(|_| rng.vector(3)).collect();
        let mut spec = VanishingSpec::new(vec![VanishingComponent::fixed(pts.clone(), 1, "pts")]);
        let sys = system(&f, 2, 3, &mut spec, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(sys.dim(), 1);
        for p in &pts {
            assert!(sys.basis[0].eval(p).is_zero());
        }
    }

    #[test]
    fn sampled_twisted_cubic() {
        // Quadrics through the twisted cubic (s^3, s^2 t, s t^2, t^3): a net.
        let (f, mut rng) = ctx(4);
        let sampler = move |r: &mut FieldRng| {
            let s = r.elem();
            Ok(vec![f.pow(s, 3), f.pow(s, 2), s, Fe::ONE])
        };
        let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(sampler, 1, "rnc", 3)]);
        let sys = system(&f, 2, 4, &mut spec, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(sys.dim(), 3);
        assert_eq!(sys.meta.stable_batches, STABLE_BATCHES);
        assert!(sys.meta.error_bound < 1e-12);
        // membership: every basis element passes, a random quadric fails
        let mut spec2 = VanishingSpec::new(vec![VanishingComponent::sampled(
            move |r: &mut FieldRng| {
                let s = r.elem();
                Ok(vec![f.pow(s, 3), f.pow(s, 2), s, Fe::ONE])
            },
            1,
            "rnc",
            3,
        )]);
        for h in &sys.basis {
            assert!(member(h, &mut spec2, 50, &mut rng).unwrap().0);
        }
        let rand = HomogForm::random(f, 2, 4, &mut rng);
        assert!(!member(&rand, &mut spec2, 50, &mut rng).unwrap().0);
        assert!(member(&HomogForm::zero(f, 2, 4), &mut spec2, 5, &mut rng).unwrap().0);
        // restriction to the plane x3 = 0 (coordinates x0, x1, x2)
        let sel = MatFp::from_cols(
            &(0..3).map(|j| (0..4).map(|i| if i == j { Fe::ONE } else { Fe::ZERO }).collect()).collect::<Vec<_>>(),
            4,
        );
        let r = restrict_system(&sys, &sel).unwrap();
        // x0 x2 - x1^2, -x1 x2, -x2^2 stay independent
        assert_eq!(r.dim(), 3);
        let conic = HomogForm::monomial(f, &[1, 0, 1], Fe::ONE).sub(&HomogForm::monomial(f, &[0, 2, 0], Fe::ONE));
        assert!(r.contains(&conic));
    }

    #[test]
    fn fit_relations_of_veronese() {
        // Image of P^1 under conics: one quadric relation, no linear one.
        let (f, mut rng) = ctx(5);
        let map = move |r: &mut FieldRng| {
            let (s, t) = (r.elem(), r.elem());
            Ok(vec![f.mul(s, s), f.mul(s, t), f.mul(t, t)])
        };
        let lin = fit_image_relations(&f, 3, 1, map, 2, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(lin.dim(), 0);
        let quad = fit_image_relations(&f, 3, 2, map, 2, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(quad.dim(), 1);
    }

    #[test]
    fn budget_exhaustion_reports_unstabilized() {
        let (f, mut rng) = ctx(6);
        let sampler = |r: &mut FieldRng| Ok(r.vector(5));
        let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(sampler, 1, "P4", 1)]);
        let err = system(&f, 4, 5, &mut spec, &mut rng, Budget::rows(10)).unwrap_err();
        assert!(matches!(err, Error::Unstabilized { .. }));
    }
}
