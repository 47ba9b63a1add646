//! Implicit higher-degree systems built from quadrics by prolongation.
//!
//! Level 0 is a space of quadrics `V_0`. Level `k` is the space of forms of
//! degree `k + 2` whose first partials all lie in `V_{k-1}`. A level-`k` form
//! `F` is stored through its partials, `∂_l F = Σ_j' a[l][j'] G_j'` with
//! `G_j'` the level `k - 1` basis, and recovered by Euler's identity
//! `(k + 2) F = Σ_l x_l ∂_l F`. The integrability conditions
//! `∂_i ∂_l F = ∂_l ∂_i F` are imposed at random points.
//!
//! Starting from the quadrics through a curve, level `k` consists of the forms
//! whose partials of order `k` vanish on the curve, i.e. the forms of degree
//! `k + 2` vanishing to order `k + 1` along it. This never expands a form in
//! the full monomial basis, which is what makes high genus reachable.

use crate::error::Result;
use crate::exactfield::{Fe, FieldRng, PrimeField};
use crate::multipoly::{monomial_count, rank_of, HomogForm, MonomialIndex};
use crate::vanishsys::{stabilized_kernel, Budget, RowSource, SystemMeta};

#[derive(Clone, Debug)]
struct Level {
    dim: usize,
    prev: usize,
    /// `a[(j * m + l) * prev + j']`.
    a: Vec<Fe>,
}

#[derive(Clone, Debug)]
pub struct ProlongationChain {
    pub field: PrimeField,
    pub m: usize,
    quadrics: Vec<HomogForm>,
    levels: Vec<Level>,
    pub metas: Vec<SystemMeta>,
}

impl ProlongationChain {
    pub fn new(field: PrimeField, m: usize, quadrics: Vec<HomogForm>) -> Self {
        assert!(quadrics.iter().all(|q| q.d == 2 && q.m == m));
        ProlongationChain { field, m, quadrics, levels: Vec::new(), metas: Vec::new() }
    }

    pub fn top_degree(&self) -> usize {
        2 + self.levels.len()
    }

    /// Dimensions of all levels, starting with the quadrics.
    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.quadrics.len()).chain(self.levels.iter().map(|l| l.dim)).collect()
    }

    pub fn top_dim(&self) -> usize {
        self.levels.last().map_or(self.quadrics.len(), |l| l.dim)
    }

    /// Values and gradients (`grad[j * m + l]`) of the top level basis at `x`.
    pub fn eval_top(&self, x: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
        let f = &self.field;
        let m = self.m;
        let mut grad = Vec::with_capacity(self.quadrics.len() * m);
        for q in &self.quadrics {
            grad.extend(q.gradient_at(x));
        }
        let mut val: Vec<Fe> = (0..self.quadrics.len())
            .map(|j| f.div(f.dot(x, &grad[j * m..(j + 1) * m]), f.elem(2)).unwrap())
            .collect();
        for (k, lv) in self.levels.iter().enumerate() {
            let inv = f.inv(f.elem(k as u64 + 3)).unwrap();
            let mut g = vec![Fe::ZERO; lv.dim * m];
            for (jl, out) in g.iter_mut().enumerate() {
                *out = f.dot(&lv.a[jl * lv.prev..(jl + 1) * lv.prev], &val);
            }
            val = (0..lv.dim).map(|j| f.mul(inv, f.dot(x, &g[j * m..(j + 1) * m]))).collect();
            grad = g;
        }
        (val, grad)
    }

    /// Adds the next level. Returns its dimension.
    pub fn extend(&mut self, rng: &mut FieldRng, budget: Budget) -> Result<usize> {
        let mut src = ExtensionRows { chain: self };
        let (kernel, meta) = stabilized_kernel(&self.field.clone(), &mut src, rng, budget)?;
        let prev = self.top_dim();
        let mut a = Vec::with_capacity(kernel.len() * self.m * prev);
        for v in &kernel {
            a.extend_from_slice(v);
        }
        self.levels.push(Level { dim: kernel.len(), prev, a });
        self.metas.push(meta);
        Ok(kernel.len())
    }

    /// Extends until the top level has degree `d`.
    pub fn extend_to(&mut self, d: usize, rng: &mut FieldRng, budget: Budget) -> Result<()> {
        while self.top_degree() < d {
            self.extend(rng, budget)?;
        }
        Ok(())
    }

    /// Top level basis restricted to the coordinates `sel` (others set to
    /// zero), as explicit forms in `sel.len()` variables.
    pub fn restricted_top(&self, sel: &[usize]) -> Vec<HomogForm> {
        let f = self.field;
        let k = sel.len();
        let mut cur: Vec<HomogForm> = self.quadrics.iter().map(|q| q.select_coordinates(sel)).collect();
        for (lvl, lv) in self.levels.iter().enumerate() {
            let e = lvl + 2;
            let inv = f.inv(f.elem(e as u64 + 1)).unwrap();
            let maps = var_multiplication_maps(e, k);
            let n_in = monomial_count(k, e);
            let n_out = monomial_count(k, e + 1);
            let mut next = Vec::with_capacity(lv.dim);
            let mut acc = vec![0u64; n_in];
            for j in 0..lv.dim {
                let mut out = vec![Fe::ZERO; n_out];
                for (t, &l) in sel.iter().enumerate() {
                    let coefs = &lv.a[(j * self.m + l) * lv.prev..(j * self.m + l + 1) * lv.prev];
                    combine_into(&f, &mut acc, coefs, &cur);
                    let map = &maps[t];
                    for (r, v) in acc.iter().enumerate() {
                        let v = (*v % f.modulus() as u64) as u32;
                        if v != 0 {
                            let o = &mut out[map[r] as usize];
                            *o = f.add(*o, Fe(v));
                        }
                    }
                }
                for c in out.iter_mut() {
                    *c = f.mul(*c, inv);
                }
                next.push(HomogForm::from_coeffs(f, e + 1, k, out));
            }
            cur = next;
        }
        cur
    }

    /// Top level basis as explicit forms in all variables.
    pub fn explicit_top(&self) -> Vec<HomogForm> {
        self.restricted_top(&(0..self.m).collect::<Vec<_>>())
    }
}

/// `acc = Σ c_j forms_j` with lazy reduction.
fn combine_into(f: &PrimeField, acc: &mut [u64], c: &[Fe], forms: &[HomogForm]) {
    acc.iter_mut().for_each(|v| *v = 0);
    let p = f.modulus() as u64;
    let limit = f.accumulation_limit().max(1);
    let mut pending = 0;
    for (cj, h) in c.iter().zip(forms) {
        if cj.is_zero() {
            continue;
        }
        let cv = cj.0 as u64;
        for (a, x) in acc.iter_mut().zip(&h.coeffs) {
            *a += cv * x.0 as u64;
        }
        pending += 1;
        if pending + 1 >= limit {
            acc.iter_mut().for_each(|v| *v %= p);
            pending = 0;
        }
    }
}

/// For each variable `t`, the rank in degree `e + 1` of `x_t` times each
/// degree-`e` monomial.
fn var_multiplication_maps(e: usize, k: usize) -> Vec<Vec<u32>> {
    let idx = MonomialIndex::shared(e, k);
    (0..k)
        .map(|t| {
            (0..idx.len())
                .map(|r| {
                    let mut ex = idx.exps(r).to_vec();
                    ex[t] += 1;
                    rank_of(&ex) as u32
                })
                .collect()
        })
        .collect()
}

/// Integrability rows for the next level at random points.
struct ExtensionRows<'c> {
    chain: &'c ProlongationChain,
}

impl RowSource for ExtensionRows<'_> {
    fn cols(&self) -> usize {
        self.chain.m * self.chain.top_dim()
    }

    fn fixed_rows(&mut self) -> Result<Vec<Vec<Fe>>> {
        Ok(Vec::new())
    }

    fn sample_rows(&mut self, rng: &mut FieldRng) -> Result<Option<Vec<Vec<Fe>>>> {
        let f = self.chain.field;
        let m = self.chain.m;
        let s = self.chain.top_dim();
        let x = rng.vector(m);
        let (_, grad) = self.chain.eval_top(&x);
        let mut rows = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            for l in i + 1..m {
                let mut row = vec![Fe::ZERO; m * s];
                for jp in 0..s {
                    row[i * s + jp] = grad[jp * m + l];
                    row[l * s + jp] = f.neg(grad[jp * m + i]);
                }
                rows.push(row);
            }
        }
        Ok(Some(rows))
    }

    fn miss_probability(&self) -> f64 {
        (2 * self.chain.top_degree()) as f64 / self.chain.field.modulus() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;
    use crate::vanishsys::{system, VanishingComponent, VanishingSpec};

    #[test]
    fn cubics_singular_along_twisted_cubic_in_p4() {
        // A rational normal quartic in P^4: compare the prolonged cubics with
        // cubics vanishing doubly along the curve computed directly.
        let c = PrimeContext::new(1_000_003, 11).unwrap();
        let f = c.field();
        let mut rng = c.rng(0);
        let curve = move |r: &mut FieldRng| {
            let s = r.elem();
            Ok((0..5).map(|i| f.pow(s, i)).collect::<Vec<_>>())
        };
        let mut spec = VanishingSpec::new(vec![VanishingComponent::sampled(curve, 1, "rnc", 4)]);
        let quad = system(&f, 2, 5, &mut spec, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(quad.dim(), 6);
        let mut chain = ProlongationChain::new(f, 5, quad.basis.clone());
        let d1 = chain.extend(&mut rng, Budget::unlimited()).unwrap();
        let mut spec2 = VanishingSpec::new(vec![VanishingComponent::sampled(curve, 2, "rnc", 4)]);
        let direct = system(&f, 3, 5, &mut spec2, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(d1, direct.dim());
        let explicit = chain.explicit_top();
        let sys = crate::vanishsys::FormSystem::span_of(f, 3, 5, &explicit, SystemMeta::default());
        assert_eq!(sys.dim(), d1);
        assert!(direct.contains_system(&sys) && sys.contains_system(&direct));
        // implicit evaluation agrees with the explicit forms
        let x = rng.vector(5);
        let (vals, _) = chain.eval_top(&x);
        for (v, h) in vals.iter().zip(&explicit) {
            assert_eq!(*v, h.eval(&x));
        }
        // restriction to a coordinate subspace agrees with selection
        let sel = [0, 2, 4];
        let r = chain.restricted_top(&sel);
        for (a, b) in r.iter().zip(&explicit) {
            assert_eq!(*a, b.select_coordinates(&sel));
        }
    }
}
