//! Forms on `P^(2g-3)` with prescribed multiplicity at `2g - 1` base points,
//! and for genus 3 the cubic threefold they map onto, its nodes, the lines
//! through a point of it, and the quartic branch surface of the projection
//! from that point.

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeField};
use crate::linsolve::{normalize, same_point, MatFp, ProjSubspace};
use crate::multipoly::HomogForm;
use crate::unipoly::UniPoly;
use crate::vanishsys::{fit_image_relations, system, Budget, FormSystem, VanishingComponent, VanishingSpec};

#[derive(Clone, Debug)]
pub struct KumarConfig {
    pub g: usize,
    pub field: PrimeField,
    /// Coordinate vertices followed by the unit point.
    pub base_points: Vec<Vec<Fe>>,
    pub e0: Vec<Fe>,
    /// Degree `g - 1`, multiplicity `g - 2` at the base points.
    pub omega: FormSystem,
    /// The same with multiplicity `g - 2` at `e0` as well.
    pub lambda: FormSystem,
}

/// The vertices of the coordinate simplex in `P^(m-1)` and the unit point.
pub fn simplex_and_unit(m: usize) -> Vec<Vec<Fe>> {
    let mut pts: Vec<Vec<Fe>> =
        (0..m).map(|i| (0..m).map(|j| if i == j { Fe::ONE } else { Fe::ZERO }).collect()).collect();
    pts.push(vec![Fe::ONE; m]);
    pts
}

pub fn build_kumar(f: &PrimeField, g: usize, rng: &mut FieldRng, budget: Budget) -> Result<KumarConfig> {
    assert!(g >= 3);
    let m = 2 * g - 2;
    let base_points = simplex_and_unit(m);
    let omega = {
        let mut spec = VanishingSpec::new(vec![VanishingComponent::fixed(base_points.clone(), g - 2, "e")]);
        system(f, g - 1, m, &mut spec, rng, budget)?
    };
    let e0: Vec<Fe> = (0..m).map(|_| rng.nonzero()).collect();
    let lambda = lambda_system(f, g, &base_points, &e0, rng, budget)?;
    if !omega.contains_system(&lambda) {
        return Err(Error::InclusionViolated("Lambda in Omega".into()));
    }
    Ok(KumarConfig { g, field: *f, base_points, e0, omega, lambda })
}

fn lambda_system(
    f: &PrimeField,
    g: usize,
    base: &[Vec<Fe>],
    e0: &[Fe],
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<FormSystem> {
    let mut pts = base.to_vec();
    pts.push(e0.to_vec());
    let mut spec = VanishingSpec::new(vec![VanishingComponent::fixed(pts, g - 2, "e+e0")]);
    system(f, g - 1, 2 * g - 2, &mut spec, rng, budget)
}

impl KumarConfig {
    /// Replaces the extra point and recomputes `Λ`.
    pub fn with_e0(&self, e0: Vec<Fe>, rng: &mut FieldRng) -> Result<KumarConfig> {
        let lambda = lambda_system(&self.field, self.g, &self.base_points, &e0, rng, Budget::unlimited())?;
        Ok(KumarConfig { e0, lambda, ..self.clone() })
    }

    /// Coordinates of the map given by `Ω`.
    pub fn i_omega(&self, x: &[Fe]) -> Result<Vec<Fe>> {
        normalize(&self.field, &self.omega.eval(x)).ok_or(Error::IndeterminateAt)
    }

    pub fn i_lambda(&self, x: &[Fe]) -> Result<Vec<Fe>> {
        normalize(&self.field, &self.lambda.eval(x)).ok_or(Error::IndeterminateAt)
    }

    /// Matrix expressing the `Λ` basis in the `Ω` basis.
    pub fn kappa_matrix(&self) -> Result<MatFp> {
        let f = &self.field;
        let s = self.omega.subspace();
        // Coordinates relative to the RREF basis, then to the Ω basis.
        let to_rref = MatFp::from_cols(
            &self
                .omega
                .basis
                .iter()
                .map(|h| s.coords_of(f, &h.coeffs).ok_or(Error::RankDeficient))
                .collect::<Result<Vec<_>>>()?,
            s.dim(),
        );
        let from_rref = to_rref.inverse(f).ok_or(Error::RankDeficient)?;
        let rows: Vec<Vec<Fe>> = self
            .lambda
            .basis
            .iter()
            .map(|h| {
                let c = s.coords_of(f, &h.coeffs).ok_or(Error::InclusionViolated("Lambda in Omega".into()))?;
                Ok(from_rref.mul_vec(f, &c))
            })
            .collect::<Result<_>>()?;
        Ok(MatFp::from_rows(&rows, self.omega.dim()))
    }

    /// The point `i_Ω(e0)`.
    pub fn center(&self) -> Result<Vec<Fe>> {
        self.i_omega(&self.e0)
    }

    /// Images of the lines through pairs of base points.
    pub fn contracted_line_images(&self, rng: &mut FieldRng) -> Result<Vec<Vec<Fe>>> {
        let f = &self.field;
        let n = self.base_points.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let c = rng.nonzero();
                let x: Vec<Fe> = self.base_points[i]
                    .iter()
                    .zip(&self.base_points[j])
                    .map(|(&a, &b)| f.add(a, f.mul(c, b)))
                    .collect();
                out.push(self.i_omega(&x)?);
            }
        }
        Ok(out)
    }
}

/// Linear projection `y ↦ K y`.
pub fn kappa(k: &MatFp, f: &PrimeField, y: &[Fe]) -> Result<Vec<Fe>> {
    normalize(f, &k.mul_vec(f, y)).ok_or(Error::IndeterminateAt)
}

/// Relation counts found while fitting a cubic hypersurface to an image.
#[derive(Clone, Debug)]
pub struct CubicFit {
    pub cubic: HomogForm,
    /// Kernel dimensions at degrees 1, 2, 3.
    pub kernel_dims: [usize; 3],
    pub error_bound: f64,
}

/// Fits the unique cubic relation among the coordinates of a map into `P^4`.
pub fn fit_cubic<'a>(
    f: &PrimeField,
    mut image: impl FnMut(&mut FieldRng) -> Result<Vec<Fe>> + 'a,
    param_degree: usize,
    rng: &mut FieldRng,
    budget: Budget,
) -> Result<CubicFit> {
    let mut dims = [0usize; 3];
    let mut sys = None;
    let mut bound: f64 = 0.0;
    for r in 1..=3 {
        let s = fit_image_relations(f, 5, r, &mut image, param_degree, rng, budget)?;
        dims[r - 1] = s.dim();
        bound += s.meta.error_bound;
        sys = Some(s);
    }
    let sys = sys.unwrap();
    if sys.dim() != 1 {
        return Err(Error::FitAmbiguous(sys.dim()));
    }
    Ok(CubicFit { cubic: sys.basis[0].clone(), kernel_dims: dims, error_bound: bound.min(1.0) })
}

pub fn is_singular_point(form: &HomogForm, pt: &[Fe]) -> bool {
    form.gradient_at(pt).iter().all(|c| c.is_zero())
}

/// Projectively distinct points of a list.
pub fn distinct_points(f: &PrimeField, pts: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut out: Vec<Vec<Fe>> = Vec::new();
    for p in pts {
        if !out.iter().any(|q| same_point(f, p, q)) {
            out.push(p.clone());
        }
    }
    out
}

/// Taylor expansion of a cubic at a point `w` on it: with `u = Σ c_i b_i` in a
/// complement of `w`, `F(s w + u) = s² α(c) + s β(c) + γ(c)`.
#[derive(Clone, Debug)]
pub struct CubicAtPoint {
    pub field: PrimeField,
    pub cubic: HomogForm,
    pub w: Vec<Fe>,
    /// Complement basis `b_0, ..., b_3`.
    pub complement: Vec<Vec<Fe>>,
    pub alpha: HomogForm,
    pub beta: HomogForm,
    pub gamma: HomogForm,
    /// Columns `w, b_0, ..., b_3`.
    frame: MatFp,
    frame_inv: MatFp,
}

impl CubicAtPoint {
    pub fn new(cubic: &HomogForm, w: &[Fe], rng: &mut FieldRng) -> Result<Self> {
        let f = cubic.field;
        assert_eq!((cubic.d, cubic.m), (3, 5));
        if !cubic.eval(w).is_zero() {
            return Err(Error::DegenerateConfiguration);
        }
        for _ in 0..20 {
            let complement: Vec<Vec<Fe>> = (0..4).map(|_| rng.vector(5)).collect();
            let mut cols = vec![w.to_vec()];
            cols.extend(complement.iter().cloned());
            let frame = MatFp::from_cols(&cols, 5);
            let Some(frame_inv) = frame.inverse(&f) else { continue };
            let parts = cubic.substitute_linear(&frame)?.split_first_var();
            if !parts[3].is_zero() {
                return Err(Error::DegenerateConfiguration);
            }
            return Ok(CubicAtPoint {
                field: f,
                cubic: cubic.clone(),
                w: w.to_vec(),
                complement,
                alpha: parts[2].clone(),
                beta: parts[1].clone(),
                gamma: parts[0].clone(),
                frame,
                frame_inv,
            });
        }
        Err(Error::InternalRandomnessExhausted)
    }

    /// Ambient direction of complement coordinates `c`.
    pub fn direction(&self, c: &[Fe]) -> Vec<Fe> {
        let mut full = vec![Fe::ZERO];
        full.extend_from_slice(c);
        self.frame.mul_vec(&self.field, &full)
    }

    /// Complement coordinates of the projection of `pt` from `w`.
    pub fn project(&self, pt: &[Fe]) -> Result<Vec<Fe>> {
        let c = self.frame_inv.mul_vec(&self.field, pt);
        normalize(&self.field, &c[1..]).ok_or(Error::IndeterminateAt)
    }

    /// `β² - 4αγ`, the discriminant of the residual quadratic.
    pub fn branch_quartic(&self) -> HomogForm {
        let f = self.field;
        let four_ag = self.alpha.mul(&self.gamma).scale(f.elem(4));
        self.beta.mul(&self.beta).sub(&four_ag)
    }

    /// Whether the line `w + t u` lies on the cubic, tested at `t = 1..=4`.
    pub fn line_on_cubic(&self, c: &[Fe]) -> bool {
        let f = self.field;
        let u = self.direction(c);
        (1..=4u64).all(|t| {
            let pt: Vec<Fe> = self.w.iter().zip(&u).map(|(&a, &b)| f.add(a, f.mul(f.elem(t), b))).collect();
            self.cubic.eval(&pt).is_zero()
        })
    }

    /// Directions (complement coordinates) of the lines through `w` on the
    /// cubic, all `F_p`-rational, or `NoSplitSeed`.
    ///
    /// On the plane `α = 0` the lines are the common zeros of the conic `β`
    /// and the cubic `γ`. In a random chart `(1 : s1 : s2)` the resultant in
    /// `s2` is a polynomial of degree at most 6 in `s1`, interpolated from its
    /// values at 13 points; each of its roots gives `s2` as a common root.
    pub fn lines_through(&self, rng: &mut FieldRng) -> Result<Vec<Vec<Fe>>> {
        let f = self.field;
        let plane = ProjSubspace::span(&f, 4, &[self.alpha.coeffs.clone()]).annihilator(&f);
        if plane.dim() != 3 {
            return Err(Error::DegenerateConfiguration);
        }
        let v = MatFp::from_cols(plane.basis(), 4);
        let (chart, conic, cubic) = loop {
            let r = MatFp::from_rows(&(0..3).map(|_| rng.vector(3)).collect::<Vec<_>>(), 3);
            if r.inverse(&f).is_none() {
                continue;
            }
            let map = v.mul(&f, &r);
            let conic = self.beta.substitute_linear(&map)?;
            let cubic = self.gamma.substitute_linear(&map)?;
            let top = [Fe::ZERO, Fe::ZERO, Fe::ONE];
            if conic.eval(&top).is_zero() || cubic.eval(&top).is_zero() {
                continue;
            }
            break (map, conic, cubic);
        };
        let along = |h: &HomogForm, s1: Fe| h.restrict_to_line(&[Fe::ONE, s1, Fe::ZERO], &[Fe::ZERO, Fe::ZERO, Fe::ONE]);
        let xs: Vec<Fe> = (0..13).map(|_| rng.elem()).collect();
        let mut ys = Vec::with_capacity(xs.len());
        for &s1 in &xs {
            ys.push(along(&conic, s1)?.resultant(&f, &along(&cubic, s1)?));
        }
        let mut sorted = xs.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != xs.len() {
            return Err(Error::InternalRandomnessExhausted);
        }
        let res = UniPoly::interpolate(&f, &xs, &ys)?;
        if res.degree().is_none_or(|d| d > 6) {
            return Err(Error::DegenerateConfiguration);
        }
        let mut roots = res.roots_in_field(&f)?;
        roots.dedup();
        if roots.len() < 6 {
            return Err(Error::NoSplitSeed);
        }
        let mut dirs = Vec::with_capacity(6);
        for s1 in roots {
            let common = along(&conic, s1)?.gcd(&f, &along(&cubic, s1)?);
            if common.degree() != Some(1) {
                return Err(Error::DegenerateConfiguration);
            }
            let s2 = f.neg(common.coeff(0));
            let c = chart.mul_vec(&f, &[Fe::ONE, s1, s2]);
            dirs.push(normalize(&f, &c).ok_or(Error::DegenerateConfiguration)?);
        }
        Ok(dirs)
    }
}

/// Outcome of classifying random lines through the center.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FiberStats {
    pub directions: usize,
    /// Two residual points over `F_p`.
    pub split: usize,
    /// Two conjugate residual points over `F_{p^2}` only.
    pub inert: usize,
    /// Discriminant zero: a single residual point.
    pub ramified: usize,
    /// Residual quadratic degenerate (line meets the cubic only at `w`, or
    /// lies on it).
    pub degenerate: usize,
    /// Split residual points that failed to lie on the cubic.
    pub off_cubic: usize,
}

impl FiberStats {
    /// Fiber size over the quadratic extension was 2 for every line off the
    /// branch locus.
    pub fn two_to_one(&self) -> bool {
        self.off_cubic == 0 && self.degenerate == 0 && self.split + self.inert + self.ramified == self.directions
    }
}

/// Fiber sizes of the projection from `w` over random directions.
pub fn fiber_statistics(cp: &CubicAtPoint, trials: usize, rng: &mut FieldRng) -> FiberStats {
    let f = cp.field;
    let mut st = FiberStats { directions: trials, ..Default::default() };
    for _ in 0..trials {
        let c = rng.vector(4);
        let (a, b, g) = (cp.alpha.eval(&c), cp.beta.eval(&c), cp.gamma.eval(&c));
        if g.is_zero() {
            st.degenerate += 1;
            continue;
        }
        let disc = f.sub(f.mul(b, b), f.mul(f.elem(4), f.mul(a, g)));
        match f.legendre(disc) {
            0 => st.ramified += 1,
            -1 => st.inert += 1,
            _ => {
                st.split += 1;
                let r = f.sqrt(disc).unwrap();
                let two_g = f.add(g, g);
                let u = cp.direction(&c);
                for sgn in [r, f.neg(r)] {
                    let t = f.div(f.sub(sgn, b), two_g).unwrap();
                    let pt: Vec<Fe> = cp.w.iter().zip(&u).map(|(&w, &x)| f.add(w, f.mul(t, x))).collect();
                    if !cp.cubic.eval(&pt).is_zero() {
                        st.off_cubic += 1;
                    }
                }
            }
        }
    }
    st
}

/// The 16 singular points of the branch quartic: the projected nodes of the
/// cubic and the directions of the lines through the center.
#[derive(Clone, Debug)]
pub struct KummerNodes {
    pub quartic: HomogForm,
    pub projected_nodes: Vec<Vec<Fe>>,
    pub line_directions: Vec<Vec<Fe>>,
    pub distinct: usize,
    pub all_singular: bool,
}

pub fn verify_kummer_nodes(cp: &CubicAtPoint, nodes: &[Vec<Fe>], lines: &[Vec<Fe>]) -> Result<KummerNodes> {
    let f = cp.field;
    let quartic = cp.branch_quartic();
    if quartic.is_zero() {
        return Err(Error::DegenerateConfiguration);
    }
    let projected: Vec<Vec<Fe>> = nodes.iter().map(|n| cp.project(n)).collect::<Result<_>>()?;
    let mut all: Vec<Vec<Fe>> = projected.clone();
    all.extend(lines.iter().cloned());
    let distinct = distinct_points(&f, &all).len();
    let all_singular = all.iter().all(|p| is_singular_point(&quartic, p));
    let out = KummerNodes {
        quartic,
        projected_nodes: projected,
        line_directions: lines.to_vec(),
        distinct,
        all_singular,
    };
    if distinct != 16 || !out.all_singular {
        return Err(Error::NodeCountMismatch { expected: 16, found: if out.all_singular { distinct } else { 0 } });
    }
    Ok(out)
}

/// The genus 3 picture for a map onto a cubic in `P^4`: the fitted cubic, its
/// nodes, the center, the lines through it and the branch quartic nodes.
#[derive(Clone, Debug)]
pub struct CubicModel {
    pub fit: CubicFit,
    pub nodes: Vec<Vec<Fe>>,
    pub at_center: CubicAtPoint,
    pub lines: Vec<Vec<Fe>>,
}

impl CubicModel {
    pub fn nodes_singular(&self) -> bool {
        self.nodes.iter().all(|n| is_singular_point(&self.fit.cubic, n))
    }
}

/// Builds the cubic model of the `Ω` map, redrawing `e0` until the lines
/// through the center are all rational (at most 50 draws).
pub fn fit_cubic_model(cfg: &KumarConfig, rng: &mut FieldRng, budget: Budget) -> Result<(KumarConfig, CubicModel)> {
    assert_eq!(cfg.g, 3);
    let f = cfg.field;
    let fit = {
        let c = cfg.clone();
        let image = move |r: &mut FieldRng| loop {
            if let Ok(y) = c.i_omega(&r.vector(4)) {
                return Ok(y);
            }
        };
        fit_cubic(&f, image, 2, rng, budget)?
    };
    let nodes = distinct_points(&f, &cfg.contracted_line_images(rng)?);
    let mut cfg = cfg.clone();
    for attempt in 0..50 {
        if attempt > 0 {
            let e0 = (0..4).map(|_| rng.nonzero()).collect();
            cfg = cfg.with_e0(e0, rng)?;
        }
        let w = cfg.center()?;
        let cp = CubicAtPoint::new(&fit.cubic, &w, rng)?;
        match cp.lines_through(rng) {
            Ok(lines) => {
                let model = CubicModel { fit, nodes, at_center: cp, lines };
                return Ok((cfg, model));
            }
            Err(Error::NoSplitSeed) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoSplitSeed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;

    fn cfg(g: usize, seed: u64) -> (KumarConfig, FieldRng) {
        let c = PrimeContext::new(1_000_003, seed).unwrap();
        let mut rng = c.rng(0);
        (build_kumar(&c.field(), g, &mut rng, Budget::unlimited()).unwrap(), rng)
    }

    #[test]
    fn omega_lambda_dimensions() {
        let (k3, _) = cfg(3, 1);
        assert_eq!((k3.omega.dim(), k3.lambda.dim()), (5, 4));
        let (k4, _) = cfg(4, 2);
        assert_eq!((k4.omega.dim(), k4.lambda.dim()), (14, 8));
    }

    #[test]
    fn contraction_and_kappa() {
        let (k, mut rng) = cfg(3, 3);
        let f = k.field;
        // three points on the line e0 e1 share an image
        let imgs: Vec<Vec<Fe>> = (0..3)
            .map(|_| {
                let c = rng.nonzero();
                k.i_omega(&[Fe::ONE, c, Fe::ZERO, Fe::ZERO]).unwrap()
            })
            .collect();
        assert!(same_point(&f, &imgs[0], &imgs[1]) && same_point(&f, &imgs[0], &imgs[2]));
        assert!(matches!(k.i_omega(&k.base_points[2]), Err(Error::IndeterminateAt)));
        let km = k.kappa_matrix().unwrap();
        for _ in 0..20 {
            let x = rng.vector(4);
            let via = kappa(&km, &f, &k.omega.eval(&x)).unwrap();
            assert!(same_point(&f, &via, &k.i_lambda(&x).unwrap()));
        }
        assert!(matches!(kappa(&km, &f, &k.center().unwrap()), Err(Error::IndeterminateAt)));
    }

    #[test]
    fn segre_cubic_lines_and_branch_quartic() {
        let (k, mut rng) = cfg(3, 4);
        let (_, model) = fit_cubic_model(&k, &mut rng, Budget::unlimited()).unwrap();
        assert_eq!(model.fit.kernel_dims, [0, 0, 1]);
        assert_eq!(model.nodes.len(), 10);
        assert!(model.nodes_singular());
        assert_eq!(model.lines.len(), 6);
        let cp = &model.at_center;
        for l in &model.lines {
            assert!(cp.line_on_cubic(l));
        }
        let q = cp.branch_quartic();
        assert_eq!(q.d, 4);
        let kn = verify_kummer_nodes(cp, &model.nodes, &model.lines).unwrap();
        assert_eq!(kn.distinct, 16);
        let st = fiber_statistics(cp, 200, &mut rng);
        assert!(st.two_to_one());
        assert!(st.split > 50 && st.inert > 50);
    }
}
