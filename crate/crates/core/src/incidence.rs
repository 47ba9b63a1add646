//! Linear spans of embedded points, secant intersections, and the rational
//! curve `Γ` traced in the span of `N` by lines joining conjugate points.

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeField};
use crate::hypcurve::{CurvePoint, Embedding, NData};
use crate::linsolve::{normalize, span_meet, MatFp, ProjSubspace};
use crate::unipoly::UniPoly;

/// The span of a finite set of ambient points.
#[derive(Clone, Debug)]
pub struct SpanModel {
    pub points: Vec<Vec<Fe>>,
    pub space: ProjSubspace,
}

impl SpanModel {
    pub fn proj_dim(&self) -> i64 {
        self.space.proj_dim()
    }
}

pub fn span_of(f: &PrimeField, points: &[Vec<Fe>]) -> SpanModel {
    assert!(!points.is_empty());
    SpanModel { points: points.to_vec(), space: ProjSubspace::span(f, points[0].len(), points) }
}

/// Span of the embedded points of `N`.
pub fn n_span(emb: &Embedding, n: &NData) -> Result<SpanModel> {
    let pts: Vec<Vec<Fe>> = n.points.iter().map(|p| emb.point(p)).collect::<Result<_>>()?;
    Ok(span_of(&emb.curve.field, &pts))
}

/// `⟨L⟩ ∩ ⟨N⟩` for a reduced divisor `L` given by its points.
pub fn secant_meet(emb: &Embedding, l: &[CurvePoint], span: &SpanModel) -> Result<ProjSubspace> {
    let f = emb.curve.field;
    let pts: Vec<Vec<Fe>> = l.iter().map(|p| emb.point(p)).collect::<Result<_>>()?;
    let lspan = ProjSubspace::span(&f, emb.dim(), &pts);
    Ok(span_meet(&f, &lspan, &span.space))
}

/// The point where the line through `φ(P)` and `φ(i(P))` meets the span.
pub fn gamma_point(emb: &Embedding, p: &CurvePoint, span: &SpanModel) -> Result<Vec<Fe>> {
    let f = emb.curve.field;
    let a = emb.point(p)?;
    let b = emb.point(&emb.curve.involution(p))?;
    let line = ProjSubspace::span(&f, emb.dim(), &[a, b]);
    if line.dim() < 2 {
        return Err(Error::DegenerateConfiguration);
    }
    let meet = span_meet(&f, &line, &span.space);
    match meet.dim() {
        1 => Ok(normalize(&f, &meet.basis()[0]).unwrap()),
        2 => Err(Error::LineInSpan),
        _ => Err(Error::DegenerateConfiguration),
    }
}

/// Coordinates inside the span of `N` for an adapted embedding: the leading
/// `2g - 1` coordinates, provided the trailing `g` vanish.
pub fn w_coords(g: usize, pt: &[Fe]) -> Option<Vec<Fe>> {
    let w = 2 * g - 1;
    pt[w..].iter().all(|c| c.is_zero()).then(|| pt[..w].to_vec())
}

/// A random `Γ` point in `W` coordinates of an adapted embedding.
pub fn sample_gamma(emb: &Embedding, span: &SpanModel, rng: &mut FieldRng) -> Result<Vec<Fe>> {
    let g = emb.curve.g;
    for _ in 0..100 {
        let p = emb.curve.random_point(rng)?;
        if emb.curve.is_weierstrass(&p) {
            continue;
        }
        match gamma_point(emb, &p, span) {
            Ok(q) => return w_coords(g, &q).ok_or(Error::DegenerateConfiguration),
            Err(Error::IndeterminateAt) | Err(Error::DegenerateConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(100))
}

/// `Γ` as a polynomial map of `x`, in `W` coordinates of an adapted embedding.
///
/// On the line through `φ(x, y)` and `φ(x, -y)` the trailing coordinates are
/// `α a_s + β y b_s` times powers of `x`, where `(a_s + y b_s)` is the section
/// cutting out `N`. They vanish for `α = y b_s`, `β = -a_s`, which leaves
/// `b_s a_k - a_s b_k` in coordinate `k` after dividing by `y`.
pub fn gamma_polynomials(emb: &Embedding, n: &NData) -> Vec<UniPoly> {
    let f = emb.curve.field;
    let w = 2 * emb.curve.g - 1;
    let (a_s, b_s) = (&n.section.a, &n.section.b);
    let comps: Vec<UniPoly> = emb.basis[..w]
        .iter()
        .map(|h| b_s.mul(&f, &h.a).sub(&f, &a_s.mul(&f, &h.b)))
        .collect();
    let mut g = UniPoly::zero();
    for c in &comps {
        g = g.gcd(&f, c);
    }
    if g.is_zero() || g.degree() == Some(0) {
        return comps;
    }
    comps.iter().map(|c| c.div_exact(&f, &g)).collect()
}

/// Degree of a polynomial map `P^1 -> P^n` with coprime components.
pub fn polynomial_map_degree(comps: &[UniPoly]) -> Option<usize> {
    comps.iter().filter_map(|c| c.degree()).max()
}

/// Rational normal curve `x_i(t) = c_i / (t - a_i)` in normalized
/// coordinates `q = T·Q`.
///
/// `T` sends the first `n + 1` fitting points to the coordinate vertices and
/// the next one to `(1 : ... : 1)`, which then sits at `t = ∞`; the last
/// fitting point sits at `t = 0`.
#[derive(Clone, Debug)]
pub struct RncModel {
    pub field: PrimeField,
    pub transform: MatFp,
    pub inverse: MatFp,
    pub a: Vec<Fe>,
    pub c: Vec<Fe>,
}

impl RncModel {
    /// Projective dimension of the ambient space.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    /// Ambient point at parameter `t`.
    pub fn point(&self, t: Fe) -> Vec<Fe> {
        let f = &self.field;
        let q: Vec<Fe> = if let Some(i) = self.a.iter().position(|&ai| ai == t) {
            (0..self.a.len()).map(|j| if j == i { Fe::ONE } else { Fe::ZERO }).collect()
        } else {
            self.a.iter().zip(&self.c).map(|(&ai, &ci)| f.div(ci, f.sub(t, ai)).unwrap()).collect()
        };
        normalize(f, &self.inverse.mul_vec(f, &q)).unwrap()
    }

    pub fn point_at_infinity(&self) -> Vec<Fe> {
        normalize(&self.field, &self.inverse.mul_vec(&self.field, &self.c)).unwrap()
    }

    /// Pullback of the hyperplane `h·Q = 0`: `Σ h'_i c_i Π_{j≠i} (t - a_j)`.
    pub fn pullback(&self, h: &[Fe]) -> UniPoly {
        let f = &self.field;
        let hp = self.inverse.transpose().mul_vec(f, h);
        let mut out = UniPoly::zero();
        for i in 0..self.a.len() {
            let roots: Vec<Fe> = self.a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &a)| a).collect();
            out = out.add(f, &UniPoly::from_roots(f, &roots).scale(f, f.mul(hp[i], self.c[i])));
        }
        out
    }

    /// Intersection number with the hyperplane `h`: affine roots of the
    /// pullback plus the multiplicity at `t = ∞`.
    pub fn hyperplane_degree(&self, h: &[Fe]) -> Result<usize> {
        let p = self.pullback(h);
        let d = p.degree().ok_or(Error::DegenerateHyperplane)?;
        Ok(d + (self.n() - d))
    }

    /// Parameters `t ∈ F_p` (and `∞` as `None`) where the curve meets `h`.
    pub fn hyperplane_points(&self, h: &[Fe]) -> Result<Vec<Vec<Fe>>> {
        let f = &self.field;
        let p = self.pullback(h);
        let d = p.degree().ok_or(Error::DegenerateHyperplane)?;
        let mut roots = p.roots_in_field(f)?;
        roots.dedup();
        let mut pts: Vec<Vec<Fe>> = roots.iter().map(|&t| self.point(t)).collect();
        if d < self.n() {
            pts.push(self.point_at_infinity());
        }
        Ok(pts)
    }
}

/// Fits the rational normal curve through `n + 3` points of `P^n`.
pub fn rnc_through(f: &PrimeField, points: &[Vec<Fe>]) -> Result<RncModel> {
    let m = points[0].len();
    let n = m - 1;
    if points.len() < n + 3 {
        return Err(Error::DegenerateConfiguration);
    }
    let frame = MatFp::from_cols(&points[..m], m);
    let minv = frame.inverse(f).ok_or(Error::DegenerateConfiguration)?;
    let u = minv.mul_vec(f, &points[m]);
    if u.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateConfiguration);
    }
    let mut transform = minv.clone();
    for i in 0..m {
        let s = f.inv(u[i])?;
        for j in 0..m {
            transform.set(i, j, f.mul(s, transform.get(i, j)));
        }
    }
    let z = transform.mul_vec(f, &points[m + 1]);
    if z.iter().any(|x| x.is_zero()) {
        return Err(Error::DegenerateConfiguration);
    }
    // x_i(0) = -1 / a_i = z_i
    let a: Vec<Fe> = z.iter().map(|&zi| f.neg(f.inv(zi).unwrap())).collect();
    let mut sorted = a.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != a.len() {
        return Err(Error::DegenerateConfiguration);
    }
    let inverse = transform.inverse(f).ok_or(Error::DegenerateConfiguration)?;
    Ok(RncModel { field: *f, transform, inverse, a, c: vec![Fe::ONE; m] })
}

/// Whether `q` lies on the curve: either a coordinate vertex, or all
/// normalized coordinates nonzero with the points `(a_i, c_i / q_i)` collinear.
pub fn on_rnc(model: &RncModel, pt: &[Fe]) -> bool {
    let f = &model.field;
    let q = model.transform.mul_vec(f, pt);
    let nonzero = q.iter().filter(|x| !x.is_zero()).count();
    if nonzero == 0 {
        return false;
    }
    if nonzero == 1 {
        return true;
    }
    if nonzero < q.len() {
        return false;
    }
    let w: Vec<Fe> = q.iter().zip(&model.c).map(|(&qi, &ci)| f.div(ci, qi).unwrap()).collect();
    let a = &model.a;
    let slope = f.div(f.sub(w[1], w[0]), f.sub(a[1], a[0])).unwrap();
    (2..w.len()).all(|i| f.sub(w[i], w[0]) == f.mul(slope, f.sub(a[i], a[0])))
}

/// A random point of `Sec^k(C)`: a combination of `k + 1` embedded points.
pub fn sample_secant(emb: &Embedding, k: usize, rng: &mut FieldRng) -> Result<Vec<Fe>> {
    let f = emb.curve.field;
    let mut out = vec![Fe::ZERO; emb.dim()];
    for _ in 0..=k {
        let p = emb.curve.random_point(rng)?;
        let v = emb.point(&p)?;
        let c = rng.nonzero();
        for (o, x) in out.iter_mut().zip(&v) {
            *o = f.add(*o, f.mul(c, *x));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::PrimeContext;
    use crate::hypcurve::HypCurve;
    use crate::linsolve::same_point;

    fn setup(g: usize, seed: u64) -> (HypCurve, Embedding, NData, FieldRng) {
        let ctx = PrimeContext::new(1_000_003, seed).unwrap();
        let mut rng = ctx.rng(0);
        let c = HypCurve::random(&ctx, g, &mut rng).unwrap();
        let (d, n) = c.sample_generic_pair(&mut rng).unwrap();
        let emb = Embedding::adapted(&c, &d, &n).unwrap();
        (c, emb, n, rng)
    }

    #[test]
    fn conic_fit_agrees_with_monomial_kernel() {
        let c = PrimeContext::new(1_000_003, 3).unwrap();
        let f = c.field();
        let mut rng = c.rng(0);
        let mut pts = vec![
            vec![Fe::ONE, Fe::ZERO, Fe::ZERO],
            vec![Fe::ZERO, Fe::ONE, Fe::ZERO],
            vec![Fe::ZERO, Fe::ZERO, Fe::ONE],
            vec![Fe::ONE; 3],
        ];
        pts.push(rng.vector(3));
        let model = rnc_through(&f, &pts).unwrap();
        // oracle: the conic through the five points from a 6-column kernel
        let rows: Vec<Vec<Fe>> = pts
            .iter()
            .map(|p| {
                vec![
                    f.mul(p[0], p[0]),
                    f.mul(p[0], p[1]),
                    f.mul(p[0], p[2]),
                    f.mul(p[1], p[1]),
                    f.mul(p[1], p[2]),
                    f.mul(p[2], p[2]),
                ]
            })
            .collect();
        let ker = MatFp::from_rows(&rows, 6).kernel(&f);
        assert_eq!(ker.len(), 1);
        for p in &pts {
            assert!(on_rnc(&model, p));
        }
        for _ in 0..20 {
            let q = model.point(rng.elem());
            let v = [
                f.mul(q[0], q[0]),
                f.mul(q[0], q[1]),
                f.mul(q[0], q[2]),
                f.mul(q[1], q[1]),
                f.mul(q[1], q[2]),
                f.mul(q[2], q[2]),
            ];
            assert!(f.dot(&v, &ker[0]).is_zero());
            assert!(on_rnc(&model, &q));
        }
        assert!(!on_rnc(&model, &rng.vector(3)));
    }

    #[test]
    fn span_dimensions() {
        for g in [3, 4] {
            let (c, emb, n, mut rng) = setup(g, 20 + g as u64);
            let f = c.field;
            let span = n_span(&emb, &n).unwrap();
            assert_eq!(span.proj_dim(), 2 * g as i64 - 2);
            let p = emb.point(&c.random_point(&mut rng).unwrap()).unwrap();
            let q = emb.point(&c.random_point(&mut rng).unwrap()).unwrap();
            assert_eq!(span_of(&f, &[p, q]).proj_dim(), 1);
        }
    }

    #[test]
    fn gamma_points_and_polynomial_route() {
        for g in [3, 4] {
            let (c, emb, n, mut rng) = setup(g, 30 + g as u64);
            let f = c.field;
            let span = n_span(&emb, &n).unwrap();
            let polys = gamma_polynomials(&emb, &n);
            assert_eq!(polynomial_map_degree(&polys), Some(2 * g - 2));
            for _ in 0..10 {
                let p = c.random_point(&mut rng).unwrap();
                let gp = gamma_point(&emb, &p, &span).unwrap();
                let gq = gamma_point(&emb, &c.involution(&p), &span).unwrap();
                assert!(same_point(&f, &gp, &gq));
                assert!(span.space.contains(&f, &gp));
                let w = w_coords(g, &gp).unwrap();
                let x = p.x().unwrap();
                let via_poly: Vec<Fe> = polys.iter().map(|h| h.eval(&f, x)).collect();
                assert!(same_point(&f, &w, &via_poly));
            }
            for q in &n.points {
                let gp = gamma_point(&emb, q, &span).unwrap();
                assert!(same_point(&f, &gp, &emb.point(q).unwrap()));
            }
        }
    }

    #[test]
    fn gamma_is_a_rational_normal_curve() {
        let g = 3;
        let (c, emb, n, mut rng) = setup(g, 41);
        let f = c.field;
        let span = n_span(&emb, &n).unwrap();
        let pts: Vec<Vec<Fe>> = (0..2 * g + 1).map(|_| sample_gamma(&emb, &span, &mut rng).unwrap()).collect();
        let model = rnc_through(&f, &pts).unwrap();
        for _ in 0..20 {
            assert!(on_rnc(&model, &sample_gamma(&emb, &span, &mut rng).unwrap()));
        }
        for q in &n.points {
            assert!(on_rnc(&model, &w_coords(g, &emb.point(q).unwrap()).unwrap()));
        }
        let h = rng.vector(2 * g - 1);
        assert_eq!(model.hyperplane_degree(&h).unwrap(), 2 * g - 2);
    }
}
