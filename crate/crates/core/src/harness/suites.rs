use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng};
use crate::harness::{Recorder, Setup};
use crate::hypcurve::{CurvePoint, Divisor, Embedding};
use crate::incidence::{
    gamma_point, gamma_polynomials, n_span, on_rnc, polynomial_map_degree, rnc_through, sample_gamma, secant_meet,
    span_of, w_coords, RncModel, SpanModel,
};
use crate::kumar::{
    build_kumar, distinct_points, fiber_statistics, fit_cubic, fit_cubic_model, is_singular_point, kappa,
    verify_kummer_nodes, CubicAtPoint,
};
use crate::linsolve::{normalize, same_point, MatFp, ProjSubspace};
use crate::multipoly::HomogForm;
use crate::vanishsys::systems::{
    b_side_expected_dim, bertram_chain, bertram_direct, catalan, curve_spec, n1_system, n2_system, n3_system,
    secant_spec, secant_system, subsets, BertramRoute,
};
use crate::vanishsys::{fit_image_relations, member, FormSystem, SystemMeta};

const MEMBER_PROBES: usize = 200;

fn mutual(a: &FormSystem, b: &FormSystem) -> bool {
    a.dim() == b.dim() && a.contains_system(b) && b.contains_system(a)
}

fn pow2(g: usize) -> usize {
    1 << g
}

/// Counts basis forms failing `trials` membership probes; returns the count
/// and the summed miss probability of the passing ones.
fn probe_all(
    forms: &[HomogForm],
    spec: &mut crate::vanishsys::VanishingSpec<'_>,
    trials: usize,
    rng: &mut FieldRng,
) -> Result<(usize, f64)> {
    let mut failures = 0;
    let mut bound = 0.0;
    for h in forms {
        let (ok, b) = member(h, spec, trials, rng)?;
        if ok {
            bound += b;
        } else {
            failures += 1;
        }
    }
    Ok((failures, bound))
}

fn random_admissible_points(
    emb: &Embedding,
    k: usize,
    avoid: &[Fe],
    rng: &mut FieldRng,
) -> Result<Vec<CurvePoint>> {
    let c = &emb.curve;
    loop {
        let pts = c.random_points_distinct_x(k, avoid, rng)?;
        if pts.iter().all(|p| !c.is_weierstrass(p)) {
            return Ok(pts);
        }
    }
}

fn taken_x(s: &Setup) -> Vec<Fe> {
    s.n.points.iter().chain(s.d.support().iter()).filter_map(|p| p.x()).collect()
}

pub(crate) fn bertram(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let g = s.curve.g;
    let f = s.curve.field;
    let emb = &s.emb;
    rec.eq("embedding-dimension", "curve-embedding", 3 * g - 1, emb.dim(), 0.0);
    let h = rng.vector(emb.dim());
    rec.eq("embedding-degree", "curve-embedding", 4 * g as i64 - 2, emb.hyperplane_section_degree(&h)?, 0.0);

    let chain = bertram_chain(emb, rng, s.budget)?;
    let chain_bound: f64 = chain.metas.iter().map(|m| m.error_bound).sum();
    if g <= 5 {
        let b = bertram_direct(emb, rng, s.budget)?;
        rec.eq("projective-dimension", "theta-system-dimension", pow2(g) as i64 - 1, b.proj_dim(), b.meta.error_bound);
        rec.eq("prolongation-dimension", "theta-system-routes", pow2(g), chain.top_dim(), chain_bound);
        let explicit = FormSystem::span_of(f, g, emb.dim(), &chain.explicit_top(), SystemMeta::default());
        let agree = mutual(&b, &explicit);
        rec.holds(
            "routes-agree",
            "theta-system-routes",
            "direct and prolonged systems span the same forms",
            agree,
            format!("mutual membership {agree}"),
            b.meta.error_bound + chain_bound,
        );
        if g <= 4 {
            secant_equality(s, rec, rng, &b)?;
        }
        if g == 3 {
            quadric_hull(s, rec, rng, &b)?;
        }
    } else {
        rec.eq(
            "projective-dimension",
            "theta-system-dimension",
            pow2(g) as i64 - 1,
            chain.top_dim() as i64 - 1,
            chain_bound,
        );
    }
    let (_, bs) = crate::vanishsys::systems::b_side_system(&s.curve, &s.d, rng, s.budget)?;
    rec.eq(
        "complementary-projective-dimension",
        "complementary-system-dimension",
        b_side_expected_dim(g) as i64 - 1,
        bs.proj_dim(),
        bs.meta.error_bound,
    );
    Ok(())
}

fn secant_equality(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng, b: &FormSystem) -> Result<()> {
    let g = s.curve.g;
    let f = s.curve.field;
    let emb = &s.emb;
    let (fail, bound) = probe_all(&b.basis, &mut secant_spec(emb, g - 2), MEMBER_PROBES, rng)?;
    rec.eq("theta-forms-vanish-on-secant-planes", "secant-system-equality", 0, fail, bound);
    let sec = secant_system(emb, rng, s.budget)?;
    rec.eq("secant-system-dimension", "secant-system-equality", b.dim(), sec.dim(), sec.meta.error_bound);
    let (fail, bound) = probe_all(&sec.basis, &mut curve_spec(emb, g - 1), MEMBER_PROBES, rng)?;
    rec.eq("secant-forms-vanish-to-order-on-curve", "secant-system-equality", 0, fail, bound);
    let same = mutual(b, &sec);
    rec.holds(
        "secant-system-equals-theta-system",
        "secant-system-equality",
        "equal spans",
        same,
        format!("mutual membership {same}"),
        b.meta.error_bound + sec.meta.error_bound,
    );
    let control = HomogForm::random(f, g, emb.dim(), rng);
    let (passes, _) = member(&control, &mut secant_spec(emb, g - 2), MEMBER_PROBES, rng)?;
    rec.eq("random-form-rejected", "secant-system-equality", false, passes, 0.0);
    Ok(())
}

fn quadric_hull(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng, b: &FormSystem) -> Result<()> {
    let f = s.curve.field;
    let m = s.emb.dim();
    let image = |r: &mut FieldRng| loop {
        if let Some(y) = normalize(&f, &b.eval(&r.vector(m))) {
            return Ok(y);
        }
    };
    let lin = fit_image_relations(&f, b.dim(), 1, image, 3, rng, s.budget)?;
    let quad = fit_image_relations(&f, b.dim(), 2, image, 3, rng, s.budget)?;
    rec.eq(
        "image-relations-degree-1-2",
        "quadric-hull",
        (0, 1),
        (lin.dim(), quad.dim()),
        lin.meta.error_bound + quad.meta.error_bound,
    );
    Ok(())
}

/// Divisors of degree `g - 1` containing `pairs` conjugate pairs.
fn divisor_with_pairs(s: &Setup, pairs: usize, rng: &mut FieldRng) -> Result<Vec<CurvePoint>> {
    let g = s.curve.g;
    let singles = g - 1 - 2 * pairs;
    let pts = random_admissible_points(&s.emb, pairs + singles, &taken_x(s), rng)?;
    let mut out = Vec::with_capacity(g - 1);
    for (i, p) in pts.into_iter().enumerate() {
        out.push(p);
        if i < pairs {
            out.push(s.curve.involution(&p));
        }
    }
    Ok(out)
}

pub(crate) fn incidence(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let g = s.curve.g;
    let f = s.curve.field;
    let emb = &s.emb;
    let span = n_span(emb, &s.n)?;
    rec.eq("n-span-dimension", "span-dimension", 2 * g as i64 - 2, span.proj_dim(), 0.0);

    // Hyperplanes through N and D form L(K + 2D - N - D).
    let mut pts = span.points.clone();
    for p in s.d.support() {
        pts.push(emb.point(&p)?);
    }
    let residual = s.curve.canonical_divisor().add(&s.d).sub(&s.n.n);
    let h0 = s.curve.h0(&residual)?;
    rec.eq(
        "n-and-d-span-dimension",
        "span-dimension",
        (3 * g - 2 - h0) as i64,
        span_of(&f, &pts).proj_dim(),
        0.0,
    );

    const TRIALS: usize = 50;
    let max_pairs = if g >= 5 { 2 } else { 1 };
    for pairs in 0..=max_pairs {
        let expected_h0 = pairs + 1;
        let mut agree = 0;
        for _ in 0..TRIALS {
            let l = divisor_with_pairs(s, pairs, rng)?;
            let h0 = s.curve.h0(&Divisor::from_points(&l))?;
            let meet = secant_meet(emb, &l, &span)?;
            if h0 == expected_h0 && meet.proj_dim() == h0 as i64 - 2 {
                agree += 1;
            }
        }
        let name = format!("meet-dimension-h0-{expected_h0}");
        rec.eq(&name, "secant-span-meet", TRIALS, agree, 0.0);
    }
    Ok(())
}

fn fit_gamma(s: &Setup, span: &SpanModel, rng: &mut FieldRng) -> Result<RncModel> {
    let f = s.curve.field;
    let g = s.curve.g;
    for _ in 0..20 {
        let pts: Vec<Vec<Fe>> = (0..2 * g + 1).map(|_| sample_gamma(&s.emb, span, rng)).collect::<Result<_>>()?;
        match rnc_through(&f, &pts) {
            Ok(m) => return Ok(m),
            Err(Error::DegenerateConfiguration) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SamplingExhausted(20))
}

pub(crate) fn gamma(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let g = s.curve.g;
    let f = s.curve.field;
    let emb = &s.emb;
    let span = n_span(emb, &s.n)?;
    let w = 2 * g - 1;

    let mut invariant = 0;
    for _ in 0..10 {
        let p = random_admissible_points(emb, 1, &taken_x(s), rng)?[0];
        let a = gamma_point(emb, &p, &span)?;
        let b = gamma_point(emb, &s.curve.involution(&p), &span)?;
        if same_point(&f, &a, &b) && span.space.contains(&f, &a) {
            invariant += 1;
        }
    }
    rec.eq("conjugate-points-share-gamma-point", "gamma-point", 10, invariant, 0.0);
    let n_fixed = s
        .n
        .points
        .iter()
        .filter(|q| {
            gamma_point(emb, q, &span).is_ok_and(|v| emb.point(q).is_ok_and(|e| same_point(&f, &v, &e)))
        })
        .count();
    rec.eq("gamma-point-of-n-is-itself", "gamma-point", 2 * g, n_fixed, 0.0);

    let model = fit_gamma(s, &span, rng)?;
    let fresh = (0..40)
        .map(|_| sample_gamma(emb, &span, rng))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .filter(|q| on_rnc(&model, q))
        .count();
    let miss = (2 * g) as f64 / f.modulus() as f64;
    rec.eq("fresh-gamma-samples-on-model", "gamma-rational-normal-curve", 40, fresh, miss.powi(40));
    let n_on = s
        .n
        .points
        .iter()
        .map(|q| emb.point(q).map(|v| w_coords(g, &v)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|q| q.as_ref().is_some_and(|q| on_rnc(&model, q)))
        .count();
    rec.eq("n-points-on-model", "gamma-rational-normal-curve", 2 * g, n_on, 0.0);

    let other = fit_gamma(s, &span, rng)?;
    let mut agree = 0;
    for i in 0..100 {
        let q = if i % 2 == 0 { sample_gamma(emb, &span, rng)? } else { rng.vector(w) };
        if on_rnc(&model, &q) == on_rnc(&other, &q) {
            agree += 1;
        }
    }
    rec.eq("independent-fits-agree", "gamma-rational-normal-curve", 100, agree, miss.powi(50));
    let stray = (0..20).filter(|_| on_rnc(&model, &rng.vector(w))).count();
    rec.eq("random-points-off-model", "gamma-rational-normal-curve", 0, stray, 0.0);

    let h = rng.vector(w);
    rec.eq("model-hyperplane-degree", "gamma-degree", 2 * g - 2, model.hyperplane_degree(&h)?, 0.0);
    let polys = gamma_polynomials(emb, &s.n);
    rec.eq("parametrization-degree", "gamma-degree", Some(2 * g - 2), polynomial_map_degree(&polys), 0.0);

    // A hyperplane through 2g - 2 points of N meets the curve exactly there.
    let npts: Vec<Vec<Fe>> = s
        .n
        .points
        .iter()
        .map(|q| emb.point(q).map(|v| w_coords(g, &v).expect("point of N in its span")))
        .collect::<Result<_>>()?;
    let chosen = &npts[..2 * g - 2];
    let ker = MatFp::from_rows(chosen, w).kernel(&f);
    let recovered = if ker.len() == 1 {
        let hits = model.hyperplane_points(&ker[0])?;
        let matched = hits.iter().all(|p| chosen.iter().any(|q| same_point(&f, p, q)));
        let covered = chosen.iter().all(|q| hits.iter().any(|p| same_point(&f, p, q)));
        (hits.len(), matched && covered)
    } else {
        (0, false)
    };
    rec.eq("hyperplane-through-n-points", "gamma-degree", (2 * g - 2, true), recovered, 0.0);
    Ok(())
}

struct Nested {
    n1: FormSystem,
    n2: FormSystem,
    n3: FormSystem,
}

fn nested_parts(s: &Setup, route: BertramRoute, rng: &mut FieldRng) -> Result<(SpanModel, Nested)> {
    let span = n_span(&s.emb, &s.n)?;
    let n3 = n3_system(&s.emb, &s.n, rng, s.budget)?;
    let n2 = n2_system(&s.emb, &span, &n3, rng, s.budget)?;
    let n1 = n1_system(&s.emb, route, rng, s.budget)?;
    Ok((span, Nested { n1, n2, n3 }))
}

fn record_inclusions(rec: &mut Recorder, ns: &Nested) -> f64 {
    let bound = ns.n1.meta.error_bound + ns.n2.meta.error_bound + ns.n3.meta.error_bound;
    let ok = ns.n3.contains_system(&ns.n2) && ns.n2.contains_system(&ns.n1);
    rec.holds(
        "inclusions",
        "nested-inclusions",
        "N1 in N2 in N3",
        ok,
        format!("dims ({}, {}, {}), inclusions {ok}", ns.n1.dim(), ns.n2.dim(), ns.n3.dim()),
        bound,
    );
    bound
}

pub(crate) fn nested(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let g = s.curve.g;
    let f = s.curve.field;
    let route = if g <= 4 { BertramRoute::Direct } else { BertramRoute::Prolongation };
    let (_, ns) = nested_parts(s, route, rng)?;
    let bound = record_inclusions(rec, &ns);
    if g == 3 {
        rec.eq("dimensions", "nested-inclusions", (4, 4, 5), (ns.n1.dim(), ns.n2.dim(), ns.n3.dim()), bound);
    }
    rec.eq("n3-dimension", "nested-inclusions", catalan(g), ns.n3.dim(), ns.n3.meta.error_bound);
    let same = mutual(&ns.n1, &ns.n2);
    rec.holds(
        "n1-equals-n2",
        "nested-equality",
        "equal dimension and mutual membership",
        same,
        format!("dims ({}, {}), mutual membership {same}", ns.n1.dim(), ns.n2.dim()),
        bound,
    );
    let k = build_kumar(&f, g, rng, s.budget)?;
    rec.eq("n3-matches-omega", "kumar-composition", k.omega.dim(), ns.n3.dim(), bound);
    rec.eq("n2-matches-lambda", "kumar-composition", k.lambda.dim(), ns.n2.dim(), bound);
    Ok(())
}

fn record_cubic_picture(
    rec: &mut Recorder,
    cp: &CubicAtPoint,
    nodes: &[Vec<Fe>],
    lines: &[Vec<Fe>],
    rng: &mut FieldRng,
) -> Result<()> {
    let f = cp.field;
    rec.eq("lines-through-center", "projection-double-cover", 6, lines.len(), 0.0);
    let on = lines.iter().filter(|l| cp.line_on_cubic(l)).count();
    let mut points_on = 0;
    for l in lines {
        let u = cp.direction(l);
        for _ in 0..20 {
            let t = rng.elem();
            let pt: Vec<Fe> = cp.w.iter().zip(&u).map(|(&a, &b)| f.add(a, f.mul(t, b))).collect();
            if cp.cubic.eval(&pt).is_zero() {
                points_on += 1;
            }
        }
    }
    rec.eq("lines-lie-on-cubic", "projection-double-cover", (lines.len(), 20 * lines.len()), (on, points_on), 0.0);
    let q = cp.branch_quartic();
    rec.eq("branch-quartic-degree", "branch-locus-nodes", (4, false), (q.d, q.is_zero()), 0.0);
    match verify_kummer_nodes(cp, nodes, lines) {
        Ok(kn) => {
            rec.eq("branch-quartic-nodes", "branch-locus-nodes", (16, true), (kn.distinct, kn.all_singular), 0.0);
        }
        Err(e) => rec.error("branch-quartic-nodes", "branch-locus-nodes", "(16, true)", &e),
    }
    let st = fiber_statistics(cp, 200, rng);
    rec.holds(
        "fibers-have-two-points",
        "projection-double-cover",
        "fiber size 2 over the quadratic extension off the branch locus",
        st.two_to_one(),
        format!(
            "split {}, inert {}, ramified {}, degenerate {}, off-cubic {}",
            st.split, st.inert, st.ramified, st.degenerate, st.off_cubic
        ),
        0.0,
    );
    Ok(())
}

pub(crate) fn kumar_g3(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let f = s.curve.field;
    let k = build_kumar(&f, 3, rng, s.budget)?;
    rec.eq(
        "system-dimensions",
        "kumar-systems",
        (5, 4, true),
        (k.omega.dim(), k.lambda.dim(), k.omega.contains_system(&k.lambda)),
        0.0,
    );
    let imgs: Vec<Vec<Fe>> = (0..3)
        .map(|_| k.i_omega(&[Fe::ONE, rng.nonzero(), Fe::ZERO, Fe::ZERO]))
        .collect::<Result<_>>()?;
    let contracted = imgs.iter().all(|p| same_point(&f, p, &imgs[0]));
    rec.eq("line-through-base-points-contracted", "kumar-systems", true, contracted, 0.0);
    let base_undefined = k.base_points.iter().all(|e| matches!(k.i_omega(e), Err(Error::IndeterminateAt)));
    rec.eq("base-points-indeterminate", "kumar-systems", true, base_undefined, 0.0);

    let (k, model) = fit_cubic_model(&k, rng, s.budget)?;
    rec.eq("cubic-relations-degree-1-2-3", "segre-cubic", [0, 0, 1], model.fit.kernel_dims, model.fit.error_bound);
    rec.eq("nodes", "segre-cubic", (10, true), (model.nodes.len(), model.nodes_singular()), 0.0);
    let w = k.center()?;
    rec.eq("center-on-cubic", "segre-cubic", true, model.fit.cubic.eval(&w).is_zero(), 0.0);
    let mut on = 0;
    for _ in 0..100 {
        if let Ok(y) = k.i_omega(&rng.vector(4)) {
            if model.fit.cubic.eval(&y).is_zero() {
                on += 1;
            }
        }
    }
    rec.eq("images-on-cubic", "segre-cubic", 100, on, 0.0);

    let km = k.kappa_matrix()?;
    let mut compatible = 0;
    for _ in 0..100 {
        let x = rng.vector(4);
        if let (Ok(a), Ok(b)) = (kappa(&km, &f, &k.omega.eval(&x)), k.i_lambda(&x)) {
            if same_point(&f, &a, &b) {
                compatible += 1;
            }
        }
    }
    rec.eq("kappa-after-omega-is-lambda", "kumar-systems", 100, compatible, 0.0);
    let at_center = matches!(kappa(&km, &f, &w), Err(Error::IndeterminateAt));
    rec.eq("kappa-undefined-at-center", "kumar-systems", true, at_center, 0.0);

    record_cubic_picture(rec, &model.at_center, &model.nodes, &model.lines, rng)
}

pub(crate) fn crosscheck_g3(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let f = s.curve.field;
    let g = 3;
    let (span, ns) = nested_parts(s, BertramRoute::Direct, rng)?;
    let n3 = &ns.n3;
    let hn = |x: &[Fe]| normalize(&f, &n3.eval(x)).ok_or(Error::IndeterminateAt);
    let fit = {
        let image = |r: &mut FieldRng| loop {
            if let Ok(y) = hn(&r.vector(2 * g - 1)) {
                return Ok(y);
            }
        };
        fit_cubic(&f, image, 3, rng, s.budget)?
    };
    rec.eq("image-cubic-relations-degree-1-2-3", "segre-cubic", [0, 0, 1], fit.kernel_dims, fit.error_bound);

    let p = hn(&sample_gamma(&s.emb, &span, rng)?)?;
    let mut same = 0;
    for _ in 0..20 {
        if same_point(&f, &hn(&sample_gamma(&s.emb, &span, rng)?)?, &p) {
            same += 1;
        }
    }
    rec.eq("gamma-contracted-to-point", "kumar-composition", 20, same, 0.0);
    rec.eq("contracted-point-on-cubic", "kumar-composition", true, fit.cubic.eval(&p).is_zero(), 0.0);

    // Forms of N3 through the point: hyperplanes through P pulled back.
    let through = ProjSubspace::span(&f, n3.dim(), &[p.clone()]).annihilator(&f);
    let forms: Vec<HomogForm> = through.basis().iter().map(|c| HomogForm::combination(&n3.basis, c)).collect();
    let composed = FormSystem::span_of(f, g, 2 * g - 1, &forms, SystemMeta::default());
    let bound = ns.n1.meta.error_bound + ns.n2.meta.error_bound + n3.meta.error_bound;
    rec.eq(
        "composed-system-equals-n2-and-n1",
        "kumar-composition",
        (4, true, true),
        (composed.dim(), mutual(&composed, &ns.n2), mutual(&composed, &ns.n1)),
        bound,
    );

    // Planes through three points of N are contracted; complementary planes
    // share their image.
    let npts: Vec<Vec<Fe>> = s
        .n
        .points
        .iter()
        .map(|q| s.emb.point(q).map(|v| w_coords(g, &v).expect("point of N in its span")))
        .collect::<Result<_>>()?;
    let plane_point = |sub: &[usize], r: &mut FieldRng| -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; 2 * g - 1];
        for &i in sub {
            let c = r.nonzero();
            for (o, x) in out.iter_mut().zip(&npts[i]) {
                *o = f.add(*o, f.mul(c, *x));
            }
        }
        out
    };
    let triples = subsets(2 * g, 3);
    let mut contracted = 0;
    let mut images = Vec::new();
    for t in &triples {
        let a = hn(&plane_point(t, rng))?;
        let b = hn(&plane_point(t, rng))?;
        if same_point(&f, &a, &b) {
            contracted += 1;
        }
        images.push(a);
    }
    rec.eq("n-planes-contracted", "segre-cubic", triples.len(), contracted, 0.0);
    let mut paired = 0;
    for (i, t) in triples.iter().enumerate() {
        let comp: Vec<usize> = (0..2 * g).filter(|j| !t.contains(j)).collect();
        let j = triples.iter().position(|u| *u == comp).unwrap();
        if same_point(&f, &images[i], &images[j]) {
            paired += 1;
        }
    }
    let nodes = distinct_points(&f, &images);
    let singular = nodes.iter().all(|n| is_singular_point(&fit.cubic, n));
    rec.eq(
        "nodes-from-n-planes",
        "segre-cubic",
        (triples.len(), 10, true),
        (paired, nodes.len(), singular),
        0.0,
    );

    match CubicAtPoint::new(&fit.cubic, &p, rng).and_then(|cp| cp.lines_through(rng).map(|l| (cp, l))) {
        Ok((cp, lines)) => record_cubic_picture(rec, &cp, &nodes, &lines, rng)?,
        Err(e) => rec.error("lines-through-center", "projection-double-cover", "6", &e),
    }
    Ok(())
}

pub(crate) fn further_locus_g6(s: &Setup, rec: &mut Recorder, rng: &mut FieldRng) -> Result<()> {
    let f = s.curve.field;
    let g = s.curve.g;
    let (span, ns) = nested_parts(s, BertramRoute::Prolongation, rng)?;
    let bound = record_inclusions(rec, &ns);
    rec.eq("n3-dimension", "nested-inclusions", catalan(g), ns.n3.dim(), ns.n3.meta.error_bound);

    let mut n1_fail = 0;
    let mut n2_fail = 0;
    const SAMPLES: usize = 100;
    for _ in 0..SAMPLES {
        let a = sample_gamma(&s.emb, &span, rng)?;
        let b = sample_gamma(&s.emb, &span, rng)?;
        let (c1, c2) = (rng.nonzero(), rng.nonzero());
        let q: Vec<Fe> = a.iter().zip(&b).map(|(&x, &y)| f.add(f.mul(c1, x), f.mul(c2, y))).collect();
        if ns.n1.basis.iter().any(|h| !h.eval(&q).is_zero()) {
            n1_fail += 1;
        }
        if ns.n2.basis.iter().any(|h| !h.eval(&q).is_zero()) {
            n2_fail += 1;
        }
    }
    // A form not vanishing on the secant variety of Γ is nonzero at a random
    // point of it except with probability at most (degree in the parameters) / p.
    let miss = ((2 * g - 2) * g * 2) as f64 / f.modulus() as f64;
    let vb = miss.powi(SAMPLES as i32);
    rec.eq("n1-vanishes-on-gamma-secants", "further-base-locus", 0, n1_fail, vb);
    rec.eq("n2-vanishes-on-gamma-secants", "further-base-locus", 0, n2_fail, vb);
    let gap = ns.n2.dim() as i64 - ns.n1.dim() as i64;
    rec.holds(
        "n1-strictly-inside-n2",
        "further-base-locus",
        "dim N2 - dim N1 >= 1",
        gap >= 1 && ns.n2.contains_system(&ns.n1),
        format!("dims ({}, {}), gap {gap}", ns.n1.dim(), ns.n2.dim()),
        bound,
    );
    Ok(())
}
