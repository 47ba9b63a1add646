//! Point sets for drawing `Γ` together with the lines that trace it.
//!
//! Everything lives in the span of `N`, identified with `P^{2g-2}` through the
//! adapted embedding. Curve points are projected there from the trailing
//! coordinates, which fixes the span pointwise, so each projected line still
//! passes through its `Γ` point. Points are written in the affine chart
//! `x_k = 1` for a chart index `k` nonzero on every exported point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::{Fe, FieldRng, PrimeContext, PrimeField};
use crate::harness::Setup;
use crate::hypcurve::{CurveJson, CurvePoint};
use crate::incidence::{gamma_point, n_span, on_rnc, rnc_through, sample_gamma, w_coords, RncModel};
use crate::linsolve::{MatFp, ProjSubspace};
use crate::vanishsys::Budget;

pub const FIGURE_SCHEMA: &str = "theta-lab/figure/v1";

const CURVE_SAMPLES: usize = 60;
const GAMMA_SAMPLES: usize = 60;
const LINES: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureLine {
    /// `(x, y)` of the curve point and of its conjugate.
    pub p: [String; 2],
    pub ip: [String; 2],
    pub p_image: Vec<String>,
    pub ip_image: Vec<String>,
    pub gamma: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RncJson {
    pub a: Vec<String>,
    pub c: Vec<String>,
    pub transform: Vec<Vec<String>>,
    pub inverse: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FigureData {
    pub schema: String,
    pub prime: String,
    pub seed: String,
    pub genus: usize,
    pub curve: CurveJson,
    /// Projective dimension of the drawing space.
    pub ambient_dim: usize,
    pub chart: usize,
    pub curve_samples: Vec<Vec<String>>,
    pub n_points: Vec<Vec<String>>,
    pub gamma_samples: Vec<Vec<String>>,
    pub lines: Vec<FigureLine>,
    pub rnc: RncJson,
}

impl FigureData {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("figure serializes");
        s.push('\n');
        s
    }
}

fn strs(v: &[Fe]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn parse_elem(f: &PrimeField, s: &str) -> Result<Fe> {
    let v: u64 = s.parse().map_err(|_| Error::Schema(format!("not a decimal field element: {s:?}")))?;
    if v >= f.modulus() as u64 {
        return Err(Error::Schema(format!("element {v} out of range")));
    }
    Ok(f.elem(v))
}

fn parse_vec(f: &PrimeField, v: &[String]) -> Result<Vec<Fe>> {
    v.iter().map(|s| parse_elem(f, s)).collect()
}

fn parse_mat(f: &PrimeField, rows: &[Vec<String>]) -> Result<MatFp> {
    let rows: Vec<Vec<Fe>> = rows.iter().map(|r| parse_vec(f, r)).collect::<Result<_>>()?;
    let cols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Schema("ragged matrix".into()));
    }
    Ok(MatFp::from_rows(&rows, cols))
}

fn affine(f: &PrimeField, chart: usize, v: &[Fe]) -> Vec<String> {
    let s = f.inv(v[chart]).expect("chart coordinate is nonzero");
    v.iter().enumerate().filter(|&(i, _)| i != chart).map(|(_, &x)| f.mul(x, s).to_string()).collect()
}

fn projective(f: &PrimeField, chart: usize, v: &[String]) -> Result<Vec<Fe>> {
    let mut out = parse_vec(f, v)?;
    if chart > out.len() {
        return Err(Error::Schema("chart index out of range".into()));
    }
    out.insert(chart, Fe::ONE);
    Ok(out)
}

fn point_xy(p: &CurvePoint) -> [String; 2] {
    match p {
        CurvePoint::Affine { x, y } => [x.to_string(), y.to_string()],
        CurvePoint::InfPlus => ["inf".into(), "+".into()],
        CurvePoint::InfMinus => ["inf".into(), "-".into()],
    }
}

fn mat_strs(m: &MatFp) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| strs(r)).collect()
}

/// Samples the figure for genus `g` over `F_p`.
pub fn export_figure_data(g: usize, p: u64, seed: u64) -> Result<FigureData> {
    let ctx = PrimeContext::new(p, seed)?;
    let setup = Setup::new(ctx, g, Budget::unlimited())?;
    let f = setup.curve.field;
    let emb = &setup.emb;
    let w = 2 * g - 1;
    let span = n_span(emb, &setup.n)?;
    let mut rng: FieldRng = setup.ctx.rng(100);

    let n_pts: Vec<Vec<Fe>> = setup
        .n
        .points
        .iter()
        .map(|q| emb.point(q).map(|v| v[..w].to_vec()))
        .collect::<Result<_>>()?;
    let mut curve_pts = Vec::new();
    while curve_pts.len() < CURVE_SAMPLES {
        let q = setup.curve.random_point(&mut rng)?;
        let v = emb.point(&q)?[..w].to_vec();
        if v.iter().any(|x| !x.is_zero()) {
            curve_pts.push(v);
        }
    }
    let gamma_pts: Vec<Vec<Fe>> = (0..GAMMA_SAMPLES).map(|_| sample_gamma(emb, &span, &mut rng)).collect::<Result<_>>()?;
    let mut lines = Vec::new();
    while lines.len() < LINES {
        let q = setup.curve.random_point(&mut rng)?;
        if setup.curve.is_weierstrass(&q) {
            continue;
        }
        let iq = setup.curve.involution(&q);
        let gp = match gamma_point(emb, &q, &span) {
            Ok(v) => v,
            Err(Error::LineInSpan) | Err(Error::DegenerateConfiguration) => continue,
            Err(e) => return Err(e),
        };
        let a = emb.point(&q)?[..w].to_vec();
        let b = emb.point(&iq)?[..w].to_vec();
        let gw = w_coords(g, &gp).ok_or(Error::DegenerateConfiguration)?;
        lines.push((q, iq, a, b, gw));
    }
    let model = loop {
        let fit: Vec<Vec<Fe>> = (0..2 * g + 1).map(|_| sample_gamma(emb, &span, &mut rng)).collect::<Result<_>>()?;
        match rnc_through(&f, &fit) {
            Ok(m) => break m,
            Err(Error::DegenerateConfiguration) => continue,
            Err(e) => return Err(e),
        }
    };

    let all: Vec<&Vec<Fe>> = curve_pts
        .iter()
        .chain(&n_pts)
        .chain(&gamma_pts)
        .chain(lines.iter().flat_map(|(_, _, a, b, c)| [a, b, c]))
        .collect();
    let chart = (0..w)
        .find(|&k| all.iter().all(|v| !v[k].is_zero()))
        .ok_or(Error::SamplingExhausted(w))?;
    let aff = |v: &Vec<Fe>| affine(&f, chart, v);
    Ok(FigureData {
        schema: FIGURE_SCHEMA.into(),
        prime: p.to_string(),
        seed: seed.to_string(),
        genus: g,
        curve: setup.curve.to_json(),
        ambient_dim: w - 1,
        chart,
        curve_samples: curve_pts.iter().map(aff).collect(),
        n_points: n_pts.iter().map(aff).collect(),
        gamma_samples: gamma_pts.iter().map(aff).collect(),
        lines: lines
            .iter()
            .map(|(q, iq, a, b, c)| FigureLine {
                p: point_xy(q),
                ip: point_xy(iq),
                p_image: aff(a),
                ip_image: aff(b),
                gamma: aff(c),
            })
            .collect(),
        rnc: RncJson {
            a: strs(&model.a),
            c: strs(&model.c),
            transform: mat_strs(&model.transform),
            inverse: mat_strs(&model.inverse),
        },
    })
}

/// Parses a figure document and checks that `Γ` samples and points of `N`
/// lie on the exported model and that every line is a line.
pub fn validate_figure(json: &str) -> Result<FigureData> {
    let d: FigureData = serde_json::from_str(json)?;
    let bad = |m: &str| Err(Error::Schema(m.to_string()));
    if d.schema != FIGURE_SCHEMA {
        return bad("unknown figure schema");
    }
    let p: u64 = d.prime.parse().map_err(|_| Error::Schema("prime".into()))?;
    let f = PrimeField::new(p)?;
    let w = d.ambient_dim + 1;
    let proj = |v: &[String]| -> Result<Vec<Fe>> {
        if v.len() != d.ambient_dim {
            return Err(Error::Schema("wrong coordinate count".into()));
        }
        projective(&f, d.chart, v)
    };
    let model = RncModel {
        field: f,
        transform: parse_mat(&f, &d.rnc.transform)?,
        inverse: parse_mat(&f, &d.rnc.inverse)?,
        a: parse_vec(&f, &d.rnc.a)?,
        c: parse_vec(&f, &d.rnc.c)?,
    };
    if model.a.len() != w || model.c.len() != w {
        return bad("model dimension");
    }
    for v in d.gamma_samples.iter().chain(&d.n_points) {
        if !on_rnc(&model, &proj(v)?) {
            return bad("point off the rational normal curve");
        }
    }
    for v in &d.curve_samples {
        proj(v)?;
    }
    for l in &d.lines {
        let pts = [proj(&l.p_image)?, proj(&l.ip_image)?, proj(&l.gamma)?];
        if ProjSubspace::span(&f, w, &pts).dim() != 2 {
            return bad("line points are not collinear");
        }
        if !on_rnc(&model, &pts[2]) {
            return bad("line gamma point off the curve");
        }
    }
    Ok(d)
}
