//! Verification suites, their JSON reports, and figure data export.

pub mod figure;
mod suites;

use std::fmt::Debug;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactfield::PrimeContext;
use crate::hypcurve::{CurveJson, Divisor, Embedding, HypCurve, NData};
use crate::vanishsys::Budget;

pub const REPORT_SCHEMA: &str = "theta-lab/report/v1";

/// Labels a check may carry in its `anchor` field.
pub const ANCHORS: &[&str] = &[
    "curve-embedding",
    "theta-system-dimension",
    "theta-system-routes",
    "secant-system-equality",
    "quadric-hull",
    "complementary-system-dimension",
    "span-dimension",
    "secant-span-meet",
    "gamma-point",
    "gamma-rational-normal-curve",
    "gamma-degree",
    "nested-inclusions",
    "nested-equality",
    "kumar-systems",
    "segre-cubic",
    "projection-double-cover",
    "branch-locus-nodes",
    "kumar-composition",
    "further-base-locus",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteName {
    Bertram,
    Incidence,
    Gamma,
    Nested,
    KumarG3,
    CrosscheckG3,
    FurtherLocusG6,
    All,
}

impl SuiteName {
    pub const ALL: [SuiteName; 7] = [
        SuiteName::Bertram,
        SuiteName::Incidence,
        SuiteName::Gamma,
        SuiteName::Nested,
        SuiteName::KumarG3,
        SuiteName::CrosscheckG3,
        SuiteName::FurtherLocusG6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Bertram => "bertram",
            SuiteName::Incidence => "incidence",
            SuiteName::Gamma => "gamma",
            SuiteName::Nested => "nested",
            SuiteName::KumarG3 => "kumar-g3",
            SuiteName::CrosscheckG3 => "crosscheck-g3",
            SuiteName::FurtherLocusG6 => "further-locus-g6",
            SuiteName::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<SuiteName> {
        Self::ALL.into_iter().chain([SuiteName::All]).find(|n| n.as_str() == s)
    }

    /// Genera the suite runs at.
    pub fn supports(self, g: usize) -> bool {
        match self {
            SuiteName::Bertram | SuiteName::Incidence | SuiteName::Gamma => (3..=6).contains(&g),
            SuiteName::Nested => (3..=5).contains(&g),
            SuiteName::KumarG3 | SuiteName::CrosscheckG3 => g == 3,
            SuiteName::FurtherLocusG6 => g == 6,
            SuiteName::All => (3..=6).contains(&g),
        }
    }

    /// Suites that take more than a few minutes at this genus.
    pub fn is_slow(self, g: usize) -> bool {
        match self {
            SuiteName::Bertram => g >= 5,
            SuiteName::FurtherLocusG6 => true,
            SuiteName::All => g >= 5,
            _ => false,
        }
    }

    /// RNG stream of the suite; stream 0 is reserved for the curve.
    fn stream(self) -> u64 {
        1 + Self::ALL.iter().position(|&s| s == self).unwrap_or(7) as u64
    }
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    /// Upper bound on the probability that randomized sampling produced a
    /// wrong `actual`.
    pub probabilistic_error_bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub slow: bool,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub unstabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub prime: String,
    pub seed: String,
    pub genus: usize,
    pub suite: String,
    pub curve: CurveJson,
    pub suites: Vec<SuiteReport>,
    pub overall_pass: bool,
    /// Union bound over all checks.
    pub total_error_bound: f64,
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &CheckRecord> {
        self.suites.iter().flat_map(|s| s.checks.iter())
    }

    pub fn find(&self, name: &str) -> Option<&CheckRecord> {
        self.checks().find(|c| c.name == name)
    }

    pub fn unstabilized(&self) -> bool {
        self.suites.iter().any(|s| s.unstabilized)
    }

    /// 0 pass, 1 fail, 2 a system failed to stabilize within budget.
    pub fn exit_code(&self) -> i32 {
        if self.unstabilized() {
            2
        } else if self.overall_pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per check plus the error bound footer.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            for c in &s.checks {
                out.push_str(&format!(
                    "[{}] {}/{}: expected {}, got {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    s.suite,
                    c.name,
                    c.expected,
                    c.actual
                ));
            }
        }
        out.push_str(&format!(
            "total probabilistic error bound: {:.3e} ({})\n",
            self.total_error_bound,
            if self.total_error_bound < 1e-3 { "below 1e-3" } else { "NOT below 1e-3" }
        ));
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub budget_secs: Option<u64>,
    pub parallel: bool,
    /// Record wall-clock time per check (makes reports non-reproducible).
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { budget_secs: None, parallel: false, timing: false }
    }
}

/// Curve, divisor pair and adapted embedding shared by all suites of a run.
pub(crate) struct Setup {
    pub ctx: PrimeContext,
    pub curve: HypCurve,
    pub d: Divisor,
    pub n: NData,
    pub emb: Embedding,
    pub budget: Budget,
}

impl Setup {
    pub fn new(ctx: PrimeContext, g: usize, budget: Budget) -> Result<Self> {
        let mut rng = ctx.rng(0);
        let curve = HypCurve::random(&ctx, g, &mut rng)?;
        let (d, n) = curve.sample_generic_pair(&mut rng)?;
        let emb = Embedding::adapted(&curve, &d, &n)?;
        Ok(Setup { ctx, curve, d, n, emb, budget })
    }
}

/// Accumulates check records for one suite.
pub(crate) struct Recorder {
    pub checks: Vec<CheckRecord>,
    pub unstabilized: bool,
    timing: bool,
    mark: Instant,
}

impl Recorder {
    fn new(timing: bool) -> Self {
        Recorder { checks: Vec::new(), unstabilized: false, timing, mark: Instant::now() }
    }

    fn push(&mut self, name: &str, anchor: &str, expected: String, actual: String, pass: bool, bound: f64) {
        debug_assert!(ANCHORS.contains(&anchor), "unregistered anchor {anchor}");
        let now = Instant::now();
        let time_ms = self.timing.then(|| now.duration_since(self.mark).as_millis() as u64);
        self.mark = now;
        self.checks.push(CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            expected,
            actual,
            pass,
            probabilistic_error_bound: bound,
            time_ms,
        });
    }

    /// Passes iff `expected == actual`.
    pub fn eq<T: PartialEq + Debug>(&mut self, name: &str, anchor: &str, expected: T, actual: T, bound: f64) -> bool {
        let pass = expected == actual;
        self.push(name, anchor, format!("{expected:?}"), format!("{actual:?}"), pass, bound);
        pass
    }

    /// Passes iff `ok`; `expected` describes the property, `actual` what was seen.
    pub fn holds(&mut self, name: &str, anchor: &str, expected: &str, ok: bool, actual: String, bound: f64) -> bool {
        self.push(name, anchor, expected.into(), actual, ok, bound);
        ok
    }

    /// Records an operation that returned an error where a value was expected.
    pub fn error(&mut self, name: &str, anchor: &str, expected: &str, e: &Error) {
        if matches!(e, Error::Unstabilized { .. }) {
            self.unstabilized = true;
        }
        self.push(name, anchor, expected.into(), format!("error: {e}"), false, 0.0);
    }
}

fn run_one(setup: &Setup, name: SuiteName, opts: &RunOptions) -> SuiteReport {
    let mut rec = Recorder::new(opts.timing);
    let mut rng = setup.ctx.rng(name.stream());
    let res = match name {
        SuiteName::Bertram => suites::bertram(setup, &mut rec, &mut rng),
        SuiteName::Incidence => suites::incidence(setup, &mut rec, &mut rng),
        SuiteName::Gamma => suites::gamma(setup, &mut rec, &mut rng),
        SuiteName::Nested => suites::nested(setup, &mut rec, &mut rng),
        SuiteName::KumarG3 => suites::kumar_g3(setup, &mut rec, &mut rng),
        SuiteName::CrosscheckG3 => suites::crosscheck_g3(setup, &mut rec, &mut rng),
        SuiteName::FurtherLocusG6 => suites::further_locus_g6(setup, &mut rec, &mut rng),
        SuiteName::All => unreachable!(),
    };
    if let Err(e) = res {
        rec.error("suite-aborted", "curve-embedding", "suite completes", &e);
    }
    let pass = !rec.checks.is_empty() && rec.checks.iter().all(|c| c.pass);
    SuiteReport {
        suite: name.as_str().into(),
        slow: name.is_slow(setup.curve.g),
        checks: rec.checks,
        pass,
        unstabilized: rec.unstabilized,
    }
}

/// Runs a suite (or all suites supported at genus `g`).
pub fn run_suite(name: SuiteName, g: usize, p: u64, seed: u64, opts: RunOptions) -> Result<Report> {
    if !name.supports(g) {
        return Err(Error::UnsupportedCombination { suite: name.as_str().into(), genus: g });
    }
    let ctx = PrimeContext::new(p, seed)?;
    let budget = Budget {
        max_rows: usize::MAX,
        deadline: opts.budget_secs.map(|s| Instant::now() + Duration::from_secs(s)),
    };
    let setup = Setup::new(ctx, g, budget)?;
    let names: Vec<SuiteName> = if name == SuiteName::All {
        SuiteName::ALL.into_iter().filter(|s| s.supports(g)).collect()
    } else {
        vec![name]
    };
    let suites: Vec<SuiteReport> = if opts.parallel && names.len() > 1 {
        let (setup, opts) = (&setup, &opts);
        std::thread::scope(|s| {
            let handles: Vec<_> = names.iter().map(|&n| s.spawn(move || run_one(setup, n, opts))).collect();
            handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
        })
    } else {
        names.iter().map(|&n| run_one(&setup, n, &opts)).collect()
    };
    let overall_pass = suites.iter().all(|s| s.pass);
    let total_error_bound = suites.iter().flat_map(|s| &s.checks).map(|c| c.probabilistic_error_bound).sum();
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        prime: p.to_string(),
        seed: seed.to_string(),
        genus: g,
        suite: name.as_str().into(),
        curve: setup.curve.to_json(),
        suites,
        overall_pass,
        total_error_bound,
    })
}

/// Checks the report's structure: schema tag, registered anchors, and pass
/// flags consistent with the individual checks.
pub fn validate_report(json: &str) -> Result<Report> {
    let r: Report = serde_json::from_str(json)?;
    let bad = |m: &str| Err(Error::Schema(m.to_string()));
    if r.schema != REPORT_SCHEMA {
        return bad("unknown report schema");
    }
    for s in &r.suites {
        if s.checks.iter().any(|c| !ANCHORS.contains(&c.anchor.as_str())) {
            return bad("unregistered anchor");
        }
        if s.pass != (!s.checks.is_empty() && s.checks.iter().all(|c| c.pass)) {
            return bad("suite pass flag inconsistent");
        }
    }
    if r.overall_pass != r.suites.iter().all(|s| s.pass) {
        return bad("overall pass flag inconsistent");
    }
    Ok(r)
}
