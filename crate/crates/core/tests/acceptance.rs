//! Acceptance criteria 1 to 11, one PASS/FAIL line each.
//!
//! Runs with `harness = false` so the lines appear in `cargo test` output.
//! Every (suite, genus) pair is run once and shared between criteria.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use theta_lab::harness::{run_suite, Report, RunOptions, SuiteName};
use theta_lab::DEFAULT_PRIME;

const SEED: u64 = 20_240_601;

struct Runs {
    cache: HashMap<(SuiteName, usize), (Report, Duration)>,
}

impl Runs {
    fn get(&mut self, suite: SuiteName, g: usize) -> &(Report, Duration) {
        self.cache.entry((suite, g)).or_insert_with(|| {
            let t = Instant::now();
            let r = run_suite(suite, g, DEFAULT_PRIME, SEED, RunOptions::default())
                .unwrap_or_else(|e| panic!("{} at genus {g}: {e}", suite.as_str()));
            (r, t.elapsed())
        })
    }
}

/// Outcome of one criterion: failures collected as human-readable notes.
#[derive(Default)]
struct Verdict {
    notes: Vec<String>,
    failed: bool,
}

impl Verdict {
    fn require(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.failed = true;
            self.notes.push(note.into());
        }
    }

    /// Requires the named check to exist in the report and pass.
    fn check(&mut self, r: &Report, g: usize, name: &str) -> f64 {
        match r.find(name) {
            Some(c) => {
                self.require(c.pass, format!("g={g} {name}: expected {}, got {}", c.expected, c.actual));
                c.probabilistic_error_bound
            }
            None => {
                self.require(false, format!("g={g} {name}: missing from {} report", r.suite));
                0.0
            }
        }
    }

    fn expect(&mut self, r: &Report, g: usize, name: &str, expected: &str) {
        if let Some(c) = r.find(name) {
            self.require(c.expected == expected, format!("g={g} {name}: recorded expectation {} != {expected}", c.expected));
        }
        self.check(r, g, name);
    }
}

fn bertram_dimension(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    let limits = [(3, 120), (4, 900), (5, 7200)];
    for (g, secs) in limits {
        let (r, t) = runs.get(SuiteName::Bertram, g);
        v.expect(r, g, "projective-dimension", &((1i64 << g) - 1).to_string());
        v.require(*t <= Duration::from_secs(secs), format!("g={g} took {t:?}, limit {secs}s"));
    }
    v
}

fn secant_equality(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for g in [3, 4] {
        let (r, _) = runs.get(SuiteName::Bertram, g);
        let mut bound = 0.0;
        for name in [
            "theta-forms-vanish-on-secant-planes",
            "secant-system-dimension",
            "secant-forms-vanish-to-order-on-curve",
            "secant-system-equals-theta-system",
            "random-form-rejected",
        ] {
            bound += v.check(r, g, name);
        }
        v.require(bound < 1e-4, format!("g={g} error bound {bound:e} not below 1e-4"));
    }
    v
}

fn complementary_dimension(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for (g, e) in [(3, "3"), (4, "10")] {
        let (r, _) = runs.get(SuiteName::Bertram, g);
        v.expect(r, g, "complementary-projective-dimension", e);
    }
    v
}

fn meet_dimension(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for g in 3..=6 {
        let (r, _) = runs.get(SuiteName::Incidence, g);
        v.expect(r, g, "meet-dimension-h0-1", "50");
        v.expect(r, g, "meet-dimension-h0-2", "50");
        if g == 6 {
            v.expect(r, g, "meet-dimension-h0-3", "50");
        }
    }
    v
}

fn gamma_curve(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for g in 3..=5 {
        let (r, _) = runs.get(SuiteName::Gamma, g);
        v.expect(r, g, "fresh-gamma-samples-on-model", "40");
        v.expect(r, g, "n-points-on-model", &(2 * g).to_string());
        v.expect(r, g, "model-hyperplane-degree", &(2 * g - 2).to_string());
        v.check(r, g, "parametrization-degree");
    }
    v
}

fn nesting(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for g in 3..=5 {
        let (r, _) = runs.get(SuiteName::Nested, g);
        v.check(r, g, "inclusions");
        v.check(r, g, "n1-equals-n2");
        if g == 3 {
            v.expect(r, g, "dimensions", "(4, 4, 5)");
        }
    }
    let (r, _) = runs.get(SuiteName::CrosscheckG3, 3);
    v.check(r, 3, "composed-system-equals-n2-and-n1");
    v
}

fn quadric_hull(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    let (r, t) = runs.get(SuiteName::Bertram, 3);
    v.expect(r, 3, "image-relations-degree-1-2", "(0, 1)");
    v.require(*t <= Duration::from_secs(120), format!("took {t:?}"));
    v
}

fn segre_cubic(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    let (r, _) = runs.get(SuiteName::KumarG3, 3);
    v.expect(r, 3, "cubic-relations-degree-1-2-3", "[0, 0, 1]");
    v.expect(r, 3, "nodes", "(10, true)");
    let (r, _) = runs.get(SuiteName::CrosscheckG3, 3);
    v.expect(r, 3, "image-cubic-relations-degree-1-2-3", "[0, 0, 1]");
    v.check(r, 3, "nodes-from-n-planes");
    v
}

fn double_cover(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    for suite in [SuiteName::KumarG3, SuiteName::CrosscheckG3] {
        let (r, _) = runs.get(suite, 3);
        v.expect(r, 3, "lines-through-center", "6");
        v.check(r, 3, "fibers-have-two-points");
        v.expect(r, 3, "branch-quartic-nodes", "(16, true)");
        if let Some(c) = r.find("fibers-have-two-points") {
            let total: usize = c
                .actual
                .split(", ")
                .filter_map(|kv| kv.rsplit(' ').next()?.parse::<usize>().ok())
                .sum();
            v.require(total == 200, format!("{}: {total} directions, expected 200", suite.as_str()));
        }
    }
    v
}

fn further_locus(runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    let (r, t) = runs.get(SuiteName::FurtherLocusG6, 6);
    v.expect(r, 6, "n1-vanishes-on-gamma-secants", "0");
    v.check(r, 6, "n1-strictly-inside-n2");
    v.require(*t <= Duration::from_secs(7200), format!("took {t:?}"));
    v
}

fn determinism(_runs: &mut Runs) -> Verdict {
    let mut v = Verdict::default();
    let serial = RunOptions::default();
    let parallel = RunOptions { parallel: true, ..serial };
    let a = run_suite(SuiteName::All, 3, DEFAULT_PRIME, SEED, serial).unwrap().to_json();
    let b = run_suite(SuiteName::All, 3, DEFAULT_PRIME, SEED, serial).unwrap().to_json();
    let c = run_suite(SuiteName::All, 3, DEFAULT_PRIME, SEED, parallel).unwrap().to_json();
    v.require(a == b, "g=3 all: reruns differ");
    v.require(a == c, "g=3 all: parallel run differs");
    let d = run_suite(SuiteName::Bertram, 4, DEFAULT_PRIME, SEED, serial).unwrap().to_json();
    let e = run_suite(SuiteName::Bertram, 4, DEFAULT_PRIME, SEED, serial).unwrap().to_json();
    v.require(d == e, "g=4 bertram: reruns differ");
    v
}

type Criterion = (&'static str, fn(&mut Runs) -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("theta system dimension", bertram_dimension),
        ("secant system equality", secant_equality),
        ("complementary system dimension", complementary_dimension),
        ("secant meet dimension", meet_dimension),
        ("gamma rational normal curve", gamma_curve),
        ("nested systems", nesting),
        ("quadric hull", quadric_hull),
        ("segre cubic", segre_cubic),
        ("double cover and branch nodes", double_cover),
        ("further base locus", further_locus),
        ("determinism", determinism),
    ];
    let mut runs = Runs { cache: HashMap::new() };
    let mut failed = 0;
    for (i, (label, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = f(&mut runs);
        let tag = if v.failed { "FAIL" } else { "PASS" };
        println!("criterion {:>2} {tag}: {label} ({:.1?})", i + 1, t.elapsed());
        for n in &v.notes {
            println!("    {n}");
        }
        failed += v.failed as usize;
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
