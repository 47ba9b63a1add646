use theta_lab::harness::figure::{export_figure_data, validate_figure};
use theta_lab::harness::{run_suite, validate_report, RunOptions, SuiteName, ANCHORS};
use theta_lab::{Error, DEFAULT_PRIME};

fn all_g3(seed: u64) -> theta_lab::harness::Report {
    run_suite(SuiteName::All, 3, DEFAULT_PRIME, seed, RunOptions::default()).unwrap()
}

#[test]
fn genus_three_passes_for_several_seeds() {
    for seed in [1, 2, 3, 4, 5] {
        let r = all_g3(seed);
        let failing: Vec<_> = r.checks().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        assert!(r.overall_pass, "seed {seed}: {failing:?}");
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.suites.len(), 6);
    }
}

#[test]
fn genus_four_suites_pass() {
    for s in [SuiteName::Bertram, SuiteName::Incidence, SuiteName::Gamma, SuiteName::Nested] {
        let r = run_suite(s, 4, DEFAULT_PRIME, 11, RunOptions::default()).unwrap();
        assert!(r.overall_pass, "{}", r.summary());
    }
}

#[test]
fn error_bounds_stay_below_threshold() {
    let r = all_g3(9);
    for s in &r.suites {
        let total: f64 = s.checks.iter().map(|c| c.probabilistic_error_bound).sum();
        assert!(total < 1e-3, "{}: {total:e}", s.suite);
    }
    assert!(r.total_error_bound < 1e-3);
}

#[test]
fn report_round_trips_through_validator() {
    let r = all_g3(3);
    let json = r.to_json();
    let back = validate_report(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert!(r.checks().all(|c| ANCHORS.contains(&c.anchor.as_str())));
    assert!(r.checks().all(|c| c.time_ms.is_none()));
    assert!(json.contains("\"prime\": \"1000003\""));
}

#[test]
fn validator_rejects_tampered_reports() {
    let json = all_g3(4).to_json();
    let flipped = json.replacen("\"pass\": true", "\"pass\": false", 1);
    assert!(matches!(validate_report(&flipped), Err(Error::Schema(_))));
    let anchor = json.replacen("\"anchor\": \"curve-embedding\"", "\"anchor\": \"elsewhere\"", 1);
    assert!(matches!(validate_report(&anchor), Err(Error::Schema(_))));
    assert!(validate_report("{}").is_err());
}

#[test]
fn seed_changes_the_report() {
    assert_ne!(all_g3(1).to_json(), all_g3(2).to_json());
}

#[test]
fn timing_is_opt_in() {
    let opts = RunOptions { timing: true, ..RunOptions::default() };
    let r = run_suite(SuiteName::Gamma, 3, DEFAULT_PRIME, 1, opts).unwrap();
    assert!(r.checks().all(|c| c.time_ms.is_some()));
}

#[test]
fn unsupported_combinations_are_rejected() {
    for (s, g) in [(SuiteName::KumarG3, 4), (SuiteName::FurtherLocusG6, 5), (SuiteName::Bertram, 7), (SuiteName::Nested, 6)] {
        let e = run_suite(s, g, DEFAULT_PRIME, 1, RunOptions::default()).unwrap_err();
        assert!(matches!(e, Error::UnsupportedCombination { .. }), "{e}");
    }
    assert!(matches!(
        run_suite(SuiteName::Gamma, 3, 1_000_000, 1, RunOptions::default()),
        Err(Error::InvalidPrime(_))
    ));
}

#[test]
fn figure_round_trips_and_is_consistent() {
    let d = export_figure_data(3, DEFAULT_PRIME, 7).unwrap();
    let json = d.to_json();
    assert_eq!(validate_figure(&json).unwrap(), d);
    assert_eq!(d.ambient_dim, 4);
    assert_eq!(d.n_points.len(), 6);
    assert!(d.lines.iter().all(|l| l.gamma.len() == 4));
    assert_eq!(json, export_figure_data(3, DEFAULT_PRIME, 7).unwrap().to_json());
}

#[test]
fn figure_validator_catches_moved_points() {
    let mut d = export_figure_data(3, DEFAULT_PRIME, 8).unwrap();
    let x: u64 = d.gamma_samples[0][0].parse().unwrap();
    d.gamma_samples[0][0] = ((x + 1) % DEFAULT_PRIME).to_string();
    assert!(matches!(validate_figure(&d.to_json()), Err(Error::Schema(_))));

    let mut d = export_figure_data(3, DEFAULT_PRIME, 8).unwrap();
    let x: u64 = d.lines[0].p_image[1].parse().unwrap();
    d.lines[0].p_image[1] = ((x + 5) % DEFAULT_PRIME).to_string();
    assert!(matches!(validate_figure(&d.to_json()), Err(Error::Schema(_))));
}

#[test]
fn figure_in_genus_four() {
    let d = export_figure_data(4, DEFAULT_PRIME, 2).unwrap();
    validate_figure(&d.to_json()).unwrap();
    assert_eq!(d.ambient_dim, 6);
}
