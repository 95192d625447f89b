use bialgebra::verify::Suite;

#[test]
fn every_suite_passes_at_default_counts() {
    for suite in Suite::ALL {
        let count = suite.default_count().min(40);
        let cases = suite.run(7, count).unwrap();
        assert!(!cases.is_empty(), "{suite} produced no cases");
        let failed: Vec<_> = cases.iter().filter(|c| !c.passed()).collect();
        assert!(failed.is_empty(), "{suite}: {failed:#?}");
    }
}

#[test]
fn cases_are_sorted_and_unique() {
    for suite in Suite::ALL {
        let cases = suite.run(3, 4).unwrap();
        let ids: Vec<&str> = cases.iter().map(|c| c.id.as_str()).collect();
        assert!(ids.windows(2).all(|w| w[0] < w[1]), "{suite}: {ids:?}");
        assert!(ids.iter().all(|id| id.starts_with(suite.name())));
    }
}

#[test]
fn runs_are_reproducible() {
    let a = Suite::Spin.run(11, 24).unwrap();
    let b = Suite::Spin.run(11, 24).unwrap();
    assert_eq!(a, b);
}

#[test]
fn suite_names_round_trip() {
    for suite in Suite::ALL {
        assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
    }
    assert!("nope".parse::<Suite>().is_err());
}
