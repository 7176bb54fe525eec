use kstruct::experiments::hamming_system;
use kstruct::search::{anytime_search, improvement_audit, SearchMode};
use kstruct::structfn::deficiency;
use kstruct::{BitString, DescriptionSystem};

#[test]
fn hamming_mid_weight_audit_finds_a_qualifying_drop() {
    let sys = hamming_system(12).unwrap();
    let x: BitString = "010110100110".parse().unwrap();
    let alpha = sys.max_set_program_len();
    let mut found = None;
    for seed in 0..200 {
        let trace = anytime_search(&sys, &x, alpha, &sys.enumeration_stream(seed), SearchMode::Mdl).unwrap();
        let audit = improvement_audit(&sys, &x, &trace, 0.5).unwrap();
        for pair in &audit.pairs {
            assert!(pair.deficiency_not_increased, "seed {seed}: {pair:?}");
        }
        if !audit.pairs.is_empty() {
            found = Some((seed, trace, audit));
            break;
        }
    }
    let (seed, trace, audit) = found.expect("some seed declares the singleton before the slice");
    let pair = &audit.pairs[0];
    assert!(pair.lambda_drop >= audit.threshold);
    let at = |t: u64| {
        let d = trace.declared.iter().find(|d| d.time == t).unwrap();
        deficiency(&sys, &x, &sys.set_entry(d.set_id).set).unwrap()
    };
    assert_eq!(at(pair.from_time), pair.delta_from, "seed {seed}");
    assert_eq!(at(pair.to_time), pair.delta_to);
    assert!(pair.delta_to <= pair.delta_from);
}

#[test]
fn fixture_traces_have_no_qualifying_pairs() {
    let sys = DescriptionSystem::fixture_a();
    for x in ["00", "01", "10", "11"] {
        let x: BitString = x.parse().unwrap();
        for seed in 0..20 {
            let trace = anytime_search(&sys, &x, 3, &sys.enumeration_stream(seed), SearchMode::Mdl).unwrap();
            assert!(improvement_audit(&sys, &x, &trace, 1.0).unwrap().pairs.is_empty());
        }
    }
}

#[test]
fn ml_search_on_fixture_ends_at_the_singleton() {
    let sys = DescriptionSystem::fixture_a();
    let x: BitString = "00".parse().unwrap();
    for seed in 0..10 {
        let trace = anytime_search(&sys, &x, 3, &sys.enumeration_stream(seed), SearchMode::Ml).unwrap();
        assert_eq!(trace.final_objective().to_string(), "0");
        assert_eq!(trace.final_model.unwrap().set.len(), 1);
    }
}

#[test]
fn nothing_feasible_gives_an_empty_trace() {
    let sys = DescriptionSystem::fixture_a();
    let x: BitString = "00".parse().unwrap();
    let trace = anytime_search(&sys, &x, 0, &sys.enumeration_stream(1), SearchMode::Mdl).unwrap();
    assert!(trace.declared.is_empty());
    assert!(trace.final_model.is_none());
}
