mod common;

use common::{oracle_profile, oracle_system, raw, set_complexities};
use kstruct::structfn::profile_all;

fn witness_programs(ws: &[Option<kstruct::structfn::Witness>]) -> Vec<Option<String>> {
    ws.iter().map(|w| w.as_ref().map(|w| w.program.to_string())).collect()
}

#[test]
fn profiles_match_the_double_loop_oracle() {
    let mut compared = 0usize;
    for i in 0..100 {
        let sys = oracle_system(i);
        assert!(sys.program_count() <= 500, "system {i} has {} programs", sys.program_count());
        let r = raw(&sys);
        let ks = set_complexities(&r);
        let alpha_max = sys.max_set_program_len() + 1;
        for p in profile_all(&sys, alpha_max, None) {
            let x = p.x.to_word();
            let o = oracle_profile(&r, &ks, x, alpha_max);
            assert_eq!(p.k_x, o.k_x, "system {i}, x {}", p.x);
            assert_eq!(p.h, o.h, "system {i}, x {}", p.x);
            assert_eq!(p.lambda, o.lambda, "system {i}, x {}", p.x);
            assert_eq!(p.beta, o.beta, "system {i}, x {}", p.x);
            assert_eq!(witness_programs(&p.h_witness), o.h_w);
            assert_eq!(witness_programs(&p.lambda_witness), o.lambda_w);
            assert_eq!(witness_programs(&p.beta_witness), o.beta_w);
            compared += 1;
        }
    }
    eprintln!("compared {compared} profiles");
    assert!(compared > 5000);
}

#[test]
fn oracle_agrees_with_the_reference_fixture() {
    let sys = kstruct::DescriptionSystem::fixture_a();
    let r = raw(&sys);
    let ks = set_complexities(&r);
    let o = oracle_profile(&r, &ks, 0, 3);
    let show = |v: &[kstruct::LogBits]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>();
    assert_eq!(show(&o.h), ["inf", "2", "1", "0"]);
    assert_eq!(show(&o.lambda), ["inf", "3", "3", "3"]);
    assert_eq!(show(&o.beta), ["inf", "0", "0", "0"]);
    let o = oracle_profile(&r, &ks, 3, 3);
    assert_eq!(show(&o.h), ["inf", "2", "2", "2"]);
}
