#![no_main]

use kstruct::modelclasses::{parse_pmf, restrict_pmf};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = parse_pmf(text) else { return };
    assert_eq!(parse_pmf(&model.to_fixture()).expect("fixture reparses"), model);
    for (x, _) in model.support().take(16) {
        let r = restrict_pmf(&model, x).expect("support points restrict");
        assert!(r.contains_x && r.below_pow && r.below_inverse);
    }
});
