#![no_main]

use kstruct::modelclasses::{parse_fn, restrict_fn};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = parse_fn(text) else { return };
    assert_eq!(parse_fn(&model.to_fixture()).expect("fixture reparses"), model);
    for len in model.lengths().iter().take(4) {
        let d = kstruct::BitString::from_word(0, *len);
        if let Some(x) = model.apply(&d) {
            let r = restrict_fn(&model, x).expect("values restrict");
            assert!(r.contains_x && r.within_len);
        }
    }
});
