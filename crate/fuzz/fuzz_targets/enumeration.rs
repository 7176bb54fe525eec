#![no_main]

use kstruct::unistat::{build_index, build_sli, parse_enumeration, reconstruct_from_prefix, level_prefix};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(d) = parse_enumeration(text) else { return };
    assert_eq!(parse_enumeration(&d.to_fixture()).expect("fixture reparses").count(), d.count());
    for o in d.objects().iter().take(8) {
        let r = build_index(&d, o);
        assert!(r.index.is_some_and(|i| i < r.count));
    }
    for i in 0..d.width() {
        if let Ok(b) = build_sli(&d, i) {
            assert_eq!(b.objects.len() as u64, 1u64 << (d.width() - i - 1));
        }
    }
    for i in 0..=d.l().min(8) {
        if let Some(m) = level_prefix(&d, i) {
            let _ = reconstruct_from_prefix(&d, i, &m);
        }
    }
});
