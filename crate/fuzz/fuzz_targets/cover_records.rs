#![no_main]

use kstruct::synth::{cover_family, cover_records_fixture, parse_cover_records};
use kstruct::BitString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((n, records)) = parse_cover_records(text) else { return };
    let (_, again) = parse_cover_records(&cover_records_fixture(n, &records)).expect("fixture reparses");
    assert_eq!(again, records);
    let Some(first) = records.first() else { return };
    let x: BitString = first.set.strings().next().expect("sets are nonempty");
    if let Ok(run) = cover_family(&records, &x, Some(0)) {
        assert!(run.violations().is_empty(), "{:?}", run.violations());
    }
});
