#![no_main]

use kstruct::predict::{parse_strategy, strategy_to_set, total_mass};
use kstruct::LogBits;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = parse_strategy(text) else { return };
    assert_eq!(parse_strategy(&p.to_fixture()).expect("fixture reparses"), p);
    if p.horizon() <= 10 {
        let mass = total_mass(&p);
        assert_eq!(mass.numer(), mass.denom());
        for m in 0..=p.horizon() {
            if let Ok(Some(s)) = strategy_to_set(&p, LogBits::int(i64::from(m))) {
                assert!(s.len() as u64 <= 1u64 << m);
            }
        }
    }
});

