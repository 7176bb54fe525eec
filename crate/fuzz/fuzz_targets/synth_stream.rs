#![no_main]

use kstruct::synth::{parse_stream, synthesize};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((universe, target, events)) = parse_stream(text) else { return };
    if let Ok(run) = synthesize(&target, &universe, &events) {
        assert!(run.violations().is_empty(), "{:?}", run.violations());
    }
});
