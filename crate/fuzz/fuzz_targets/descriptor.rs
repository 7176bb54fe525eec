#![no_main]

use kstruct::descsys::parse_descriptor;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(desc) = parse_descriptor(text) else { return };
    // printing and reparsing must give back the same records
    let again = parse_descriptor(&desc.to_string()).expect("printed descriptor reparses");
    assert_eq!(again, desc);
    if let Ok(sys) = desc.build() {
        let rebuilt = sys.to_descriptor().build().expect("explicit codebook rebuilds");
        assert_eq!(rebuilt.program_count(), sys.program_count());
        assert_eq!(rebuilt.c_sub(), sys.c_sub());
    }
});
