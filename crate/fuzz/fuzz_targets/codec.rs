#![no_main]

use kstruct::codec::{decode_sd, decode_std, encode_sd, encode_std, pair, unpair};
use kstruct::BitString;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // one bit per byte keeps inputs short and lets the fuzzer steer lengths
    let bits = BitString::from_bits(data.iter().map(|b| b & 1 == 1).collect());
    if let Ok(x) = decode_sd(&bits) {
        assert_eq!(encode_sd(&x), bits);
    }
    if let Ok(x) = decode_std(&bits) {
        assert_eq!(encode_std(&x), bits);
    }
    if let Ok((x, y)) = unpair(&bits) {
        assert_eq!(pair(&x, &y), bits);
    }
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = text.parse::<BitString>() {
            assert_eq!(s.to_token().parse::<BitString>().unwrap(), s);
        }
    }
});
