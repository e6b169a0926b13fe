#![no_main]

use cmpl_core::exact::{parse_poly, poly_from_json, poly_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_poly(s) {
        let back = poly_from_json(&poly_to_json(&p)).expect("serialized polynomial parses");
        assert_eq!(back, p);
    }
});
