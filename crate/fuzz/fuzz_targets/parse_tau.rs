#![no_main]

use cmpl_core::numeric::parse_tau;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = parse_tau(s) {
        let again = parse_tau(&t.to_string()).expect("displayed value parses");
        assert_eq!(again, t);
    }
});
