#![no_main]

use libfuzzer_sys::fuzz_target;
use wahl_core::catalog::parse_expected;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_expected(s);
    }
});
