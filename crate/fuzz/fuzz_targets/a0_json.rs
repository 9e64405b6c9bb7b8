#![no_main]

use libfuzzer_sys::fuzz_target;
use wahl_core::catalog::A0Model;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = A0Model::parse(s) {
        assert_eq!((m.r(), m.t2()), (32, 72));
    }
});
