#![no_main]

use libfuzzer_sys::fuzz_target;
use wahl_core::config::{emit_configuration, parse_configuration};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(c) = parse_configuration(s) else { return };
    let again = parse_configuration(&emit_configuration(&c)).expect("emitted configuration parses");
    assert_eq!(again, c);
});
