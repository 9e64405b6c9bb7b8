#![no_main]

use libfuzzer_sys::fuzz_target;
use wahl_core::catalog::{parse_record, parse_records};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(rs) = parse_records(s) else { return };
    for r in rs {
        assert_eq!(parse_record(&r.to_string()).expect("emitted record parses"), r);
    }
});
