#![no_main]

use libfuzzer_sys::fuzz_target;
use wahl_core::cqs::{hj_eval, hj_expand, Chain};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(c) = Chain::parse(s) else { return };
    assert_eq!(Chain::parse(&c.to_string()).unwrap(), c);
    if c.len() <= 64 && c.entries().iter().all(|&b| b <= 1_000) {
        let (m, q) = hj_eval(&c);
        assert_eq!(hj_expand(&m, &q).unwrap(), c);
    }
});
