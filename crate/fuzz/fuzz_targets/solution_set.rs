//! Solution-set CSV parsing. Anything that parses must survive a write and
//! re-read unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use triset::io::{parse_solution_set, write_solution_set};

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 20 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(set) = parse_solution_set(text) {
        let mut buf = Vec::new();
        write_solution_set(&set, &mut buf).expect("parsed sets are writable");
        let again = parse_solution_set(std::str::from_utf8(&buf).unwrap()).expect("written sets parse");
        assert_eq!(again, set);
    }
});
