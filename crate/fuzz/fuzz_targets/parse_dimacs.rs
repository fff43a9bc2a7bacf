#![no_main]

use clifsat::dimacs::{parse_dimacs, write_dimacs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_dimacs(text) {
        let normalized = doc.normalized();
        let again = parse_dimacs(&write_dimacs(&normalized)).expect("serializer output parses");
        assert_eq!(again.normalized(), normalized);
    }
});
