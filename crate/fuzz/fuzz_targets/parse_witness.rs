#![no_main]

use clifsat::witness::parse_witness;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(w) = parse_witness(text) {
        let _ = w.to_assignment(16);
    }
});
