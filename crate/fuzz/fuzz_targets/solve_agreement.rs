#![no_main]

use clifsat::dimacs::parse_dimacs;
use clifsat::run::{run, Method, RunConfig};
use libfuzzer_sys::fuzz_target;

// Small parsed instances must get the same verdict from every exact method.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(doc) = parse_dimacs(text) else {
        return;
    };
    if doc.num_vars > 8 || doc.clauses.len() > 64 {
        return;
    }
    let statuses: Vec<_> = Method::RIGOROUS
        .iter()
        .map(|&m| run(&RunConfig::with_method(m), &doc).expect("small instance runs").status)
        .collect();
    assert!(statuses.iter().all(|s| *s == statuses[0]), "{statuses:?}");
});
