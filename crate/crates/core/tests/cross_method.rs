mod common;

use clifsat::dimacs::{parse_dimacs, write_dimacs, DimacsDocument};
use clifsat::gen::gen_random_ksat;
use clifsat::report::Report;
use clifsat::run::{run, run_text, Method, RunConfig};
use clifsat::sat::{brute_force_oracle, Status};
use clifsat::symmetry::{solve_by_reduction, symmetry_test, Backend};
use clifsat::witness::parse_witness;
use proptest::prelude::*;

fn document() -> impl Strategy<Value = DimacsDocument> {
    (1u32..=7).prop_flat_map(|n| {
        let lit = (1..=n as i64, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
        prop::collection::vec(prop::collection::vec(lit, 1..=4), 0..=12)
            .prop_map(move |clauses| DimacsDocument::new(n, clauses))
    })
}

fn status_of(doc: &DimacsDocument) -> Status {
    if common::truth_table(doc.num_vars, &doc.clauses).is_empty() {
        Status::Unsat
    } else {
        Status::Sat
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rigorous_methods_agree(doc in document()) {
        let expected = status_of(&doc);
        for m in Method::RIGOROUS {
            let r = run(&RunConfig::with_method(m), &doc).unwrap();
            prop_assert_eq!(r.status, expected, "{}", m);
            if let Some(w) = &r.witness {
                let f = doc.to_formula().unwrap();
                let a = parse_witness(&w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
                    .unwrap()
                    .to_assignment(doc.num_vars)
                    .unwrap();
                prop_assert!(f.is_satisfied_by(&a));
            }
        }
    }

    #[test]
    fn write_then_parse_is_identity(doc in document()) {
        let text = write_dimacs(&doc);
        let back = parse_dimacs(&text).unwrap().normalized();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(write_dimacs(&back), text);
    }

    #[test]
    fn backends_agree_small(doc in document()) {
        let f = doc.to_formula().unwrap().without_tautologies();
        prop_assume!(f.num_clauses() > 0 && f.num_vars() <= 4);
        let a = symmetry_test(&f, Backend::Atomset).unwrap();
        let b = symmetry_test(&f, Backend::Multivector).unwrap();
        prop_assert_eq!(a.symmetric_under, b.symmetric_under);
    }
}

#[test]
fn generated_round_trip_thousand() {
    for seed in 0..1000u64 {
        let doc = gen_random_ksat(3 + (seed % 20) as u32, (seed % 50) as usize, 3, seed).unwrap();
        let text = write_dimacs(&doc);
        assert_eq!(write_dimacs(&parse_dimacs(&text).unwrap()), text);
    }
}

#[test]
fn random_3sat_at_threshold_matches_oracle() {
    for seed in 0..100 {
        let doc = gen_random_ksat(8, 34, 3, seed).unwrap();
        let f = doc.to_formula().unwrap();
        let oracle = brute_force_oracle(&f).unwrap();
        let expected = common::truth_table(8, &doc.clauses);
        assert_eq!(oracle.iter().map(|a| a.bits()).collect::<Vec<_>>(), expected);
        let r = solve_by_reduction(&f, Backend::Atomset).unwrap();
        assert_eq!(r.status == Status::Sat, !expected.is_empty());
    }
}

#[test]
fn example_exit_codes() {
    for m in Method::RIGOROUS {
        let r = run_text(&RunConfig::with_method(m), common::EXAMPLE_DIMACS).unwrap();
        assert_eq!((r.status, r.exit_code()), (Status::Unsat, 20));
    }
    let r = run_text(&RunConfig::with_method(Method::Dnf), "p cnf 2 1\n1 0\n").unwrap();
    assert_eq!(r.exit_code(), 10);
    assert_eq!(r.witness, Some(vec![1, -2]));
}

#[test]
fn report_schema_is_stable() {
    let keys = |r: &Report| {
        let v = serde_json::to_value(r).unwrap();
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let reference = keys(&run_text(&RunConfig::default(), common::EXAMPLE_DIMACS).unwrap());
    for text in [common::EXAMPLE_DIMACS, "p cnf 2 1\n1 2 0\n"] {
        for m in Method::ALL {
            let r = run_text(&RunConfig::with_method(m), text).unwrap();
            assert_eq!(keys(&r), reference, "{m}");
            let back: Report = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(back.status, r.status);
        }
    }
    for key in ["status", "witness", "method", "n", "m", "counters", "timings", "warnings"] {
        assert!(reference.iter().any(|k| k == key), "{key}");
    }
}
