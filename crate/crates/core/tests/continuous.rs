mod common;

use clifsat::null_geometry::{atom_of_lambda, SignatureLambda};
use clifsat::orthogonal::{
    basis_change, classify, cover_search, givens_compose, haar_sample, haar_sample_with, is_totally_null,
    normalize_form, spans_residual, ClassLabel, Matrix, NumericOptions, OrthogonalMatrix, SamplerConfig,
    SubspaceForm, DEFAULT_TOLERANCE,
};
use clifsat::sat::CnfFormula;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EPS: f64 = 1e-9;

fn lambda(n: u32, mask: u64) -> SignatureLambda {
    let signs: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
    SignatureLambda::from_signs(&signs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalize_recovers_graph(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = haar_sample_with(n, &mut rng).into_inner();
        let u = haar_sample_with(n, &mut rng).into_inner() * Matrix::from_diagonal_element(n, n, 2.0)
            + Matrix::identity(n, n) * 0.5;
        let f = SubspaceForm::new(u.clone(), &t * &u).unwrap();
        let g = normalize_form(&f, NumericOptions::default()).unwrap();
        prop_assert!((&g.second - &t).norm() < EPS);
        prop_assert!(spans_residual(&f.stacked(), &g.stacked()) < EPS);
        let again = normalize_form(&g, NumericOptions::default()).unwrap();
        prop_assert!((&again.second - &g.second).norm() < EPS);
        prop_assert_eq!(is_totally_null(&f, EPS), is_totally_null(&g, EPS));
        prop_assert!(is_totally_null(&g, EPS));
    }

    #[test]
    fn basis_change_keeps_reference_fixed(n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t1 = haar_sample_with(n, &mut rng);
        let t2 = haar_sample_with(n, &mut rng);
        let u = haar_sample_with(n, &mut rng);
        let bc = basis_change(&t1, &t2, &u, NumericOptions::default()).unwrap();
        prop_assert!((&bc.reference.second - Matrix::identity(n, n)).norm() < EPS);
        prop_assert!(is_totally_null(&bc.transformed, EPS));
    }

    #[test]
    fn conjugated_involutions_keep_minus_count(n in 1u32..=6, mask in any::<u64>(), seed in any::<u64>()) {
        let l = lambda(n, mask & ((1 << n) - 1));
        let u = haar_sample(n as usize, seed).into_inner();
        let t = OrthogonalMatrix::new(u.transpose() * l.to_matrix() * &u, EPS).unwrap();
        let label = classify(&t, DEFAULT_TOLERANCE);
        prop_assert_eq!(label.lambda().map(|x| x.minus_count()), Some(l.minus_count()));
    }
}

#[test]
fn diagonal_classes_exact() {
    for n in 1..=6 {
        for mask in 0..1u64 << n {
            let l = lambda(n, mask);
            let t = OrthogonalMatrix::from_lambda(&l);
            assert_eq!(classify(&t, DEFAULT_TOLERANCE).lambda(), Some(&l));
            assert!(is_totally_null(&SubspaceForm::graph(t.matrix()), EPS));
        }
    }
}

#[test]
fn distinct_lambdas_give_distinct_subspaces() {
    for n in 1..=6u32 {
        let forms: Vec<Matrix> = (0..1u64 << n)
            .map(|m| SubspaceForm::graph(&lambda(n, m).to_matrix()).stacked())
            .collect();
        for (i, a) in forms.iter().enumerate() {
            for b in &forms[i + 1..] {
                assert!(spans_residual(a, b) > 0.1);
            }
        }
    }
}

#[test]
fn samplers() {
    let t = givens_compose(6, &(0..15).map(|k| 0.37 * k as f64).collect::<Vec<_>>()).unwrap();
    assert!(t.residual() < 1e-12);
    for seed in 0..50 {
        let h = haar_sample(5, seed);
        assert!((h.determinant().abs() - 1.0).abs() < 1e-9);
        assert_eq!(h, haar_sample(5, seed));
    }
}

#[test]
fn cover_search_fixtures() {
    let config = SamplerConfig::default();
    let r = cover_search(&common::example(), &config).unwrap();
    assert!(r.samples >= 10_000);
    assert!(r.uncovered.is_empty());
    assert!(r.consistent);

    let f = CnfFormula::from_dimacs(2, &[vec![1, 2]]).unwrap();
    let r = cover_search(&f, &config).unwrap();
    assert!(!r.uncovered.is_empty());
    for l in &r.uncovered {
        assert!(f.is_satisfied_by(&atom_of_lambda(l)));
    }
    assert!(r.witnesses_verified && r.consistent);

    let free = CnfFormula::new(3, vec![]).unwrap();
    let r = cover_search(&free, &config).unwrap();
    assert!(r.class_hits.iter().all(|h| !h.covered));
    assert!(r.classified > 0);

    let rotation = givens_compose(2, &[std::f64::consts::PI / 3.0]).unwrap();
    assert_eq!(classify(&rotation, DEFAULT_TOLERANCE), ClassLabel::Unclassified);
}
