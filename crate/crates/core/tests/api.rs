//! End-to-end use of the public API.

use linrel::decompose::{
    canonical_wire_relation, classify, cospan_dict_rows, det_witness, sur_witness, total_witness,
};
use linrel::pair::{subspace_report, zassenhaus};
use linrel::relation::Generator;
use linrel::theorems::{enumerate_relations, run_suite, SuiteConfig};
use linrel::{cospan_decompose, pair_decompose, FieldSpec, LinearRelation, Matrix, WireShape};

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

#[test]
fn generators_compose_to_identity() {
    let f = FieldSpec::QQ;
    let copy = LinearRelation::generator(f, Generator::Copy(1));
    let sum = LinearRelation::generator(f, Generator::Sum(1));
    // x ↦ (x, x) ↦ 2x
    let doubled = copy.compose(&sum).unwrap();
    assert_eq!(
        doubled,
        LinearRelation::graph_of_map(&Matrix::from_i64(f, 1, 1, &[2]))
    );
    let discard = LinearRelation::generator(f, Generator::Discard(1));
    let zero = LinearRelation::generator(f, Generator::Zero(1));
    // forget x, then emit 0
    let forget = discard.compose(&zero).unwrap();
    assert_eq!(
        forget,
        LinearRelation::graph_of_map(&Matrix::zeros(f, 1, 1))
    );
    assert_eq!(
        forget.compose(&forget.opposite()).unwrap(),
        LinearRelation::full(f, 1, 1)
    );
}

#[test]
fn decomposition_of_every_small_relation() {
    let f = gf(3);
    for m in 0..=1 {
        for n in 0..=2 {
            for r in enumerate_relations(f, m, n).unwrap() {
                let d = cospan_decompose(&r);
                assert!(d.verify(&r), "{r}");
                assert_eq!(classify(&r), r.properties());
            }
        }
    }
}

#[test]
fn wire_relations_are_their_own_normal_form() {
    let f = FieldSpec::QQ;
    let shape = WireShape::new(1, 1, 2, 1, 1);
    let w = canonical_wire_relation(f, shape);
    assert_eq!(cospan_decompose(&w).shape, shape);
}

#[test]
fn witnesses_for_a_cospan() {
    let f = FieldSpec::QQ;
    let a = Matrix::from_i64(f, 2, 1, &[1, 0]);
    let b = Matrix::identity(f, 2);
    assert_eq!(total_witness(&a, &b).unwrap().unwrap(), a);
    assert!(sur_witness(&a, &b).unwrap().is_none());
    assert!(det_witness(&a, &b).unwrap().is_some());
    let dict = cospan_dict_rows(&a, &b).unwrap();
    assert!(dict.total.predicate && dict.deterministic.predicate && dict.injective.predicate);
    assert!(!dict.surjective.predicate);
}

#[test]
fn pair_and_subspaces_agree() {
    let f = gf(5);
    let a = Matrix::from_i64(f, 3, 2, &[1, 0, 0, 1, 0, 0]);
    let b = Matrix::from_i64(f, 3, 2, &[1, 0, 1, 1, 0, 1]);
    let pd = pair_decompose(&a, &b).unwrap();
    assert!(pd.verify(&a, &b));
    assert!(pd.h_surjective());
    let rep = subspace_report(&a, &b).unwrap();
    let (sum, meet) = zassenhaus(&a, &b).unwrap();
    assert_eq!(
        LinearRelation::column_span(&sum),
        LinearRelation::column_span(&rep.sum)
    );
    assert_eq!(
        LinearRelation::column_span(&meet),
        LinearRelation::column_span(&rep.intersection)
    );
    assert_eq!((rep.intersection.cols(), rep.sum.cols()), (1, 3));
}

#[test]
fn full_exhaustive_suite() {
    let rep = run_suite(&SuiteConfig {
        quick: true,
        seed: 1,
        ..Default::default()
    });
    assert!(rep.passed(), "{rep}");
}
