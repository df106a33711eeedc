use num_rational::BigRational;
use proptest::prelude::*;
use shelf_guess::document::{parse_pmf_map, pmf_map, JointDocument, MatrixDocument, PmfDocument};
use shelf_guess::exact::{joint_pmf, xn_pmf};
use shelf_guess::shuffle::position_matrix;
use shelf_guess::Bias;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn compact_pmf_round_trips(n in 1usize..50, num in 1i64..20, extra in 0i64..20) {
        let bias = Bias::ratio(num, num + extra).unwrap();
        let law = xn_pmf::<BigRational>(n, &bias).unwrap();
        let text = serde_json::to_string(&pmf_map(&law)).unwrap();
        prop_assert_eq!(parse_pmf_map(n, &bias, &text).unwrap(), law);
    }

    #[test]
    fn full_pmf_document_round_trips(n in 1usize..50, num in 1i64..20, extra in 0i64..20) {
        let bias = Bias::ratio(num, num + extra).unwrap();
        let law = xn_pmf::<BigRational>(n, &bias).unwrap();
        let text = serde_json::to_string_pretty(&PmfDocument::from_pmf(&law)).unwrap();
        let back: PmfDocument = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.to_exact().unwrap(), law);
    }
}

#[test]
fn joint_and_matrix_documents_parse_back() {
    let bias = Bias::ratio(3, 4).unwrap();
    let joint = joint_pmf::<BigRational>(6, &bias).unwrap();
    let doc = JointDocument::from_joint(&joint);
    let back: JointDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(back, doc);
    for ([l, c], prob) in &back.entries {
        assert_eq!(prob.to_rational().unwrap(), joint.prob(*l, *c));
    }

    let m = position_matrix::<BigRational>(5, &bias).unwrap();
    let doc = MatrixDocument::from_matrix(&m, &bias);
    let back: MatrixDocument = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(back, doc);
}
