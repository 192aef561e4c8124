mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn support_round_trip(p in polyhedron()) {
        check_round_trip(&p).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn equality_is_detected_on_refinement_samples((a, b) in polyhedron_pair()) {
        check_evaluation_equality(&a, &b).map_err(TestCaseError::fail)?;
        check_evaluation_equality(&a, &a).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn integrality_matches_integral_support(p in polyhedron()) {
        check_integrality(&p).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn support_is_concave(p in polyhedron(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let weights = dual_box(p.tail(), 4);
        check_concavity(&p, i.get(&weights), j.get(&weights)).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn minkowski_sum_adds_supports((a, b) in polyhedron_pair()) {
        check_minkowski(&a, &b).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn double_dual_is_identity(c in any_cone()) {
        check_dual_dual(&c).map_err(TestCaseError::fail)?;
    }
}
