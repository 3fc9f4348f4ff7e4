use std::sync::Arc;

use hpt_core::bv::{bracket_from_generator, BvData, CommutativeAlgebra};
use hpt_core::fixtures::{
    dbv_commutator_mutation, dbv_failing_lemma, engineered_dbv, euler_bv, inexact_bv, try_bv, unit_not_killed_bv,
    unit_only_bv,
};
use hpt_core::graded::{unit, GradedMap, SparseVec};
use hpt_core::scalar::{rat, ratio, Rational};
use proptest::prelude::*;

fn idx(bv: &BvData, label: &str) -> usize {
    bv.space().index_of(label).unwrap()
}

fn vec_of(bv: &BvData, terms: &[(&str, i64)]) -> SparseVec {
    terms.iter().map(|&(l, c)| (idx(bv, l), rat(c))).collect()
}

#[test]
fn zero_generator_gives_zero_bracket() {
    let a = euler_bv().algebra().clone();
    let zero = GradedMap::zero(a.space().clone(), a.space().clone(), -1);
    let g = bracket_from_generator(&a, &zero).unwrap();
    assert!(g.is_zero_bracket());
}

#[test]
fn derivation_generator_gives_zero_bracket() {
    let bv = euler_bv();
    let a = bv.algebra().clone();
    // ∂_ξ: xᵃξ ↦ xᵃ
    let entries = [("ξ", "1"), ("xξ", "x"), ("x2ξ", "x2")].map(|(s, t)| (idx(&bv, t), idx(&bv, s), rat(1)));
    let del = GradedMap::from_entries(a.space().clone(), a.space().clone(), -1, entries).unwrap();
    assert!(bracket_from_generator(&a, &del).unwrap().is_zero_bracket());
}

#[test]
fn euler_model_bracket_matches_hand_expansion() {
    let bv = euler_bv();
    let g = bv.gerstenhaber();
    let br = |a: &str, b: &str| g.bracket(idx(&bv, a), idx(&bv, b));
    assert_eq!(br("x", "ξ"), vec_of(&bv, &[("x", 1)]));
    assert_eq!(br("ξ", "x"), vec_of(&bv, &[("x", -1)]));
    assert_eq!(br("x2", "ξ"), vec_of(&bv, &[("x2", 2)]));
    assert_eq!(br("x", "xξ"), vec_of(&bv, &[("x2", 1)]));
    assert_eq!(br("xξ", "ξ"), vec_of(&bv, &[("xξ", 1)]));
    assert_eq!(br("ξ", "xξ"), vec_of(&bv, &[("xξ", -1)]));
    assert_eq!(br("ξ", "x2ξ"), vec_of(&bv, &[("x2ξ", -2)]));
    // x³ = 0
    assert!(br("x2", "xξ").is_empty());
    assert!(br("x", "x2").is_empty());
    assert!(br("1", "xξ").is_empty());
    let report = bv.validate();
    assert!(report.passed(), "{:?}", report.failures());
}

#[test]
fn koszul_identity() {
    assert!(euler_bv().koszul_identity_check().passed());
    assert!(unit_only_bv().koszul_identity_check().passed());
    assert!(engineered_dbv().koszul_identity_check().passed());
    let inexact = inexact_bv().koszul_identity_check();
    assert!(!inexact.applicable);
}

#[test]
fn differential_is_a_derivation_of_the_bracket() {
    assert!(euler_bv().differential_gerstenhaber_check().unwrap().passed());
    let bv = engineered_dbv();
    assert!(bv.validate().passed(), "{:?}", bv.validate().failures());
    assert!(bv.differential_gerstenhaber_check().unwrap().passed());
    assert!(dbv_commutator_mutation().differential_gerstenhaber_check().is_err());
}

#[test]
fn engineered_instance_bracket() {
    let bv = engineered_dbv();
    let g = bv.gerstenhaber();
    assert_eq!(g.bracket(idx(&bv, "u"), idx(&bv, "v")), vec_of(&bv, &[("e", 1)]));
    assert_eq!(bv.space().dim(), 7);
}

#[test]
fn formality_predicate() {
    let trivial = unit_only_bv().kahler_formality_check().unwrap();
    assert!(trivial.passed());
    assert_eq!(trivial.kernel_dim, 1);
    let euler = euler_bv().kahler_formality_check().unwrap();
    // d = 0: the inclusion of ker Δ is a quasi-isomorphism only if Δ = 0
    assert!(!euler.inclusion_quasi_iso);
    let r = engineered_dbv().kahler_formality_check().unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(
        (
            r.kernel_dim,
            r.homology_d_dim,
            r.homology_kernel_dim,
            r.homology_delta_dim
        ),
        (5, 3, 3, 3)
    );
    let bad = dbv_failing_lemma().kahler_formality_check().unwrap();
    assert!(!bad.inclusion_quasi_iso);
    assert!(!bad.passed());
    assert!(dbv_commutator_mutation().kahler_formality_check().is_err());
    assert!(inexact_bv().kahler_formality_check().is_err());
}

#[test]
fn regrading_gives_a_dg_lie_algebra() {
    for bv in [euler_bv(), engineered_dbv(), unit_only_bv()] {
        let (lie, delta) = bv.regraded().unwrap();
        assert!(lie.validate().passed(), "{:?}", lie.validate());
        assert_eq!(delta.degree(), 1);
        for (i, (_, p)) in bv.space().basis().iter().enumerate() {
            assert_eq!(lie.space().degree(i), 1 - p);
        }
    }
}

#[test]
fn kernel_pipeline_on_the_unit_algebra_is_linear() {
    let p = unit_only_bv().kernel_pipeline(4).unwrap();
    assert!(p.passed());
    assert_eq!(p.tau().max_arity(), 1);
}

#[test]
fn kernel_pipeline_on_the_engineered_instance() {
    let bv = engineered_dbv();
    let p = bv.kernel_pipeline(4).unwrap();
    assert!(p.delta_kills_tau);
    assert!(p.projection_is_universal);
    assert!(p.higher_values_in_image);
    assert!(p.master.passed(), "{:?}", p.master);
    assert!(p.cohomological_master);
    assert_eq!(p.cohomological_degrees.iter().copied().collect::<Vec<_>>(), vec![2]);
    assert!(p.passed());
    // [u,v] = e = dc forces a quadratic component with values in span{c} = Δ(span{a})
    let quadratic: Vec<&SparseVec> = p
        .tau()
        .values()
        .iter()
        .filter(|(w, _)| w.len() == 2)
        .map(|(_, v)| v)
        .collect();
    assert!(!quadratic.is_empty());
    let c = idx(&bv, "c");
    assert!(quadratic.iter().all(|v| v.keys().all(|&k| k == c)));
}

#[test]
fn kernel_pipeline_refuses_failing_predicate() {
    assert!(dbv_failing_lemma().kernel_pipeline(3).is_err());
    assert!(dbv_commutator_mutation().kernel_pipeline(3).is_err());
}

#[test]
fn flat_identity_on_the_unit_algebra() {
    let f = unit_only_bv().flat_identity_pipeline(4).unwrap();
    assert!(f.passed());
    assert_eq!(f.homology.dim(), 1);
    assert_eq!(f.tau.max_arity(), 1);
    assert_eq!(f.tau.values().values().next().unwrap(), &unit(0));
}

#[test]
fn flat_identity_on_the_engineered_instance() {
    let bv = engineered_dbv();
    let f = bv.flat_identity_pipeline(4).unwrap();
    assert!(f.passed(), "{:?}", f.master);
    assert!(f.higher_values_in_tilde);
    assert_eq!(f.homology.dim(), 3);
    assert!(f.tau.max_arity() >= 2);
    // the unit letter only appears linearly
    let one = idx(&bv, "1");
    for (w, v) in f.tau.values() {
        if v.contains_key(&one) {
            assert_eq!(w.len(), 1);
        }
    }
}

#[test]
fn flat_identity_preconditions() {
    assert!(unit_not_killed_bv().flat_identity_pipeline(3).is_err());
    // no unit at all
    let a = CommutativeAlgebra::new(
        Arc::new(hpt_core::graded::GradedSpace::from_pairs(&[("y", 1)]).unwrap()),
        None,
        [],
        None,
    )
    .unwrap();
    let zero = GradedMap::zero(a.space().clone(), a.space().clone(), -1);
    assert!(BvData::new(a, zero).unwrap().flat_identity_pipeline(3).is_err());
}

#[test]
fn commutativity_conflicts_are_rejected() {
    let r = try_bv(
        &[("1", 0), ("u", 1), ("v", 2), ("w", 3)],
        Some("1"),
        &[("u", "v", "w", rat(1)), ("v", "u", "w", rat(-1))],
        &[],
        &[],
    );
    assert!(r.is_err());
    let odd_square = try_bv(
        &[("1", 0), ("u", 1), ("w", 2)],
        Some("1"),
        &[("u", "u", "w", rat(1))],
        &[],
        &[],
    );
    assert!(odd_square.is_err());
}

/// The engineered instance after rescaling every non-unit basis vector.
fn rescaled(l: &[Rational; 6]) -> BvData {
    let names = ["u", "v", "a", "b", "c", "e"];
    let s = |n: &str| -> Rational {
        match names.iter().position(|m| *m == n) {
            Some(i) => l[i].clone(),
            None => rat(1),
        }
    };
    // structure constants transform as c · λ_inputs / λ_output
    let prod = [("u", "v", "b", rat(1))].map(|(x, y, z, c)| (x, y, z, c * s(x) * s(y) / s(z)));
    let d = [("a", "b", rat(1)), ("c", "e", rat(1))].map(|(x, y, c)| (x, y, c * s(x) / s(y)));
    let del = [("a", "c", rat(1)), ("b", "e", rat(-1))].map(|(x, y, c)| (x, y, c * s(x) / s(y)));
    try_bv(
        &[("1", 0), ("u", 1), ("v", 2), ("a", 2), ("b", 3), ("c", 1), ("e", 2)],
        Some("1"),
        &prod,
        &d,
        &del,
    )
    .unwrap()
}

fn nonzero() -> impl Strategy<Value = Rational> {
    (1i64..5, 1i64..4, any::<bool>()).prop_map(|(n, d, neg)| ratio(if neg { -n } else { n }, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pipeline_survives_rescaling(l in prop::array::uniform6(nonzero())) {
        let bv = rescaled(&l);
        prop_assert!(bv.validate().passed());
        prop_assert!(bv.koszul_identity_check().passed());
        prop_assert!(bv.kahler_formality_check().unwrap().passed());
        let p = bv.kernel_pipeline(3).unwrap();
        prop_assert!(p.passed());
        let f = bv.flat_identity_pipeline(3).unwrap();
        prop_assert!(f.passed());
    }

    #[test]
    fn generated_brackets_are_antisymmetric(coeffs in prop::collection::vec(-3i64..4, 9)) {
        // an arbitrary degree −1 operator on the Euler model
        let bv = euler_bv();
        let a = bv.algebra().clone();
        let sources = ["ξ", "xξ", "x2ξ"];
        let targets = ["1", "x", "x2"];
        let mut entries = Vec::new();
        for (si, s) in sources.iter().enumerate() {
            for (ti, t) in targets.iter().enumerate() {
                entries.push((idx(&bv, t), idx(&bv, s), rat(coeffs[3 * si + ti])));
            }
        }
        let del = GradedMap::from_entries(a.space().clone(), a.space().clone(), -1, entries).unwrap();
        let g = bracket_from_generator(&a, &del).unwrap();
        prop_assert!(g.validate().antisymmetry_failures.is_empty());
    }

    #[test]
    fn derivations_generate_zero_brackets(coeffs in prop::collection::vec(-3i64..4, 3)) {
        let bv = euler_bv();
        let a = bv.algebra().clone();
        // Δξ = α + βx + γx², extended as an odd derivation with Δx = 0
        let image: SparseVec = ["1", "x", "x2"].iter().zip(&coeffs).map(|(l, &c)| (idx(&bv, l), rat(c))).filter(|(_, c)| *c != rat(0)).collect();
        let cols: Vec<SparseVec> = bv.space().basis().iter().map(|(l, _)| match l.as_str() {
            "ξ" => image.clone(),
            "xξ" => a.mul_vec(&unit(idx(&bv, "x")), &image),
            "x2ξ" => a.mul_vec(&unit(idx(&bv, "x2")), &image),
            _ => SparseVec::new(),
        }).collect();
        let del = GradedMap::new(a.space().clone(), a.space().clone(), -1, cols).unwrap();
        prop_assert!(bracket_from_generator(&a, &del).unwrap().is_zero_bracket());
    }
}
