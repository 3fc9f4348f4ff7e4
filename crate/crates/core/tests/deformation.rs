use std::sync::Arc;

use hpt_core::bv::CommutativeAlgebra;
use hpt_core::complex::build_contraction;
use hpt_core::deformation::{
    derivation_dimension, formality_report, massey_family, mc_equations, morgan_example, single_obstruction_model,
    transfer_formality, MORGAN_SPHERES,
};
use hpt_core::dglie::DgLieAlgebra;
use hpt_core::fixtures::{self, abelian, dgla, engineered_dbv};
use hpt_core::graded::GradedSpace;
use hpt_core::scalar::{rat, ratio, Rational};
use hpt_core::transfer::{transfer, TransferResult};
use proptest::prelude::*;

fn run(g: &DgLieAlgebra, n: usize) -> TransferResult {
    let c = build_contraction(&g.complex().unwrap());
    transfer(g, &c, n).unwrap()
}

/// Classes `e1, e2` and a contractible pair `p → q` in degree −1 → −2, with a
/// symmetric bracket from degree −1 to degree −2 given by `coeffs`.
fn quadratic_instance(coeffs: &[i64]) -> DgLieAlgebra {
    let basis = [("e1", -1), ("e2", -1), ("p", -1), ("f1", -2), ("f2", -2), ("q", -2)];
    let inputs = ["e1", "e2", "p"];
    let outputs = ["f1", "f2", "q"];
    let mut bracket = Vec::new();
    let mut c = coeffs.iter();
    for i in 0..3 {
        for j in i..3 {
            for o in outputs {
                let x = *c.next().unwrap();
                if x != 0 {
                    bracket.push((inputs[i], inputs[j], o, rat(x)));
                }
            }
        }
    }
    dgla(&basis, &[("p", "q", rat(1))], &bracket)
}

#[test]
fn abelian_structures_leave_all_of_h1() {
    let g = abelian(&[("a", -1), ("b", -1), ("c", -2), ("u", 0)]);
    let r = run(&g, 4);
    let v = mc_equations(&r.brackets, 4).unwrap();
    assert_eq!(v.coordinates, vec!["a", "b"]);
    assert_eq!(v.targets.len(), 1);
    assert!(v.is_unobstructed());
    assert!(v.contains(&[rat(5), rat(-7)]));
}

#[test]
fn positive_cohomological_grading_is_required() {
    let g = abelian(&[("a", -1), ("b", 1)]);
    let r = run(&g, 3);
    assert!(mc_equations(&r.brackets, 3).is_err());
    assert!(mc_equations(&run(&abelian(&[("a", -1)]), 3).brackets, 1).is_err());
}

#[test]
fn quadratic_equations_by_hand() {
    // [e1,e1] = f1, [e1,e2] = 2f2 + q, [e2,e2] = −f1; q is killed by the projection
    let g = dgla(
        &[("e1", -1), ("e2", -1), ("p", -1), ("f1", -2), ("f2", -2), ("q", -2)],
        &[("p", "q", rat(1))],
        &[
            ("e1", "e1", "f1", rat(1)),
            ("e1", "e2", "f2", rat(2)),
            ("e1", "e2", "q", rat(1)),
            ("e2", "e2", "f1", rat(-1)),
        ],
    );
    assert!(g.validate().passed());
    let v = mc_equations(&run(&g, 4).brackets, 4).unwrap();
    assert_eq!(v.coordinates, vec!["e1", "e2"]);
    assert_eq!(v.equations.len(), 2);
    let f1 = &v.equations[0];
    let f2 = &v.equations[1];
    assert_eq!(f1.coefficient(&[2, 0]), ratio(1, 2));
    assert_eq!(f1.coefficient(&[0, 2]), ratio(-1, 2));
    assert_eq!(f1.coefficient(&[1, 1]), rat(0));
    assert_eq!(f2.coefficient(&[1, 1]), rat(2));
    assert_eq!(f2.terms().len(), 1);
    assert_eq!(f1.total_degrees(), vec![2]);
    // the cone t1 = ±t2 on f1 meets f2 = 0 only at the origin
    assert!(v.contains(&[rat(0), rat(0)]));
    assert!(!v.contains(&[rat(1), rat(1)]));
    assert_eq!(v.to_string(), "[f1] 1/2*t1^2 + -1/2*t2^2 = 0\n[f2] 2*t1*t2 = 0\n");
}

#[test]
fn quintic_operation_appears_at_order_five() {
    let theta: Vec<Rational> = [1, 0, 3, 0, 0, -2].into_iter().map(rat).collect();
    let l = single_obstruction_model(2, 5, &theta).unwrap();
    assert_eq!(l.arities(), vec![5]);
    let v4 = mc_equations(&l, 4).unwrap();
    assert!(v4.is_unobstructed());
    let v = mc_equations(&l, 5).unwrap();
    let f = &v.equations[0];
    // (1/5!) l5(η,…,η) has t^m coefficient θ_m / (m1! m2!)
    assert_eq!(f.coefficient(&[5, 0]), ratio(1, 120));
    assert_eq!(f.coefficient(&[3, 2]), ratio(3, 12));
    assert_eq!(f.coefficient(&[0, 5]), ratio(-2, 120));
    assert_eq!(f.terms().len(), 3);
    assert_eq!(f.total_degrees(), vec![5]);
    assert!(v.order_part(2)[0].is_zero());
    assert!(single_obstruction_model(2, 5, &theta[..5]).is_err());
}

#[test]
fn degree_zero_classes_act_on_h1() {
    let g = dgla(
        &[("u", 0), ("e", -1), ("f", -2)],
        &[],
        &[("u", "e", "e", rat(3)), ("u", "f", "f", rat(1))],
    );
    assert!(g.validate().passed());
    let v = mc_equations(&run(&g, 3).brackets, 3).unwrap();
    assert_eq!(v.h0_action.len(), 1);
    assert_eq!(v.h0_action[0].0, "u");
    assert_eq!(*v.h0_action[0].1.get(0, 0), rat(3));
}

#[test]
fn abelian_transfer_is_formal() {
    let r = run(&abelian(&[("a", 0), ("b", 1)]), 4);
    let f = transfer_formality(&r);
    assert!(f.formal());
    assert_eq!(f.per_truncation, vec![(2, true), (3, true), (4, true)]);
}

#[test]
fn bracket_only_structures_are_formal() {
    let r = run(&fixtures::sl2(), 4);
    assert!(transfer_formality(&r).formal());
}

#[test]
fn ternary_operation_is_a_witness_at_two() {
    let g = fixtures::massey_l3();
    let f = transfer_formality(&run(&g, 4));
    assert_eq!(f.witness, Some(2));
    assert_eq!(f.formal_at(2), Some(true));
    assert_eq!(f.formal_at(3), Some(false));
}

#[test]
fn kernel_pipeline_transfer_is_formal() {
    let bv = engineered_dbv();
    let p = bv.kernel_pipeline(4).unwrap();
    let k = &p.kernel;
    let r = transfer(&k.kernel, &k.contraction, 4).unwrap();
    assert!(transfer_formality(&r).formal());
    assert!(p.formal);
}

#[test]
fn morgan_numbers() {
    let theta = vec![rat(0); 6];
    let (family, report) = morgan_example(&theta, 5).unwrap();
    assert_eq!(family.spheres, MORGAN_SPHERES.to_vec());
    assert_eq!(report.parameter_dimension, 6);
    assert_eq!(report.automorphism_dimension, 5);
    assert_eq!(report.nonlinear_automorphisms, 0);
    assert_eq!(report.free_lie_length5, 6);
    assert_eq!(report.free_lie_cross_check, 6);
    assert_eq!(report.carrier_dimension, 6);
    assert_eq!(report.dimension_gap, 1);
    assert!(report.conclusion.contains("at least a 1-parameter family"));
    assert_eq!(family.attaching[2], [(5, 6)].into());
    assert!(family.attaching[0].is_empty() && family.attaching[1].is_empty());
    assert_eq!(family.parameters_by_arity(), [(5, 6)].into());
    assert_eq!(family.carrier_by_arity(), [(5, 6)].into());
}

#[test]
fn morgan_zero_perturbation_is_formal() {
    let (_, report) = morgan_example(&vec![rat(0); 6], 6).unwrap();
    assert!(report.theta_is_zero);
    assert!(report.formality.formal());
    assert!(report.sh_lie.passed());
    assert!(report.nonzero_brackets.is_empty());
}

#[test]
fn morgan_perturbation_is_a_quintic_witness() {
    let family = massey_family(&MORGAN_SPHERES, 5).unwrap();
    let theta = family.seeded_theta(11);
    assert!(theta.iter().any(|x| *x != rat(0)));
    let (_, report) = morgan_example(&theta, 6).unwrap();
    assert!(report.sh_lie.passed());
    assert!(report.lower_brackets_vanish());
    assert!(report.quintic_bracket_nonzero());
    assert_eq!(report.formality.witness, Some(4));
    assert_eq!(report.formality.formal_at(4), Some(true));
    assert_eq!(report.formality.formal_at(5), Some(false));
    // the quintic bracket carries two degree-3 classes to the degree-12 class
    let l = family.structure(&theta).unwrap();
    let table = l.bracket_table(5).unwrap();
    assert!(table.keys().all(|w| w.iter().all(|&i| i < 2)));
    assert!(table.values().all(|v| v.keys().all(|&t| t == 2)));
}

#[test]
fn morgan_needs_word_length_five() {
    assert!(morgan_example(&vec![rat(1); 6], 4).is_err());
    assert!(morgan_example(&vec![rat(1); 5], 5).is_err());
}

#[test]
fn sphere_families_reject_bad_input() {
    assert!(massey_family(&[1, 3], 4).is_err());
    assert!(massey_family(&[3], 1).is_err());
    let empty = massey_family(&[], 4).unwrap();
    assert_eq!(empty.parameter_dimension(), 0);
    assert_eq!(empty.automorphism_dimension, 0);
}

#[test]
fn triple_products_on_three_two_spheres() {
    // S²∨S²∨S⁴: the 4-cell attaches along [x1,x1], [x1,x2], [x2,x2] (cup products),
    // while the symmetric carrier sees only the product of the two distinct classes
    let family = massey_family(&[2, 2, 4], 3).unwrap();
    assert_eq!(family.parameters_by_arity(), [(2, 3)].into());
    assert_eq!(family.carrier_by_arity(), [(2, 1)].into());
    assert_eq!(family.automorphism_dimension, 5);
    assert_eq!(family.dimension_gap(), -2);
}

#[test]
fn derivations_of_a_truncated_polynomial_algebra() {
    let space = Arc::new(GradedSpace::from_pairs(&[("1", 0), ("x", 2), ("x2", 4)]).unwrap());
    let alg = CommutativeAlgebra::new(space, None, [(1, 1, 2, rat(1))], Some(0)).unwrap();
    assert_eq!(derivation_dimension(&alg, 0), 1);
    assert_eq!(derivation_dimension(&alg, 2), 1);
    // D(x) would need degree 6 and D(1) = 0
    assert_eq!(derivation_dimension(&alg, 4), 0);
    assert_eq!(derivation_dimension(&alg, 1), 0);
}

fn coefficient_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-2i64..=2, 18)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn order_two_part_is_the_induced_bracket(coeffs in coefficient_vec()) {
        let g = quadratic_instance(&coeffs);
        prop_assert!(g.validate().passed());
        let r = run(&g, 4);
        let v = mc_equations(&r.brackets, 4).unwrap();
        let h = r.induced_bracket(&g).unwrap();
        let coords: Vec<usize> = h.space().indices_in_degree(-1);
        for (eq, &t) in v.equations.iter().zip(&h.space().indices_in_degree(-2)) {
            let eq = eq.homogeneous_part(2);
            for a in 0..coords.len() {
                for b in a..coords.len() {
                    let mut m = vec![0u32; coords.len()];
                    m[a] += 1;
                    m[b] += 1;
                    let value = h.bracket(coords[a], coords[b]).get(&t).cloned().unwrap_or_else(|| rat(0));
                    let expected = if a == b { value * ratio(1, 2) } else { value };
                    prop_assert_eq!(eq.coefficient(&m), expected);
                }
            }
        }
    }

    #[test]
    fn formality_is_monotone_in_the_truncation(seed in 0u64..500) {
        let g = fixtures::random_corpus(seed, 1, 5).remove(0);
        let small = transfer_formality(&run(&g, 3));
        let large = transfer_formality(&run(&g, 4));
        if large.formal() {
            prop_assert!(small.formal());
        }
        for (n, f) in &large.per_truncation {
            if *f {
                for (m, g) in &large.per_truncation {
                    if m <= n {
                        prop_assert!(*g);
                    }
                }
            }
        }
        prop_assert_eq!(large.formal_at(3), small.formal_at(3));
    }

    #[test]
    fn seeded_morgan_perturbations_are_witnesses(seed in 0u64..1000) {
        let family = massey_family(&MORGAN_SPHERES, 5).unwrap();
        let theta = family.seeded_theta(seed);
        let f = formality_report(&family.coderivation(&theta).unwrap(), 5);
        prop_assert_eq!(f.witness, Some(4));
        prop_assert!(family.coalgebra(&theta).unwrap().check_sh_lie().passed());
    }
}
