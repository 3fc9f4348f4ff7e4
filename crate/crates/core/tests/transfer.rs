use hpt_core::complex::{build_contraction, Contraction};
use hpt_core::dglie::{ce_coderivation, DgLieAlgebra};
use hpt_core::fixtures::{self, abelian, massey_l3, massey_l3_even, projection_kills_bracket, radical_homology};
use hpt_core::graded::{unit, SparseVec};
use hpt_core::scalar::rat;
use hpt_core::symco::SymWord;
use hpt_core::transfer::{check_inclusion_degeneration, check_projection_degeneration, subalgebra_transfer, transfer};
use proptest::prelude::*;

fn run(g: &DgLieAlgebra, n: usize) -> hpt_core::transfer::TransferResult {
    let c = build_contraction(&g.complex().unwrap());
    transfer(g, &c, n).unwrap()
}

#[test]
fn abelian_transfer_is_linear() {
    let g = abelian(&[("a", 0), ("b", -1)]);
    let r = run(&g, 4);
    assert!(r.coderivation.is_zero());
    assert_eq!(r.tau.max_arity(), 1);
    assert!(r.verify_master(&g).passed());
}

#[test]
fn truncation_below_two_is_rejected() {
    let g = abelian(&[("a", 0)]);
    let c = build_contraction(&g.complex().unwrap());
    assert!(transfer(&g, &c, 1).is_err());
}

#[test]
fn identity_contraction_returns_the_ce_coderivation() {
    let g = fixtures::sl2();
    let c = Contraction::identity(g.complex().unwrap());
    let r = transfer(&g, &c, 4).unwrap();
    // labels differ only through the homology labelling, which is the identity here
    assert_eq!(r.coderivation.values(), ce_coderivation(&g).values());
    assert_eq!(r.tau.max_arity(), 1);
}

/// Hand expansion for `x, w, t, q` with `[x,x] = w = dt`, `[t,x] = q`, where
/// `h(w) = −t` and all suspended generators are even.
#[test]
fn massey_instance_by_hand() {
    let g = massey_l3();
    let r = run(&g, 4);
    let gens = r.gens().clone();
    // homology ordered by degree
    assert_eq!(gens.basis(), &[("sq".to_string(), -1), ("sx".to_string(), 0)]);
    let (sq, sx) = (0, 1);
    let t = g.space().index_of("t").unwrap();
    let q = g.space().index_of("q").unwrap();
    let sx2 = SymWord::canonical(&gens, &[sx, sx]).unwrap().0;
    let sx3 = SymWord::canonical(&gens, &[sx, sx, sx]).unwrap().0;
    // R₂(sx·sx) = ½(2[x,x]) = w and τ²(sx·sx) = −h(w) = t
    assert_eq!(r.tau.value(&sx2), unit(t));
    // π(w) = 0
    assert!(r.coderivation.value(&sx2).is_empty());
    // R₃(sx·sx·sx) = ½·3([x,t] + [t,x]) = 3q, since [x,t] = [t,x] for odd x, t
    assert_eq!(r.coderivation.value(&sx3), SparseVec::from([(sq, rat(3))]));
    assert!(r.tau.value(&sx3).is_empty() || !r.tau.value(&sx3).contains_key(&q));
    let l3 = r.brackets.eval(&[sx, sx, sx]);
    assert_eq!(l3.len(), 1);
    assert_eq!(l3.values().next().unwrap().clone(), rat(3));
    assert!(r.verify_master(&g).passed());
    assert!(r.check_sh_lie().passed());
    assert_eq!(r.higher_arities(), vec![3]);
}

#[test]
fn even_massey_instance_has_a_ternary_bracket() {
    let g = massey_l3_even();
    let r = run(&g, 4);
    assert!(!r.brackets.is_zero_in_arity(3));
    assert!(r.verify_master(&g).passed());
    assert!(r.check_sh_lie().passed());
    let names: Vec<&str> = r.gens().basis().iter().map(|(l, _)| l.as_str()).collect();
    let pos = |l: &str| names.iter().position(|n| *n == l).unwrap();
    let l3 = r.brackets.eval(&[pos("sx"), pos("sy"), pos("sz")]);
    assert_eq!(l3.keys().copied().collect::<Vec<_>>(), vec![pos("sq")]);
    assert_eq!(l3.values().next().unwrap().clone(), rat(1));
}

#[test]
fn degeneration_when_projection_kills_bracket() {
    let g = projection_kills_bracket();
    let r = run(&g, 5);
    let rep = check_projection_degeneration(&g, &r);
    assert!(rep.hypothesis_holds);
    assert_eq!(rep.coderivation_vanishes, Some(true));
    assert!(rep.consistent());
    // τ itself is not linear: the homotopy sees [x,x]
    assert!(r.tau.max_arity() >= 2);
}

#[test]
fn degeneration_when_bracket_vanishes_on_homology() {
    let g = radical_homology();
    let r = run(&g, 5);
    let rep = check_inclusion_degeneration(&g, &r);
    assert!(rep.hypothesis_holds);
    assert_eq!(rep.tau_is_linear, Some(true));
    assert_eq!(rep.coderivation_vanishes, Some(true));
}

#[test]
fn generic_algebra_fails_both_hypotheses() {
    let g = fixtures::sl2();
    let r = run(&g, 3);
    let a = check_projection_degeneration(&g, &r);
    let b = check_inclusion_degeneration(&g, &r);
    assert!(!a.hypothesis_holds && a.higher_components_vanish.is_none());
    assert!(!b.hypothesis_holds && b.tau_is_linear.is_none());
}

#[test]
fn subalgebra_transfer_along_a_summand() {
    let m = projection_kills_bracket();
    let g = m.direct_sum(&fixtures::sl2()).unwrap();
    let vectors: Vec<SparseVec> = (0..m.dim()).map(unit).collect();
    let labels = m.space().basis().iter().map(|(l, _)| l.clone()).collect();
    let (sub, incl) = g.subalgebra(&vectors, labels).unwrap();
    let c = build_contraction(&sub.complex().unwrap());
    let out = subalgebra_transfer(&g, &sub, &incl, &c, 4).unwrap();
    assert!(out.master.passed(), "{:?}", out.master);
    assert!(out.projection_is_universal);
    assert!(out.values_in_subalgebra);
    assert!(out.tau.max_arity() >= 2);
}

#[test]
fn subalgebra_transfer_rejects_surviving_brackets() {
    let g = fixtures::sl2();
    let c = build_contraction(&g.complex().unwrap());
    let incl = hpt_core::graded::GradedMap::identity(g.space().clone());
    assert!(subalgebra_transfer(&g, &g, &incl, &c, 3).is_err());
}

#[test]
fn adjoint_is_a_quasi_isomorphism_on_named_instances() {
    for (name, g) in fixtures::named_instances() {
        let r = run(&g, 3);
        assert!(r.adjoint_is_quasi_isomorphism(&g).unwrap(), "{name}");
    }
}

#[test]
fn identity_contraction_round_trip_on_formal_corpus() {
    for g in fixtures::random_corpus_without_differential(11, 8, 4) {
        let c = Contraction::identity(g.complex().unwrap());
        let r = transfer(&g, &c, 3).unwrap();
        assert_eq!(
            r.coderivation.values(),
            ce_coderivation(&g).filter(|w| w.len() <= 3).values()
        );
        assert_eq!(r.extracted_l2().unwrap().table(), g.table());
    }
}

#[test]
fn bpl_comparison_on_the_massey_instance() {
    let g = massey_l3();
    let r = run(&g, 4);
    let cmp = r.compare_with_perturbation_lemma(&g).unwrap();
    assert!(cmp.contraction_identities);
    assert!(cmp.small_differential_agrees);
    assert!(cmp.inclusion_agrees);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transfer_invariants_on_random_algebras(seed in any::<u64>()) {
        let g = fixtures::random_corpus(seed, 1, 6).remove(0);
        let r = run(&g, 4);
        prop_assert!(r.verify_master(&g).passed(), "{:?}", r.verify_master(&g));
        prop_assert!(r.check_sh_lie().passed());
        let l2 = r.extracted_l2().unwrap();
        prop_assert!(l2.validate().passed());
        let induced = r.induced_bracket(&g).unwrap();
        prop_assert_eq!(l2.table(), induced.table());
        prop_assert!(r.adjoint_intertwines(&g));
        let cmp = r.compare_with_perturbation_lemma(&g).unwrap();
        prop_assert!(cmp.contraction_identities);
        prop_assert!(cmp.small_differential_agrees, "{:?}", cmp);
        prop_assert!(cmp.inclusion_agrees, "{:?}", cmp);
    }
}
