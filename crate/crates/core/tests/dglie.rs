use std::sync::Arc;

use hpt_core::dglie::{
    ce_coalgebra, ce_coderivation, cup_bracket, cup_product, is_twisting_cochain, twisted_differential,
    twisted_differential_algebra, universal_twisting_cochain, DgAlgebra, DgLieAlgebra, TwistingTarget,
};
use hpt_core::fixtures::{self, abelian, aff2, broken_jacobi, massey_l3, sl2};
use hpt_core::graded::{unit, GradedMap, GradedSpace, SparseVec};
use hpt_core::scalar::{rat, ratio, sign};
use hpt_core::symco::{Cochain, SymBasis, SymVec, SymWord};
use proptest::prelude::*;

fn word(gens: &GradedSpace, letters: &[usize]) -> SymWord {
    SymWord::canonical(gens, letters).unwrap().0
}

#[test]
fn validation_of_standard_algebras() {
    assert!(abelian(&[("a", 0), ("b", 1)]).validate().passed());
    let r = sl2().validate();
    assert!(r.passed(), "{r:?}");
    for g in fixtures::named_instances().values() {
        assert!(g.validate().passed());
    }
}

#[test]
fn broken_jacobi_is_located() {
    let r = broken_jacobi().validate();
    assert!(!r.jacobi());
    assert!(r.antisymmetry());
    assert!(r.leibniz());
    assert!(r.differential_squares_to_zero);
}

#[test]
fn inconsistent_orders_break_antisymmetry() {
    let v = Arc::new(GradedSpace::from_pairs(&[("a", 0), ("b", 0)]).unwrap());
    let d = GradedMap::zero(v.clone(), v.clone(), -1);
    // [a,b] = b and [b,a] = b contradict each other
    let g = DgLieAlgebra::new(v, d, [(0, 1, 1, rat(1)), (1, 0, 1, rat(1))]).unwrap();
    assert!(!g.validate().antisymmetry());
}

#[test]
fn inhomogeneous_bracket_is_rejected() {
    let v = Arc::new(GradedSpace::from_pairs(&[("a", 0), ("b", 1)]).unwrap());
    let d = GradedMap::zero(v.clone(), v.clone(), -1);
    assert!(DgLieAlgebra::new(v, d, [(0, 0, 1, rat(1))]).is_err());
}

#[test]
fn ce_differential_of_abelian_algebra_is_linear() {
    let g = abelian(&[("a", 0), ("b", 2)]);
    assert!(ce_coderivation(&g).is_zero());
}

#[test]
fn ce_differential_of_the_affine_algebra() {
    // sa, sb are odd; sa·sb ↦ −sb, the classical ∂(a∧b) = −[a,b]
    let g = aff2();
    let c = ce_coalgebra(&g, 3).unwrap();
    let w = word(c.gens(), &[0, 1]);
    let out = c.apply(&w);
    assert_eq!(out, SymVec::from([(SymWord::single(1), rat(-1))]));
    assert!(c.check_sh_lie().passed());
}

#[test]
fn ce_coalgebra_detects_broken_jacobi() {
    let r = ce_coalgebra(&broken_jacobi(), 4).unwrap().check_sh_lie();
    assert!(!r.passed());
    assert_eq!(r.first_failure(), Some(3));
    assert!(ce_coalgebra(&sl2(), 4).unwrap().check_sh_lie().passed());
}

#[test]
fn universal_cochain_components() {
    let g = massey_l3();
    let t = universal_twisting_cochain(&g);
    assert_eq!(t.value(&SymWord::single(2)), unit(2));
    assert!(t.get(&SymWord::empty()).is_none());
    assert!(t.component(2).is_zero());
}

#[test]
fn universal_cochain_of_abelian_algebra_is_twisting() {
    let g = abelian(&[("a", 0), ("b", -1)]);
    let t = universal_twisting_cochain(&g);
    let r = is_twisting_cochain(&t, &ce_coderivation(&g), TwistingTarget::Lie(&g), 4).unwrap();
    assert!(r.passed());
}

#[test]
fn perturbed_universal_cochain_fails_at_the_perturbed_length() {
    let g = massey_l3();
    let mut t = universal_twisting_cochain(&g);
    // add a non-cycle value on a word of length two: sx·sx ↦ t
    let sx2 = word(t.source(), &[0, 0]);
    t.set(sx2, unit(2)).unwrap();
    let r = is_twisting_cochain(&t, &ce_coderivation(&g), TwistingTarget::Lie(&g), 3).unwrap();
    assert_eq!(r.first_failure(), Some(2));
}

#[test]
fn self_cup_bracket_on_a_length_two_word() {
    // [τ,τ](sx·sx) = 2[x,x] = 2w for odd x
    let g = massey_l3();
    let t = universal_twisting_cochain(&g);
    let basis = SymBasis::new(t.source().clone(), 2);
    let b = cup_bracket(&t, &t, &g, &basis).unwrap();
    assert_eq!(b.value(&word(t.source(), &[0, 0])), SparseVec::from([(1, rat(2))]));
    let zero = Cochain::zero(t.source().clone(), g.space().clone(), -1);
    assert!(cup_bracket(&t, &zero, &g, &basis).unwrap().is_zero());
}

fn upper_triangular() -> DgAlgebra {
    let v = Arc::new(GradedSpace::from_pairs(&[("e11", 0), ("e12", 0), ("e22", 0)]).unwrap());
    let d = GradedMap::zero(v.clone(), v.clone(), -1);
    DgAlgebra::new(
        v,
        d,
        [
            (0, 0, 0, rat(1)),
            (0, 1, 1, rat(1)),
            (1, 2, 1, rat(1)),
            (2, 2, 2, rat(1)),
        ],
        None,
    )
    .unwrap()
}

#[test]
fn commutator_algebra_gives_an_associative_twisting_cochain() {
    let a = upper_triangular();
    assert!(a.validate().passed());
    let lie = a.commutator_lie().unwrap();
    assert!(lie.validate().passed());
    let t = universal_twisting_cochain(&lie);
    let r = is_twisting_cochain(&t, &ce_coderivation(&lie), TwistingTarget::Algebra(&a), 3).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn counit_is_a_left_unit_for_the_cup_product() {
    let a = {
        let v = Arc::new(GradedSpace::from_pairs(&[("1", 0), ("u", -1), ("v", -2)]).unwrap());
        let d = GradedMap::zero(v.clone(), v.clone(), -1);
        DgAlgebra::new(v, d, [(1, 1, 2, rat(1))], Some(0)).unwrap()
    };
    assert!(a.validate().passed());
    let gens = Arc::new(GradedSpace::from_pairs(&[("p", 0), ("q", 1)]).unwrap());
    let mut eps = Cochain::zero(gens.clone(), a.space().clone(), 0);
    eps.set(SymWord::empty(), unit(0)).unwrap();
    let mut b = Cochain::zero(gens.clone(), a.space().clone(), -1);
    b.set(SymWord::single(0), unit(1)).unwrap();
    b.set(word(&gens, &[0, 1]), SparseVec::from([(0, rat(5))])).unwrap();
    let basis = SymBasis::new(gens.clone(), 3);
    assert_eq!(cup_product(&eps, &b, &a, &basis).unwrap(), b);
    let zero = Cochain::zero(gens, a.space().clone(), -1);
    assert!(cup_product(&b, &zero, &a, &basis).unwrap().is_zero());
}

#[test]
fn twisted_differentials() {
    let g = fixtures::twisting_example();
    assert_eq!(twisted_differential(&SparseVec::new(), &g).unwrap(), *g.d());
    let gamma = unit(0);
    let dg = twisted_differential(&gamma, &g).unwrap();
    assert!(dg.compose(&dg).unwrap().is_zero());
    // a non-solution is refused
    let bad: SparseVec = SparseVec::from([(0, rat(2))]);
    assert!(twisted_differential(&bad, &g).is_err());

    let h = fixtures::twisting_example_nonabelian();
    let dh = twisted_differential(&unit(0), &h).unwrap();
    assert_eq!(dh.column(1), &SparseVec::from([(2, rat(-1))]));

    let ab = abelian(&[("c", -1), ("e", 0)]);
    assert_eq!(twisted_differential(&unit(0), &ab).unwrap(), *ab.d());
}

#[test]
fn twisted_differential_for_an_algebra_target() {
    let v = Arc::new(GradedSpace::from_pairs(&[("1", 0), ("g", -1), ("w", -2)]).unwrap());
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(2, 1, rat(1))]).unwrap();
    let a = DgAlgebra::new(v, d, [(1, 1, 2, rat(1))], Some(0)).unwrap();
    assert!(a.validate().passed());
    let dg = twisted_differential_algebra(&unit(1), &a).unwrap();
    assert!(dg.compose(&dg).unwrap().is_zero());
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ce_coalgebra_squares_to_zero_iff_valid(seed in arb_seed()) {
        let g = fixtures::random_corpus(seed, 1, 5).remove(0);
        prop_assert!(g.validate().passed());
        prop_assert!(ce_coalgebra(&g, 4).unwrap().check_sh_lie().passed());
        // mutate one nonzero structure constant
        if let Some((&(i, j), v)) = g.table().iter().next() {
            let mut table = g.table().clone();
            let k = *v.keys().next().unwrap();
            table.get_mut(&(i, j)).unwrap().insert(k, &v[&k] * rat(3));
            let bad = DgLieAlgebra::from_table(g.space().clone(), g.d().clone(), table, vec![]).unwrap();
            let valid = bad.validate().passed();
            let sh = ce_coalgebra(&bad, 4).unwrap().check_sh_lie().passed();
            prop_assert_eq!(valid, sh);
        }
    }

    #[test]
    fn universal_cochain_is_twisting(seed in arb_seed()) {
        let g = fixtures::random_corpus(seed, 1, 5).remove(0);
        let t = universal_twisting_cochain(&g);
        let r = is_twisting_cochain(&t, &ce_coderivation(&g), TwistingTarget::Lie(&g), 3).unwrap();
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn cup_bracket_is_graded_antisymmetric_and_jacobi(seed in arb_seed(), c in prop::collection::vec(-3i64..=3, 12)) {
        let g = fixtures::random_corpus(seed, 1, 4).remove(0);
        let gens = Arc::new(GradedSpace::from_pairs(&[("p", 0), ("q", 1)]).unwrap());
        let basis = SymBasis::new(gens.clone(), 3);
        // random cochains of degrees −1 and 0 and 1, built from words and homogeneous targets
        let make = |deg: i32, offset: usize| {
            let mut a = Cochain::zero(gens.clone(), g.space().clone(), deg);
            for (n, w) in basis.words().iter().enumerate() {
                let want = w.degree(&gens) + deg;
                let mut v = SparseVec::new();
                for k in g.space().indices_in_degree(want) {
                    let x = c[(n + k + offset) % c.len()];
                    if x != 0 { v.insert(k, rat(x)); }
                }
                if !w.is_empty() { a.set(w.clone(), v).unwrap(); }
            }
            a
        };
        let a = make(-1, 0);
        let b = make(0, 3);
        let e = make(1, 7);
        let ab = cup_bracket(&a, &b, &g, &basis).unwrap();
        let ba = cup_bracket(&b, &a, &g, &basis).unwrap();
        let s = -sign((a.degree() * b.degree()) as i64);
        prop_assert_eq!(ab.clone(), ba.scaled(&s));
        // [a,[b,e]] = [[a,b],e] + (−1)^{|a||b|}[b,[a,e]]
        let lhs = cup_bracket(&a, &cup_bracket(&b, &e, &g, &basis).unwrap(), &g, &basis).unwrap();
        let r1 = cup_bracket(&ab, &e, &g, &basis).unwrap();
        let r2 = cup_bracket(&b, &cup_bracket(&a, &e, &g, &basis).unwrap(), &g, &basis).unwrap();
        let rhs = r1.add_scaled(&r2, &sign((a.degree() * b.degree()) as i64)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_product_is_associative(c in prop::collection::vec(-2i64..=2, 9)) {
        let a = upper_triangular();
        let gens = Arc::new(GradedSpace::from_pairs(&[("p", 0), ("q", 1)]).unwrap());
        let basis = SymBasis::new(gens.clone(), 3);
        let make = |offset: usize| {
            let mut x = Cochain::zero(gens.clone(), a.space().clone(), 0);
            for (n, w) in basis.words().iter().enumerate() {
                if w.degree(&gens) != 0 { continue; }
                let v: SparseVec = (0..3).filter_map(|k| {
                    let y = c[(n + k + offset) % c.len()];
                    (y != 0).then(|| (k, rat(y)))
                }).collect();
                x.set(w.clone(), v).unwrap();
            }
            x
        };
        let (x, y, z) = (make(0), make(2), make(5));
        let l = cup_product(&cup_product(&x, &y, &a, &basis).unwrap(), &z, &a, &basis).unwrap();
        let r = cup_product(&x, &cup_product(&y, &z, &a, &basis).unwrap(), &a, &basis).unwrap();
        prop_assert_eq!(l, r);
    }
}

#[test]
fn half_is_exact() {
    assert_eq!(ratio(1, 2) * rat(2), rat(1));
}
