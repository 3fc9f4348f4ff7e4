use std::collections::BTreeMap;
use std::sync::Arc;

use hpt_core::complex::{build_contraction, perturbation_lemma, ChainComplex, Contraction, FilteredPerturbation};
use hpt_core::graded::{GradedMap, GradedSpace};
use hpt_core::scalar::{rat, Rational};
use hpt_core::tensor::{symmetric_coalgebra_contraction, tensor_coalgebra_contraction};
use proptest::prelude::*;

fn space(pairs: &[(&str, i32)]) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::from_pairs(pairs).unwrap())
}

/// A complex `P^{-1}(⊕ acyclic pairs ⊕ cycles)P` from a seed description.
fn conjugated_complex(degrees: &[i32], pairs: &[(usize, usize)], mixing: &[i64]) -> ChainComplex {
    let n = degrees.len();
    let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
    let v = Arc::new(GradedSpace::new(labels.into_iter().zip(degrees.iter().copied()).collect()).unwrap());
    let d0 = GradedMap::from_entries(v.clone(), v.clone(), -1, pairs.iter().map(|&(s, t)| (t, s, rat(1)))).unwrap();
    // unipotent change of basis inside each degree: e_i ↦ e_i + m e_j for j > i of equal degree
    let mut entries = Vec::new();
    let mut k = 0;
    for i in 0..n {
        entries.push((i, i, rat(1)));
        for j in i + 1..n {
            if degrees[i] == degrees[j] {
                entries.push((j, i, rat(mixing[k % mixing.len()])));
                k += 1;
            }
        }
    }
    let p = GradedMap::from_entries(v.clone(), v.clone(), 0, entries).unwrap();
    let p_inv = hpt_core::complex::invert(&p).unwrap();
    ChainComplex::new(p_inv.compose(&d0).unwrap().compose(&p).unwrap()).unwrap()
}

fn arb_complex() -> impl Strategy<Value = ChainComplex> {
    (
        1usize..=7,
        prop::collection::vec(-2i32..=3, 7),
        prop::collection::vec(-2i64..=2, 1..8),
        any::<u64>(),
    )
        .prop_map(|(n, degs, mixing, seed)| {
            // pair off basis elements e_{2k} -> e_{2k+1} when the seed bit is set
            let mut degrees = degs[..n].to_vec();
            let mut pairs = Vec::new();
            let mut i = 0;
            while i + 1 < n {
                if seed >> i & 1 == 1 {
                    degrees[i + 1] = degrees[i] - 1;
                    pairs.push((i, i + 1));
                    i += 2;
                } else {
                    i += 1;
                }
            }
            conjugated_complex(&degrees, &pairs, &mixing)
        })
}

#[test]
fn zero_differential_gives_identity_contraction() {
    let v = space(&[("a", 0), ("b", 1), ("c", 1)]);
    let c = build_contraction(&ChainComplex::zero(v.clone()));
    assert_eq!(c.small().space().basis(), v.basis());
    assert_eq!(c.nabla().columns(), GradedMap::identity(v.clone()).columns());
    assert_eq!(c.pi().columns(), GradedMap::identity(v.clone()).columns());
    assert!(c.h().is_zero());
}

#[test]
fn acyclic_pair_contracts_to_zero() {
    let v = space(&[("x", 1), ("y", 0)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let cx = ChainComplex::new(d).unwrap();
    let c = build_contraction(&cx);
    assert_eq!(c.small().space().dim(), 0);
    // h inverts d on its image: h(y) = -x
    assert_eq!(c.h().entry(0, 1), rat(-1));
    assert!(c.verify().passed());
}

#[test]
fn homology_of_rank_one_degree() {
    // a(1) -> b(0), c(0): homology is one class in degree 0
    let v = space(&[("a", 1), ("b", 0), ("c", 0)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1)), (2, 0, rat(2))]).unwrap();
    let cx = ChainComplex::new(d).unwrap();
    let h = cx.homology();
    assert_eq!(h.dim(), 1);
    assert_eq!(h.degree(0), 0);
    assert_eq!(cx.homology_dims().get(&0), Some(&1));
}

#[test]
fn non_complex_is_rejected() {
    let v = space(&[("x", 1), ("y", 0), ("z", -1)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1)), (2, 1, rat(1))]).unwrap();
    assert!(ChainComplex::new(d).is_err());
}

#[test]
fn symmetric_contraction_on_an_odd_generator() {
    // N = span{x(1), y(0), z(1)} with dx = y; homology spanned by z, odd
    let v = space(&[("x", 1), ("y", 0), ("z", 1)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let c = build_contraction(&ChainComplex::new(d).unwrap());
    let sym = symmetric_coalgebra_contraction(&c, 3).unwrap();
    let r = sym.contraction.verify();
    assert!(r.passed(), "{:?}", r.failures());
    assert_eq!(sym.small_basis.words().len(), 2); // 1 and z
}

#[test]
fn coalgebra_contractions_of_identity_are_identities() {
    let v = space(&[("a", 0), ("b", 1)]);
    let c = Contraction::identity(ChainComplex::zero(v));
    let t = tensor_coalgebra_contraction(&c, 3).unwrap();
    assert!(t.contraction.h().is_zero());
    assert_eq!(
        t.contraction.nabla().columns(),
        GradedMap::identity(t.contraction.big().space().clone()).columns()
    );
    let s = symmetric_coalgebra_contraction(&c, 3).unwrap();
    assert!(s.contraction.h().is_zero());
}

#[test]
fn tensor_contraction_word_length_two() {
    let v = space(&[("x", 1), ("y", 0), ("u", 0)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let c = build_contraction(&ChainComplex::new(d).unwrap());
    let t = tensor_coalgebra_contraction(&c, 2).unwrap();
    assert!(t.contraction.verify().passed());
    let t1 = tensor_coalgebra_contraction(&c, 1).unwrap();
    // word length one reproduces the original homotopy
    assert_eq!(t1.contraction.h().entry(1, 2), c.h().entry(0, 1));
}

#[test]
fn perturbation_lemma_with_zero_perturbation_is_identity() {
    let v = space(&[("x", 1), ("y", 0), ("u", 0)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let cx = ChainComplex::new(d).unwrap();
    let c = build_contraction(&cx);
    let p = FilteredPerturbation::new(&cx, GradedMap::zero(v.clone(), v, -1), vec![1, 1, 1]).unwrap();
    let out = perturbation_lemma(&c, &p).unwrap();
    assert_eq!(out, c);
}

#[test]
fn perturbation_must_lower_filtration() {
    let v = space(&[("x", 1), ("y", 0)]);
    let del = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let cx = ChainComplex::zero(v);
    assert!(FilteredPerturbation::new(&cx, del.clone(), vec![1, 1]).is_err());
    assert!(FilteredPerturbation::new(&cx, del, vec![2, 1]).is_ok());
}

#[test]
fn perturbing_an_identity_contraction_adds_the_perturbation() {
    let v = space(&[("x", 1), ("y", 0)]);
    let del = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(3))]).unwrap();
    let cx = ChainComplex::zero(v);
    let c = Contraction::identity(cx.clone());
    let p = FilteredPerturbation::new(&cx, del.clone(), vec![2, 1]).unwrap();
    let out = perturbation_lemma(&c, &p).unwrap();
    assert_eq!(out.small().d().columns(), del.columns());
    assert!(out.verify().passed());
}

/// `da = b` next to a copy of `{c, e}`; the perturbation `c ↦ b + e` forces the
/// correction `∇'(c) = c − a`, which pins the sign of the perturbation series.
#[test]
fn perturbation_series_sign_is_forced_by_the_chain_map_condition() {
    let v = space(&[("a", 1), ("b", 0), ("c", 1), ("e", 0)]);
    let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
    let cx = ChainComplex::new(d).unwrap();
    let c = build_contraction(&cx);
    assert_eq!(c.small().space().dim(), 2);
    let del = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 2, rat(1)), (3, 2, rat(1))]).unwrap();
    let p = FilteredPerturbation::new(&cx, del, vec![1, 1, 2, 1]).unwrap();
    let out = perturbation_lemma(&c, &p).unwrap();
    assert!(out.verify().passed(), "{:?}", out.verify().failures());
    let small_c = c.small().space().index_of("c").unwrap();
    let image = out.nabla().column(small_c).clone();
    assert_eq!(image, BTreeMap::from([(0, rat(-1)), (2, rat(1))]));
    assert!(!out.small().d().is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesized_contractions_satisfy_all_identities(cx in arb_complex()) {
        let c = build_contraction(&cx);
        let r = c.verify();
        prop_assert!(r.passed(), "{:?}", r.failures());
        let dims: usize = cx.homology_dims().values().sum();
        prop_assert_eq!(c.small().space().dim(), dims);
        // normalization is idempotent
        prop_assert_eq!(c.normalized().unwrap(), c.clone());
        // the suspended contraction is again a contraction
        prop_assert!(c.suspend().verify().passed());
    }

    #[test]
    fn symmetric_contractions_satisfy_all_identities(cx in arb_complex()) {
        prop_assume!(cx.dim() <= 5);
        let c = build_contraction(&cx);
        let sym = symmetric_coalgebra_contraction(&c, 3).unwrap();
        let r = sym.contraction.verify();
        prop_assert!(r.passed(), "{:?}", r.failures());
        let t = tensor_coalgebra_contraction(&c, 2).unwrap();
        prop_assert!(t.contraction.verify().passed());
    }

    #[test]
    fn prescribed_projection_is_honoured(cx in arb_complex(), scale in 1i64..4) {
        let c = build_contraction(&cx);
        let twisted = c.pi().scaled(&Rational::from_integer(scale.into()));
        let c2 = c.with_projection(twisted.clone()).unwrap();
        prop_assert_eq!(c2.pi().columns(), twisted.columns());
        prop_assert!(c2.verify().passed());
    }
}
