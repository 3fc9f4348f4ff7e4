//! Hand-built instances and a seeded random corpus of small dg Lie algebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bv::{BvData, CommutativeAlgebra};
use crate::dglie::DgLieAlgebra;
use crate::error::Result;
use crate::graded::{GradedMap, GradedSpace, SparseVec};
use crate::scalar::{rat, ratio, Rational};

/// Builds a dg Lie algebra from labelled data; panics on malformed literals, so
/// only for hand-checked instances.
pub fn dgla(
    basis: &[(&str, i32)],
    differential: &[(&str, &str, Rational)],
    bracket: &[(&str, &str, &str, Rational)],
) -> DgLieAlgebra {
    try_dgla(basis, differential, bracket).expect("fixture data is well formed")
}

pub fn try_dgla(
    basis: &[(&str, i32)],
    differential: &[(&str, &str, Rational)],
    bracket: &[(&str, &str, &str, Rational)],
) -> Result<DgLieAlgebra> {
    let space = Arc::new(GradedSpace::from_pairs(basis)?);
    let mut d_entries = Vec::new();
    for (s, t, c) in differential {
        d_entries.push((space.require(t)?, space.require(s)?, c.clone()));
    }
    let d = GradedMap::from_entries(space.clone(), space.clone(), -1, d_entries)?;
    let mut b = Vec::new();
    for (x, y, z, c) in bracket {
        b.push((space.require(x)?, space.require(y)?, space.require(z)?, c.clone()));
    }
    DgLieAlgebra::new(space, d, b)
}

/// Abelian algebra with zero differential.
pub fn abelian(basis: &[(&str, i32)]) -> DgLieAlgebra {
    dgla(basis, &[], &[])
}

/// `sl₂` in degree 0: `[h,e] = 2e`, `[h,f] = −2f`, `[e,f] = h`.
pub fn sl2() -> DgLieAlgebra {
    dgla(
        &[("h", 0), ("e", 0), ("f", 0)],
        &[],
        &[
            ("h", "e", "e", rat(2)),
            ("h", "f", "f", rat(-2)),
            ("e", "f", "h", rat(1)),
        ],
    )
}

/// The nonabelian two-dimensional Lie algebra `[a,b] = b`.
pub fn aff2() -> DgLieAlgebra {
    dgla(&[("a", 0), ("b", 0)], &[], &[("a", "b", "b", rat(1))])
}

/// Heisenberg algebra `[x,y] = z`.
pub fn heisenberg() -> DgLieAlgebra {
    dgla(&[("x", 0), ("y", 0), ("z", 0)], &[], &[("x", "y", "z", rat(1))])
}

/// `x, t` odd, `[x,x] = w = dt`, `[t,x] = q`: homology `{x, q}` carries a
/// nonzero ternary bracket `l₃(x,x,x)`.
pub fn massey_l3() -> DgLieAlgebra {
    dgla(
        &[("x", -1), ("w", -2), ("t", -1), ("q", -2)],
        &[("t", "w", rat(1))],
        &[("x", "x", "w", rat(1)), ("t", "x", "q", rat(1))],
    )
}

/// Degree 0 variant: `[x,y] = w = dt`, `[t,z] = q`; homology `{x, y, z, q}`
/// with `l₃(x,y,z)` a nonzero multiple of `q`.
pub fn massey_l3_even() -> DgLieAlgebra {
    dgla(
        &[("x", 0), ("y", 0), ("z", 0), ("w", 0), ("t", 1), ("q", 1)],
        &[("t", "w", rat(1))],
        &[("x", "y", "w", rat(1)), ("t", "z", "q", rat(1))],
    )
}

/// Every bracket is a boundary, so the bracket followed by the projection to
/// homology vanishes although the homotopy sees a nonzero bracket.
pub fn projection_kills_bracket() -> DgLieAlgebra {
    dgla(
        &[("x", -1), ("w", -2), ("t", -1)],
        &[("t", "w", rat(1))],
        &[("x", "x", "w", rat(1))],
    )
}

/// Homology `{z}` sits in the bracket's radical while `[u,v] = z` is nonzero.
pub fn radical_homology() -> DgLieAlgebra {
    dgla(
        &[("u", 1), ("v", 1), ("p", 0), ("q", 0), ("z", 2)],
        &[("u", "p", rat(1)), ("v", "q", rat(1))],
        &[("u", "v", "z", rat(1))],
    )
}

/// `γ` odd with `[γ,γ] = w` and `dγ = ½w`, plus a central `a`.
pub fn twisting_example() -> DgLieAlgebra {
    dgla(
        &[("g", -1), ("w", -2), ("a", 0)],
        &[("g", "w", ratio(1, 2))],
        &[("g", "g", "w", rat(1))],
    )
}

/// `[γ, a] = b` with zero differential; `γ` is a solution and twisting changes `d`.
pub fn twisting_example_nonabelian() -> DgLieAlgebra {
    dgla(&[("g", -1), ("a", 0), ("b", -1)], &[], &[("g", "a", "b", rat(1))])
}

/// `sl₂` with one Jacobi constant mutated.
pub fn broken_jacobi() -> DgLieAlgebra {
    dgla(
        &[("h", 0), ("e", 0), ("f", 0)],
        &[],
        &[
            ("h", "e", "e", rat(3)),
            ("h", "f", "f", rat(-2)),
            ("e", "f", "h", rat(1)),
        ],
    )
}

/// Small commutative dg algebras used as tensor factors: basis with degrees,
/// differential and products, the unit first.
#[derive(Clone, Debug)]
struct CommutativeFactor {
    basis: Vec<(String, i32)>,
    d: Vec<(usize, usize)>,
    products: Vec<(usize, usize, usize)>,
}

fn factor_unit() -> CommutativeFactor {
    CommutativeFactor {
        basis: vec![("1".into(), 0)],
        d: vec![],
        products: vec![],
    }
}

fn factor_dual_numbers(deg: i32) -> CommutativeFactor {
    CommutativeFactor {
        basis: vec![("1".into(), 0), ("e".into(), deg)],
        d: vec![],
        products: vec![],
    }
}

fn factor_acyclic(deg: i32) -> CommutativeFactor {
    CommutativeFactor {
        basis: vec![("1".into(), 0), ("x".into(), deg), ("y".into(), deg - 1)],
        d: vec![(1, 2)],
        products: vec![],
    }
}

impl CommutativeFactor {
    fn product(&self, i: usize, j: usize) -> Option<usize> {
        if i == 0 {
            return Some(j);
        }
        if j == 0 {
            return Some(i);
        }
        self.products.iter().find(|p| (p.0, p.1) == (i, j)).map(|p| p.2)
    }
}

/// `L ⊗ A` for a Lie algebra `L` in degree 0 and a graded commutative dg algebra `A`.
fn tensor_block(prefix: &str, lie: &DgLieAlgebra, a: &CommutativeFactor) -> DgLieAlgebra {
    let mut basis = Vec::new();
    for (l, _) in lie.space().basis() {
        for (x, deg) in &a.basis {
            basis.push((format!("{prefix}{l}.{x}"), *deg));
        }
    }
    let na = a.basis.len();
    let space = Arc::new(GradedSpace::new(basis).expect("labels are distinct"));
    let idx = |l: usize, x: usize| l * na + x;
    let mut d = Vec::new();
    for l in 0..lie.dim() {
        for &(s, t) in &a.d {
            d.push((idx(l, t), idx(l, s), rat(1)));
        }
    }
    let d = GradedMap::from_entries(space.clone(), space.clone(), -1, d).expect("differential is homogeneous");
    let mut entries = Vec::new();
    for i in 0..lie.dim() {
        for j in 0..lie.dim() {
            let b = lie.bracket(i, j);
            for x in 0..na {
                for y in 0..na {
                    if let Some(z) = a.product(x, y) {
                        for (&k, c) in &b {
                            if idx(i, x) <= idx(j, y) {
                                entries.push((idx(i, x), idx(j, y), idx(k, z), c.clone()));
                            }
                        }
                    }
                }
            }
        }
    }
    DgLieAlgebra::new(space, d, entries).expect("tensor block is well formed")
}

fn relabel(prefix: &str, g: &DgLieAlgebra) -> DgLieAlgebra {
    let basis = g
        .space()
        .basis()
        .iter()
        .map(|(l, d)| (format!("{prefix}{l}"), *d))
        .collect();
    let space = Arc::new(GradedSpace::new(basis).expect("labels are distinct"));
    let d = g.d().with_spaces(space.clone(), space.clone()).expect("same layout");
    DgLieAlgebra::from_table(space, d, g.table().clone(), Vec::new()).expect("same structure")
}

/// One random building block of dimension at most `budget`.
fn random_block(rng: &mut ChaCha8Rng, prefix: &str, budget: usize, allow_differential: bool) -> Option<DgLieAlgebra> {
    let lies: [(fn() -> DgLieAlgebra, usize); 4] = [(|| abelian(&[("l", 0)]), 1), (aff2, 2), (heisenberg, 3), (sl2, 3)];
    for _ in 0..16 {
        let kind = rng.gen_range(0..6);
        let block = match kind {
            0..=2 => {
                let (lie, ldim) = lies[rng.gen_range(0..lies.len())];
                let factor = match rng.gen_range(0..3) {
                    0 => factor_unit(),
                    1 => factor_dual_numbers(rng.gen_range(-2..=3)),
                    _ if allow_differential => factor_acyclic(rng.gen_range(-1..=3)),
                    _ => factor_dual_numbers(rng.gen_range(-2..=3)),
                };
                if ldim * factor.basis.len() > budget {
                    continue;
                }
                tensor_block(prefix, &lie(), &factor)
            }
            3 if allow_differential => {
                let g = if rng.gen_bool(0.5) {
                    massey_l3()
                } else {
                    projection_kills_bracket()
                };
                if g.dim() > budget {
                    continue;
                }
                relabel(prefix, &g)
            }
            4 if allow_differential && budget >= 2 => {
                let deg = rng.gen_range(-1..=3);
                relabel(prefix, &dgla(&[("a", deg), ("b", deg - 1)], &[("a", "b", rat(1))], &[]))
            }
            _ => {
                let deg = rng.gen_range(-2..=3);
                relabel(prefix, &abelian(&[("c", deg)]))
            }
        };
        return Some(block);
    }
    None
}

/// Random invertible change of basis inside each degree (small integer entries).
fn random_basis_change(rng: &mut ChaCha8Rng, space: &Arc<GradedSpace>) -> GradedMap {
    loop {
        let mut cols = vec![SparseVec::new(); space.dim()];
        for n in space.degrees() {
            let idx = space.indices_in_degree(n);
            for &s in &idx {
                for &t in &idx {
                    let x: i64 = if s == t {
                        rng.gen_range(1..=2)
                    } else {
                        rng.gen_range(-1..=1)
                    };
                    if x != 0 {
                        cols[s].insert(t, rat(x));
                    }
                }
            }
        }
        let p = GradedMap::new(space.clone(), space.clone(), 0, cols).expect("degree preserving");
        if crate::complex::invert(&p).is_some() {
            return p;
        }
    }
}

/// A random dg Lie algebra of total dimension `≤ max_dim`, built as a direct
/// sum of standard blocks and conjugated by a random change of basis.
pub fn random_dgla(rng: &mut ChaCha8Rng, max_dim: usize, allow_differential: bool) -> DgLieAlgebra {
    let mut total: Option<DgLieAlgebra> = None;
    let mut k = 0;
    loop {
        let used = total.as_ref().map_or(0, |g| g.dim());
        if used >= max_dim || (used > 0 && rng.gen_bool(0.3)) {
            break;
        }
        let Some(block) = random_block(rng, &format!("b{k}."), max_dim - used, allow_differential) else {
            break;
        };
        k += 1;
        total = Some(match total {
            None => block,
            Some(g) => g.direct_sum(&block).expect("prefixed labels are distinct"),
        });
    }
    let g = total.unwrap_or_else(|| abelian(&[("c", 0)]));
    let p = random_basis_change(rng, g.space());
    g.change_basis(&p).expect("basis change is invertible")
}

/// The seeded corpus used by the property and acceptance checks.
pub fn random_corpus(seed: u64, count: usize, max_dim: usize) -> Vec<DgLieAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dgla(&mut rng, max_dim, true)).collect()
}

/// Corpus with zero differentials (for identity-contraction round trips).
pub fn random_corpus_without_differential(seed: u64, count: usize, max_dim: usize) -> Vec<DgLieAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dgla(&mut rng, max_dim, false)).collect()
}

/// Named engineered instances, for reports and the command line.
pub fn named_instances() -> BTreeMap<&'static str, DgLieAlgebra> {
    BTreeMap::from([
        ("sl2", sl2()),
        ("aff2", aff2()),
        ("heisenberg", heisenberg()),
        ("massey_l3", massey_l3()),
        ("massey_l3_even", massey_l3_even()),
        ("projection_kills_bracket", projection_kills_bracket()),
        ("radical_homology", radical_homology()),
        ("twisting_example", twisting_example()),
    ])
}

/// Builds BV data from labelled, cohomologically graded data: product entries
/// `(x, y, z, c)`, differential and generator entries `(source, target, c)`.
pub fn try_bv(
    basis: &[(&str, i32)],
    unit: Option<&str>,
    product: &[(&str, &str, &str, Rational)],
    differential: &[(&str, &str, Rational)],
    delta: &[(&str, &str, Rational)],
) -> Result<BvData> {
    let space = Arc::new(GradedSpace::from_pairs(basis)?);
    let map = |entries: &[(&str, &str, Rational)], degree: i32| -> Result<GradedMap> {
        let mut e = Vec::new();
        for (s, t, c) in entries {
            e.push((space.require(t)?, space.require(s)?, c.clone()));
        }
        GradedMap::from_entries(space.clone(), space.clone(), degree, e)
    };
    let d = map(differential, 1)?;
    let delta = map(delta, -1)?;
    let mut p = Vec::new();
    for (x, y, z, c) in product {
        p.push((space.require(x)?, space.require(y)?, space.require(z)?, c.clone()));
    }
    let unit = unit.map(|u| space.require(u)).transpose()?;
    BvData::new(CommutativeAlgebra::new(space, Some(d), p, unit)?, delta)
}

pub fn bv(
    basis: &[(&str, i32)],
    unit: Option<&str>,
    product: &[(&str, &str, &str, Rational)],
    differential: &[(&str, &str, Rational)],
    delta: &[(&str, &str, Rational)],
) -> BvData {
    try_bv(basis, unit, product, differential, delta).expect("fixture data is well formed")
}

/// The ground field alone.
pub fn unit_only_bv() -> BvData {
    bv(&[("1", 0)], Some("1"), &[], &[], &[])
}

/// `ℚ[x]/(x³) ⊗ Λ[ξ]` with `|x| = 0`, `|ξ| = 1` and `Δ = x ∂_x ∂_ξ`, so that
/// `Δ(xᵃξ) = a xᵃ`; the generated bracket is `[xᵃ, xᵇξ] = a xᵃ⁺ᵇ` and
/// `[xᵃξ, xᵇξ] = (a − b) xᵃ⁺ᵇξ`.
pub fn euler_bv() -> BvData {
    let one = rat(1);
    bv(
        &[("1", 0), ("x", 0), ("x2", 0), ("ξ", 1), ("xξ", 1), ("x2ξ", 1)],
        Some("1"),
        &[
            ("x", "x", "x2", one.clone()),
            ("x", "ξ", "xξ", one.clone()),
            ("x", "xξ", "x2ξ", one.clone()),
            ("x2", "ξ", "x2ξ", one.clone()),
        ],
        &[],
        &[("xξ", "x", one.clone()), ("x2ξ", "x2", rat(2))],
    )
}

/// A weak differential BV algebra satisfying the formality predicate, with a
/// nonzero generated bracket: `uv = b`, `Δa = c`, `Δb = −e`, `da = b`, `dc = e`,
/// hence `[u,v] = e`; `ker Δ = {1,u,v,c,e}`, all three homologies `{1,u,v}`.
pub fn engineered_dbv() -> BvData {
    bv(
        &[("1", 0), ("u", 1), ("v", 2), ("a", 2), ("b", 3), ("c", 1), ("e", 2)],
        Some("1"),
        &[("u", "v", "b", rat(1))],
        &[("a", "b", rat(1)), ("c", "e", rat(1))],
        &[("a", "c", rat(1)), ("b", "e", rat(-1))],
    )
}

/// The engineered instance with `dc = 2e`, so that `[d,Δ](a) = e ≠ 0`.
pub fn dbv_commutator_mutation() -> BvData {
    bv(
        &[("1", 0), ("u", 1), ("v", 2), ("a", 2), ("b", 3), ("c", 1), ("e", 2)],
        Some("1"),
        &[("u", "v", "b", rat(1))],
        &[("a", "b", rat(1)), ("c", "e", rat(2))],
        &[("a", "c", rat(1)), ("b", "e", rat(-1))],
    )
}

/// `Δp = q = dr`: the `d`-class of `p` has no representative in `ker Δ`, so the
/// formality predicate fails.
pub fn dbv_failing_lemma() -> BvData {
    bv(
        &[("1", 0), ("r", 1), ("q", 2), ("p", 3)],
        Some("1"),
        &[],
        &[("r", "q", rat(1))],
        &[("p", "q", rat(1))],
    )
}

/// `Δp = q`, `Δq = r`: a generator with `ΔΔ ≠ 0`.
pub fn inexact_bv() -> BvData {
    bv(
        &[("1", 0), ("r", 0), ("q", 1), ("p", 2)],
        Some("1"),
        &[],
        &[],
        &[("p", "q", rat(1)), ("q", "r", rat(1))],
    )
}

/// `Δ(1) ≠ 0` is impossible in degree −1 with a unit in degree 0 unless
/// something sits in degree −1: `Δ1 = m`.
pub fn unit_not_killed_bv() -> BvData {
    bv(&[("m", -1), ("1", 0)], Some("1"), &[], &[], &[("1", "m", rat(1))])
}

pub fn named_bv_instances() -> BTreeMap<&'static str, BvData> {
    BTreeMap::from([
        ("unit_only", unit_only_bv()),
        ("euler", euler_bv()),
        ("engineered", engineered_dbv()),
    ])
}
