//! Deformation-theoretic read-outs of a transferred structure: the truncated
//! Maurer–Cartan equations on `H¹`, formality detection, and the family of
//! Massey-product perturbations on the cohomology of a wedge of spheres.
//!
//! Cohomological degree `p` is homological degree `−p` throughout, so `H¹` is
//! the homological degree `−1` part and `H²` the degree `−2` part.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bv::CommutativeAlgebra;
use crate::error::{Error, Result};
use crate::freelie::{free_lie_dimension, left_normed_rank, wedge_of_spheres};
use crate::graded::{GradedSpace, SparseVec};
use crate::linalg::Matrix;
use crate::scalar::{format_rational, rat, sign, Rational};
use crate::symco::{Cochain, LInfinityStructure, ShLieReport, SymBasis, TruncatedSymCoalgebra};
use crate::transfer::TransferResult;

/// A polynomial with rational coefficients, keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn add_term(&mut self, exponents: Vec<u32>, c: Rational) {
        let e = self.terms.entry(exponents.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exponents);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms.get(exponents).cloned().unwrap_or_else(Rational::zero)
    }

    /// The homogeneous part of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == k)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn total_degrees(&self) -> Vec<u32> {
        let mut out: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Human-readable form using the given variable names.
    pub fn format(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        // by total degree, then with the first variable's power decreasing
        let mut ordered: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        ordered.sort_by_key(|(e, _)| (e.iter().sum::<u32>(), std::cmp::Reverse((*e).clone())));
        let mut parts = Vec::new();
        for (e, c) in ordered {
            let mono: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                parts.push(format_rational(c));
            } else if c.is_one() {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("{}*{}", format_rational(c), mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

/// The truncated Maurer–Cartan equations `Σ_{k≤N} (1/k!) l_k(η,…,η) = 0` for
/// `η = Σ t_i e_i ∈ H¹`, one equation per basis element of `H²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MCVariety {
    pub order: usize,
    /// labels of the `H¹` basis, the coordinates `t_i`
    pub coordinates: Vec<String>,
    /// labels of the `H²` basis, one equation each
    pub targets: Vec<String>,
    pub equations: Vec<Polynomial>,
    /// for each basis element `a` of `H⁰`, the matrix of `l₂(a, −)` on `H¹`
    pub h0_action: Vec<(String, Matrix)>,
}

impl MCVariety {
    /// True when no equation survives: the variety is all of `H¹`.
    pub fn is_unobstructed(&self) -> bool {
        self.equations.iter().all(Polynomial::is_zero)
    }

    /// The order-`k` parts of all equations.
    pub fn order_part(&self, k: u32) -> Vec<Polynomial> {
        self.equations.iter().map(|p| p.homogeneous_part(k)).collect()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        self.equations.iter().all(|p| p.eval(point).is_zero())
    }
}

impl fmt::Display for MCVariety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = (1..=self.coordinates.len()).map(|i| format!("t{i}")).collect();
        for (label, p) in self.targets.iter().zip(&self.equations) {
            writeln!(f, "[{label}] {} = 0", p.format(&vars))?;
        }
        Ok(())
    }
}

/// Multi-indices of `n` variables with total degree `k`, in lexicographic order.
fn exponent_vectors(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return if k == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=k).rev() {
        for mut rest in exponent_vectors(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(k: u32) -> Rational {
    (1..=k as i64).map(rat).product()
}

/// Expands the Maurer–Cartan series of `linf` through order `order`.
///
/// Every `H¹` class is odd as an element of `L`, so `l_k` is symmetric on
/// them and the coefficient of `t^m` in `(1/k!) l_k(η,…,η)` is
/// `l_k(e^m) / ∏ m_i!`.
pub fn mc_equations(linf: &LInfinityStructure, order: usize) -> Result<MCVariety> {
    if order < 2 {
        return Err(Error::Truncation(
            "the Maurer–Cartan series needs order at least 2".into(),
        ));
    }
    let l = linf.underlying();
    if let Some(i) = (0..l.dim()).find(|&i| l.degree(i) > 0) {
        return Err(Error::Precondition(format!(
            "{} sits in cohomological degree {}, below zero",
            l.label(i),
            -l.degree(i)
        )));
    }
    let coords = l.indices_in_degree(-1);
    let targets = l.indices_in_degree(-2);
    let position: BTreeMap<usize, usize> = targets.iter().enumerate().map(|(p, &t)| (t, p)).collect();
    let mut equations = vec![Polynomial::zero(); targets.len()];
    for k in 1..=order as u32 {
        for m in exponent_vectors(coords.len(), k) {
            let args: Vec<usize> = m
                .iter()
                .zip(&coords)
                .flat_map(|(&e, &c)| std::iter::repeat_n(c, e as usize))
                .collect();
            let value = linf.eval(&args);
            if value.is_empty() {
                continue;
            }
            let weight: Rational = m.iter().map(|&e| factorial(e)).product::<Rational>().recip();
            for (t, c) in value {
                equations[position[&t]].add_term(m.clone(), c * &weight);
            }
        }
    }
    let h0_action = l
        .indices_in_degree(0)
        .into_iter()
        .map(|a| {
            let mut mat = Matrix::zeros(coords.len(), coords.len());
            for (j, &c) in coords.iter().enumerate() {
                for (t, x) in linf.eval(&[a, c]) {
                    if let Some(i) = coords.iter().position(|&s| s == t) {
                        mat.set(i, j, x);
                    }
                }
            }
            (l.label(a).to_string(), mat)
        })
        .collect();
    Ok(MCVariety {
        order,
        coordinates: coords.iter().map(|&i| l.label(i).to_string()).collect(),
        targets: targets.iter().map(|&i| l.label(i).to_string()).collect(),
        equations,
        h0_action,
    })
}

/// Formality verdicts for a coderivation on `Σ^c[sH]` over zero differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityReport {
    pub truncation: usize,
    /// `(n, formal)`: whether every `𝒟^b`, `b ≥ 2`, vanishes on words of length `≤ n`
    pub per_truncation: Vec<(usize, bool)>,
    /// the least `b ≥ 2` with `𝒟^b ≠ 0` (a component on words of length `b + 1`)
    pub witness: Option<usize>,
    /// all `b ≥ 2` with `𝒟^b ≠ 0`
    pub nonzero_components: Vec<usize>,
}

impl FormalityReport {
    pub fn formal(&self) -> bool {
        self.witness.is_none()
    }

    /// The verdict at truncation `n ≤ truncation`.
    pub fn formal_at(&self, n: usize) -> Option<bool> {
        self.per_truncation.iter().find(|(m, _)| *m == n).map(|(_, f)| *f)
    }
}

/// Reads off which higher components of `coderivation` survive, up to words of
/// length `truncation`.
pub fn formality_report(coderivation: &Cochain, truncation: usize) -> FormalityReport {
    let nonzero_components: Vec<usize> = coderivation
        .arities()
        .into_iter()
        .filter(|&n| n >= 3 && n <= truncation && !coderivation.component(n).is_zero())
        .map(|n| n - 1)
        .collect();
    let witness = nonzero_components.first().copied();
    let per_truncation = (2..=truncation)
        .map(|n| (n, witness.is_none_or(|b| b + 1 > n)))
        .collect();
    FormalityReport {
        truncation,
        per_truncation,
        witness,
        nonzero_components,
    }
}

/// [`formality_report`] for the coderivation of a transfer.
pub fn transfer_formality(result: &TransferResult) -> FormalityReport {
    formality_report(&result.coderivation, result.truncation)
}

/// Dimension of the space of degree-`degree` derivations `D` of `alg`
/// (`D(ab) = D(a)b + (−1)^{|D||a|} a D(b)`); the differential is ignored.
pub fn derivation_dimension(alg: &CommutativeAlgebra, degree: i32) -> usize {
    let space = alg.space();
    let n = space.dim();
    // unknown D_{ij}: coefficient of e_i in D(e_j)
    let mut unknowns = BTreeMap::new();
    for j in 0..n {
        for i in space.indices_in_degree(space.degree(j) + degree) {
            let next = unknowns.len();
            unknowns.insert((i, j), next);
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            // coefficient of e_t in D(e_a e_b) − D(e_a) e_b − ± e_a D(e_b)
            let mut eq: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
            let mut add = |t: usize, u: usize, c: Rational| {
                eq.entry(t).or_insert_with(|| vec![Rational::zero(); unknowns.len()])[u] += c;
            };
            for (k, c) in alg.mul(a, b) {
                for (&(i, _), &u) in unknowns.iter().filter(|((_, j), _)| *j == k) {
                    add(i, u, c.clone());
                }
            }
            for (&(i, _), &u) in unknowns.iter().filter(|((_, j), _)| *j == a) {
                for (t, c) in alg.mul(i, b) {
                    add(t, u, -c);
                }
            }
            let s = sign(degree as i64 * space.degree(a) as i64);
            for (&(i, _), &u) in unknowns.iter().filter(|((_, j), _)| *j == b) {
                for (t, c) in alg.mul(a, i) {
                    add(t, u, -(c * &s));
                }
            }
            rows.extend(eq.into_values());
        }
    }
    if unknowns.is_empty() {
        return 0;
    }
    unknowns.len() - Matrix::from_rows(unknowns.len(), &rows).rank()
}

/// A homogeneous higher operation `θ_k: H^{⊗(k+2)} → H`, recorded as the
/// bracket `l_{k+2}` on `L = H̄` (homological degree `−p` for `H^p`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyPerturbation {
    pub arity: usize,
    /// canonical argument words and their values
    pub values: BTreeMap<Vec<usize>, SparseVec>,
}

impl MasseyPerturbation {
    /// The index `k` in `θ_k`.
    pub fn k(&self) -> usize {
        self.arity - 2
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(SparseVec::is_empty)
    }
}

/// One coordinate of the bracket carrier: `l_k(word) ∋ output`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyParameter {
    pub word: Vec<usize>,
    pub output: usize,
}

/// Perturbations of the zero structure on the cohomology of a wedge of spheres,
/// all positive-degree products being zero.
///
/// Two spaces are counted. The perturbation space proper is read on the
/// homotopy side: the cell of `S^n` may attach along any bracket of length
/// `k ≥ 2` in the free Lie algebra on the lower spheres, in degree `n − 2`. The
/// carrier is the space of `l_k`-coordinates on `H̄` with the same degrees,
/// which realizes perturbations as `L∞` structures; it is graded symmetric
/// rather than Lie, so its size agrees with the perturbation space only in
/// special cases (such as two degree-3 classes at arity 5).
#[derive(Clone, Debug)]
pub struct MasseyFamily {
    pub spheres: Vec<u32>,
    pub order: usize,
    /// `H*(X)` with unit `1` and one class `a_j` of degree `n_j` per sphere
    pub cohomology: CommutativeAlgebra,
    /// `H̄` regraded homologically, the carrier of the brackets
    pub reduced: Arc<GradedSpace>,
    /// per sphere and bracket length `2..=order`: attaching classes
    pub attaching: Vec<BTreeMap<usize, usize>>,
    /// coordinates of the `L∞` carrier, arity by arity
    pub carrier: Vec<MasseyParameter>,
    /// dimension of `Aut(H)`, as the degree-0 derivations of `H`
    pub automorphism_dimension: usize,
    /// degree-preserving decomposable images of the generators, lengths `2..=order`
    pub nonlinear_automorphisms: usize,
}

/// The perturbation family of `S^{n₁} ∨ … ∨ S^{n_r}` through arity `order`.
pub fn massey_family(spheres: &[u32], order: usize) -> Result<MasseyFamily> {
    if let Some(n) = spheres.iter().find(|&&n| n < 2) {
        return Err(Error::Precondition(format!("sphere dimension {n} is below 2")));
    }
    if order < 2 {
        return Err(Error::Truncation("the perturbation order must be at least 2".into()));
    }
    let mut basis = vec![("1".to_string(), 0)];
    basis.extend(
        spheres
            .iter()
            .enumerate()
            .map(|(j, &n)| (format!("a{}", j + 1), n as i32)),
    );
    let cohomology = CommutativeAlgebra::new(Arc::new(GradedSpace::new(basis)?), None, [], Some(0))?;
    let reduced = Arc::new(GradedSpace::new(
        spheres
            .iter()
            .enumerate()
            .map(|(j, &n)| (format!("a{}", j + 1), -(n as i32)))
            .collect(),
    )?);
    let gens = Arc::new(reduced.suspend());
    let words = SymBasis::new(gens.clone(), order);
    let mut carrier = Vec::new();
    for w in words.words().iter().filter(|w| w.len() >= 2) {
        let deg = w.degree(&gens);
        for out in 0..gens.dim() {
            if gens.degree(out) == deg - 1 {
                carrier.push(MasseyParameter {
                    word: w.factors().to_vec(),
                    output: out,
                });
            }
        }
    }
    let mut attaching = Vec::new();
    let mut nonlinear_automorphisms = 0;
    for &n in spheres {
        let lower: Vec<i32> = spheres.iter().filter(|&&m| m < n).map(|&m| m as i32 - 1).collect();
        let mut by_length = BTreeMap::new();
        for k in 2..=order {
            let c = free_lie_dimension(&lower, n as i32 - 2, k);
            if c > 0 {
                by_length.insert(k, c);
            }
            nonlinear_automorphisms += free_lie_dimension(&lower, n as i32 - 1, k);
        }
        attaching.push(by_length);
    }
    let automorphism_dimension = derivation_dimension(&cohomology, 0);
    Ok(MasseyFamily {
        spheres: spheres.to_vec(),
        order,
        cohomology,
        reduced,
        attaching,
        carrier,
        automorphism_dimension,
        nonlinear_automorphisms,
    })
}

impl MasseyFamily {
    pub fn parameter_dimension(&self) -> usize {
        self.attaching.iter().flat_map(|m| m.values()).sum()
    }

    pub fn parameters_by_arity(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (&k, &c) in self.attaching.iter().flatten() {
            *out.entry(k).or_insert(0) += c;
        }
        out
    }

    pub fn carrier_dimension(&self) -> usize {
        self.carrier.len()
    }

    pub fn carrier_by_arity(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for p in &self.carrier {
            *out.entry(p.word.len()).or_insert(0) += 1;
        }
        out
    }

    /// `dim(parameters) − dim Aut(H)`: a positive gap means the perturbations
    /// cannot all be identified by automorphisms.
    pub fn dimension_gap(&self) -> i64 {
        self.parameter_dimension() as i64 - self.automorphism_dimension as i64
    }

    /// A fixed nonzero carrier vector drawn from `seed`, entries in `−3..=3`.
    pub fn seeded_theta(&self, seed: u64) -> Vec<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut theta: Vec<Rational> = (0..self.carrier_dimension())
            .map(|_| rat(rng.gen_range(-3..=3)))
            .collect();
        // a zero first entry is replaced so that the vector is never zero
        if let Some(first) = theta.first_mut() {
            if first.is_zero() {
                *first = rat(1);
            }
        }
        theta
    }

    fn check_theta(&self, theta: &[Rational]) -> Result<()> {
        if theta.len() != self.carrier_dimension() {
            return Err(Error::DegreeMismatch(format!(
                "expected {} carrier coordinates, got {}",
                self.carrier_dimension(),
                theta.len()
            )));
        }
        Ok(())
    }

    /// The perturbation for `theta`, split by arity.
    pub fn perturbations(&self, theta: &[Rational]) -> Result<Vec<MasseyPerturbation>> {
        self.check_theta(theta)?;
        let mut by_arity: BTreeMap<usize, BTreeMap<Vec<usize>, SparseVec>> = BTreeMap::new();
        for (p, x) in self.carrier.iter().zip(theta) {
            let v = by_arity
                .entry(p.word.len())
                .or_default()
                .entry(p.word.clone())
                .or_default();
            crate::graded::add_entry(v, p.output, x.clone());
        }
        Ok(by_arity
            .into_iter()
            .map(|(arity, values)| MasseyPerturbation { arity, values })
            .collect())
    }

    /// The perturbed coderivation on `Σ^c[sH̄]`: `θ` placed directly as the
    /// components of the coderivation, so parameter coordinates are
    /// coefficients of `𝒟`.
    pub fn coderivation(&self, theta: &[Rational]) -> Result<Cochain> {
        self.check_theta(theta)?;
        let gens = Arc::new(self.reduced.suspend());
        let mut q = Cochain::zero(gens.clone(), gens, -1);
        for (p, x) in self.carrier.iter().zip(theta) {
            let w = crate::symco::SymWord::canonical(q.source(), &p.word)
                .expect("parameter words are canonical")
                .0;
            let mut v = q.value(&w);
            crate::graded::add_entry(&mut v, p.output, x.clone());
            q.set(w, v)?;
        }
        Ok(q)
    }

    /// The brackets `l_k` of the perturbed structure on `H̄`.
    pub fn structure(&self, theta: &[Rational]) -> Result<LInfinityStructure> {
        Ok(LInfinityStructure::from_coderivation(&self.coderivation(theta)?))
    }

    pub fn coalgebra(&self, theta: &[Rational]) -> Result<TruncatedSymCoalgebra> {
        TruncatedSymCoalgebra::new(Arc::new(self.reduced.suspend()), self.order, self.coderivation(theta)?)
    }
}

/// Read-out of the wedge `S³ ∨ S³ ∨ S¹²` with a 5-ary perturbation.
#[derive(Clone, Debug)]
pub struct MorganReport {
    pub parameter_dimension: usize,
    /// coordinates of the quintic `L∞` carrier that realizes the perturbations
    pub carrier_dimension: usize,
    pub automorphism_dimension: usize,
    pub nonlinear_automorphisms: usize,
    pub dimension_gap: i64,
    /// length-5 part of the free Lie algebra on two degree-2 generators, from
    /// its Lyndon basis and from the rank of all left-normed brackets
    pub free_lie_length5: usize,
    pub free_lie_cross_check: usize,
    pub theta_is_zero: bool,
    pub sh_lie: ShLieReport,
    /// arities whose bracket is nonzero
    pub nonzero_brackets: Vec<usize>,
    pub formality: FormalityReport,
    pub conclusion: String,
}

impl MorganReport {
    pub fn lower_brackets_vanish(&self) -> bool {
        self.nonzero_brackets.iter().all(|&k| k >= 5)
    }

    pub fn quintic_bracket_nonzero(&self) -> bool {
        self.nonzero_brackets.contains(&5)
    }
}

pub const MORGAN_SPHERES: [u32; 3] = [3, 3, 12];

/// The wedge `S³ ∨ S³ ∨ S¹²` perturbed by `theta` (six coordinates of the
/// quintic operation), truncated at word length `order ≥ 5`.
pub fn morgan_example(theta: &[Rational], order: usize) -> Result<(MasseyFamily, MorganReport)> {
    if order < 5 {
        return Err(Error::Truncation(
            "the quintic operation needs word length at least 5".into(),
        ));
    }
    let family = massey_family(&MORGAN_SPHERES, order)?;
    let coalgebra = family.coalgebra(theta)?;
    let lie = wedge_of_spheres(&MORGAN_SPHERES[..2], 5)?;
    let free_lie_length5 = lie.dimension_in_length(5)?;
    let free_lie_cross_check = left_normed_rank(&[2, 2], 5);
    let formality = formality_report(coalgebra.differential(), order);
    let nonzero_brackets = coalgebra.extract_brackets().arities();
    let gap = family.dimension_gap();
    let conclusion = if gap >= 1 {
        format!("the Massey products distinguish at least a {gap}-parameter family")
    } else {
        "the automorphisms may identify every perturbation".to_string()
    };
    let report = MorganReport {
        parameter_dimension: family.parameter_dimension(),
        carrier_dimension: family.carrier_dimension(),
        automorphism_dimension: family.automorphism_dimension,
        nonlinear_automorphisms: family.nonlinear_automorphisms,
        dimension_gap: gap,
        free_lie_length5,
        free_lie_cross_check,
        theta_is_zero: theta.iter().all(Zero::is_zero),
        sh_lie: coalgebra.check_sh_lie(),
        nonzero_brackets,
        formality,
        conclusion,
    };
    Ok((family, report))
}

/// An `L∞` structure on `H¹ ⊕ H²` (`rank` coordinates, one obstruction class)
/// whose only bracket is `l_arity`, with `l_arity(e^m) = θ_m f` for the
/// exponent vectors `m` of total degree `arity` in lexicographic order.
pub fn single_obstruction_model(rank: usize, arity: usize, theta: &[Rational]) -> Result<LInfinityStructure> {
    let monomials = exponent_vectors(rank, arity as u32);
    if theta.len() != monomials.len() {
        return Err(Error::DegreeMismatch(format!(
            "expected {} coefficients, got {}",
            monomials.len(),
            theta.len()
        )));
    }
    let mut basis: Vec<(String, i32)> = (1..=rank).map(|i| (format!("e{i}"), -1)).collect();
    basis.push(("f".into(), -2));
    let space = Arc::new(GradedSpace::new(basis)?);
    let values = monomials.into_iter().zip(theta).map(|(m, x)| {
        let args: Vec<usize> = m
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        (args, SparseVec::from([(rank, x.clone())]))
    });
    LInfinityStructure::from_brackets(space, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_vectors_count() {
        assert_eq!(exponent_vectors(2, 5).len(), 6);
        assert_eq!(exponent_vectors(3, 2).len(), 6);
        assert_eq!(exponent_vectors(0, 0), vec![Vec::<u32>::new()]);
        assert_eq!(exponent_vectors(2, 1), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn polynomial_parts_and_eval() {
        let mut p = Polynomial::zero();
        p.add_term(vec![2, 0], rat(1));
        p.add_term(vec![1, 4], rat(3));
        assert_eq!(p.total_degrees(), vec![2, 5]);
        assert_eq!(p.eval(&[rat(2), rat(1)]), rat(10));
        p.add_term(vec![2, 0], rat(-1));
        assert_eq!(p.homogeneous_part(2), Polynomial::zero());
        assert_eq!(p.format(&["x".into(), "y".into()]), "3*x*y^4");
    }
}
