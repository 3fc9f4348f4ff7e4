//! Free graded Lie algebras on finitely many generators, truncated at a
//! bracket length, realized inside the tensor algebra.
//!
//! For generators of even degree the basis is the Lyndon basis with its
//! standard bracketing; three independent counts are available: Lyndon words,
//! the Witt necklace formula and the rank of all left-normed brackets. Odd
//! generators are accepted, but the basis is then selected from left-normed
//! brackets by rank and the algebra is flagged experimental.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::dglie::DgLieAlgebra;
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace, SparseVec};
use crate::linalg::Matrix;
use crate::scalar::{rat, sign, Rational};

/// An element of the tensor algebra: words in the generator indices.
pub type TensorElement = BTreeMap<Vec<usize>, Rational>;

fn add_term(acc: &mut TensorElement, w: Vec<usize>, c: Rational) {
    let e = acc.entry(w.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&w);
    }
}

fn concat_product(a: &TensorElement, b: &TensorElement) -> TensorElement {
    let mut out = TensorElement::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut w = u.clone();
            w.extend_from_slice(v);
            add_term(&mut out, w, x * y);
        }
    }
    out
}

/// Graded commutator `[a,b] = ab − (−1)^{|a||b|} ba` of homogeneous elements.
pub fn graded_commutator(a: &TensorElement, deg_a: i32, b: &TensorElement, deg_b: i32) -> TensorElement {
    let mut out = concat_product(a, b);
    let s = -sign(deg_a as i64 * deg_b as i64);
    for (w, c) in concat_product(b, a) {
        add_term(&mut out, w, c * &s);
    }
    out
}

/// Lyndon words over `k` letters of length `1..=max_len`, by Duval's algorithm
/// (lexicographic order).
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(w.clone());
        // extend periodically to max_len, then strip trailing maximal letters
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

/// Standard factorization `w = uv` with `v` the longest proper Lyndon suffix.
fn standard_split(w: &[usize]) -> (Vec<usize>, Vec<usize>) {
    for i in 1..w.len() {
        if is_lyndon(&w[i..]) {
            return (w[..i].to_vec(), w[i..].to_vec());
        }
    }
    unreachable!("words of length ≥ 2 have a proper Lyndon suffix")
}

pub fn is_lyndon(w: &[usize]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w[i..] > *w)
}

/// Möbius function by trial division.
fn mobius(mut n: usize) -> i64 {
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            m = -m;
        }
        p += 1;
    }
    if n > 1 {
        m = -m;
    }
    m
}

/// Witt's formula `(1/n) Σ_{d|n} μ(d) k^{n/d}` for the length-`n` part of the
/// free Lie algebra on `k` generators of even degree.
pub fn witt_dimension(k: usize, n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            total += mobius(d) as i128 * (k as i128).pow((n / d) as u32);
        }
    }
    (total / n as i128) as usize
}

/// Dimension of the part of the free graded Lie algebra on generators of the
/// given degrees spanned by brackets of `length` generators with total degree
/// `degree`, by the graded necklace recursion.
///
/// The enveloping algebra is the tensor algebra, and by Poincaré–Birkhoff–Witt
/// `log 1/(1 − g) = Σ_{(D,L)} ℓ(D,L) Σ_k ε(D,k) t^{kD} u^{kL} / k` with
/// `g = u Σ t^{d_i}` and `ε(D,k) = (−1)^{(k+1)D}` (odd classes enter through
/// an exterior factor). Comparing coefficients expresses `ℓ(D,L)` through the
/// coefficient `[t^D] (Σ t^{d_i})^L / L` and the values at proper divisors.
pub fn free_lie_dimension(degrees: &[i32], degree: i32, length: usize) -> usize {
    fn count(degrees: &[i32], degree: i32, length: usize, memo: &mut BTreeMap<(i32, usize), Rational>) -> Rational {
        if length == 0 {
            return Rational::zero();
        }
        if let Some(x) = memo.get(&(degree, length)) {
            return x.clone();
        }
        // coefficient of t^degree in (Σ t^{d_i})^length, by dynamic programming
        let mut ways: BTreeMap<i32, Rational> = BTreeMap::from([(0, rat(1))]);
        for _ in 0..length {
            let mut next: BTreeMap<i32, Rational> = BTreeMap::new();
            for (s, x) in &ways {
                for &d in degrees {
                    *next.entry(s + d).or_insert_with(Rational::zero) += x;
                }
            }
            ways = next;
        }
        let mut value = ways.get(&degree).cloned().unwrap_or_else(Rational::zero) / rat(length as i64);
        for k in 2..=length {
            if length.is_multiple_of(k) && degree % k as i32 == 0 {
                let d = degree / k as i32;
                let eps = sign((k as i64 + 1) * d as i64);
                value -= eps * count(degrees, d, length / k, memo) / rat(k as i64);
            }
        }
        memo.insert((degree, length), value.clone());
        value
    }
    let value = count(degrees, degree, length, &mut BTreeMap::new());
    debug_assert!(value.is_integer() && !value.is_negative());
    value.to_integer().try_into().unwrap_or(0)
}

fn word_degree(degrees: &[i32], w: &[usize]) -> i32 {
    w.iter().map(|&i| degrees[i]).sum()
}

/// The left-normed bracket `[[…[x_{w₁}, x_{w₂}], …], x_{wₙ}]`.
fn left_normed(degrees: &[i32], w: &[usize]) -> TensorElement {
    let mut acc = TensorElement::from([(vec![w[0]], rat(1))]);
    let mut deg = degrees[w[0]];
    for &i in &w[1..] {
        let x = TensorElement::from([(vec![i], rat(1))]);
        acc = graded_commutator(&acc, deg, &x, degrees[i]);
        deg += degrees[i];
    }
    acc
}

fn all_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |i| {
                    let mut v = w.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

/// Coordinates of tensor elements of one length, as dense columns.
fn dense(elements: &[TensorElement], n: usize, k: usize) -> (Vec<Vec<Rational>>, BTreeMap<Vec<usize>, usize>) {
    let index: BTreeMap<Vec<usize>, usize> = all_words(k, n).into_iter().enumerate().map(|(i, w)| (w, i)).collect();
    let cols = elements
        .iter()
        .map(|e| {
            let mut v = vec![Rational::zero(); index.len()];
            for (w, c) in e {
                v[index[w]] = c.clone();
            }
            v
        })
        .collect();
    (cols, index)
}

/// Rank of the span of all left-normed brackets of length `n`: an enumeration
/// of the length-`n` part independent of any basis theorem.
pub fn left_normed_rank(degrees: &[i32], n: usize) -> usize {
    if n == 0 || degrees.is_empty() {
        return 0;
    }
    let k = degrees.len();
    let elements: Vec<TensorElement> = all_words(k, n).iter().map(|w| left_normed(degrees, w)).collect();
    let (cols, index) = dense(&elements, n, k);
    Matrix::from_columns(index.len(), &cols).rank()
}

/// One basis element: its bracket expression, word, degree and tensor image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieWord {
    pub word: Vec<usize>,
    pub label: String,
    pub degree: i32,
    pub element: TensorElement,
}

#[derive(Clone, Debug)]
pub struct FreeGradedLie {
    generators: Arc<GradedSpace>,
    cap: usize,
    basis: Vec<LieWord>,
    experimental: bool,
}

impl FreeGradedLie {
    /// The free graded Lie algebra on `generators` modulo brackets of length `> cap`.
    pub fn new(generators: Arc<GradedSpace>, cap: usize) -> Result<Self> {
        let degrees: Vec<i32> = generators.basis().iter().map(|(_, d)| *d).collect();
        let k = degrees.len();
        let experimental = degrees.iter().any(|d| d % 2 != 0);
        let mut basis = Vec::new();
        if !experimental {
            let mut memo: BTreeMap<Vec<usize>, (String, TensorElement)> = BTreeMap::new();
            let mut words = lyndon_words(k, cap);
            words.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            for w in words {
                let (label, element) = if w.len() == 1 {
                    (
                        generators.label(w[0]).to_string(),
                        TensorElement::from([(w.clone(), rat(1))]),
                    )
                } else {
                    let (u, v) = standard_split(&w);
                    let (lu, eu) = memo[&u].clone();
                    let (lv, ev) = memo[&v].clone();
                    let e = graded_commutator(&eu, word_degree(&degrees, &u), &ev, word_degree(&degrees, &v));
                    (format!("[{lu},{lv}]"), e)
                };
                memo.insert(w.clone(), (label.clone(), element.clone()));
                basis.push(LieWord {
                    degree: word_degree(&degrees, &w),
                    word: w,
                    label,
                    element,
                });
            }
        } else {
            for n in 1..=cap {
                let mut chosen: Vec<TensorElement> = Vec::new();
                for w in all_words(k, n) {
                    let e = left_normed(&degrees, &w);
                    if e.is_empty() {
                        continue;
                    }
                    let mut trial = chosen.clone();
                    trial.push(e.clone());
                    let (cols, index) = dense(&trial, n, k);
                    if Matrix::from_columns(index.len(), &cols).rank() == trial.len() {
                        chosen.push(e.clone());
                        let label = w
                            .iter()
                            .map(|&i| generators.label(i).to_string())
                            .reduce(|acc, l| format!("[{acc},{l}]"))
                            .unwrap_or_default();
                        basis.push(LieWord {
                            degree: word_degree(&degrees, &w),
                            word: w,
                            label,
                            element: e,
                        });
                    }
                }
            }
        }
        Ok(FreeGradedLie {
            generators,
            cap,
            basis,
            experimental,
        })
    }

    pub fn generators(&self) -> &Arc<GradedSpace> {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self) -> &[LieWord] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when some generator has odd degree.
    pub fn is_experimental(&self) -> bool {
        self.experimental
    }

    /// Dimension of the span of brackets of length exactly `n`.
    pub fn dimension_in_length(&self, n: usize) -> Result<usize> {
        if n > self.cap {
            return Err(Error::Truncation(format!(
                "length {n} exceeds the bracket-length cap {}",
                self.cap
            )));
        }
        Ok(self.basis.iter().filter(|b| b.word.len() == n).count())
    }

    pub fn dims_by_length(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.word.len()).or_insert(0) += 1;
        }
        out
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    /// The truncated algebra as a dg Lie algebra with zero differential;
    /// brackets of total length `> cap` are set to zero.
    pub fn as_dglie(&self) -> Result<DgLieAlgebra> {
        let space = Arc::new(GradedSpace::new(
            self.basis.iter().map(|b| (b.label.clone(), b.degree)).collect(),
        )?);
        let k = self.generators.dim();
        let mut by_length: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            by_length.entry(b.word.len()).or_default().push(i);
        }
        let mut solvers = BTreeMap::new();
        for (&n, idx) in &by_length {
            let elements: Vec<TensorElement> = idx.iter().map(|&i| self.basis[i].element.clone()).collect();
            let (cols, index) = dense(&elements, n, k);
            solvers.insert(n, (Matrix::from_columns(index.len(), &cols), index, idx.clone()));
        }
        let mut table = BTreeMap::new();
        for i in 0..self.basis.len() {
            for j in i..self.basis.len() {
                let (a, b) = (&self.basis[i], &self.basis[j]);
                let n = a.word.len() + b.word.len();
                if n > self.cap {
                    continue;
                }
                let e = graded_commutator(&a.element, a.degree, &b.element, b.degree);
                if e.is_empty() {
                    continue;
                }
                let (m, index, idx) = solvers
                    .get(&n)
                    .ok_or_else(|| Error::InvalidStructure("bracket outside the enumerated basis".into()))?;
                let (cols, _) = dense(&[e], n, k);
                debug_assert_eq!(cols[0].len(), index.len());
                let x = m
                    .solve(&cols[0])
                    .ok_or_else(|| Error::InvalidStructure("bracket outside the span of the basis".into()))?;
                let v: SparseVec = x
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(p, c)| (idx[p], c))
                    .collect();
                table.insert((i, j), v);
            }
        }
        let d = GradedMap::zero(space.clone(), space.clone(), -1);
        DgLieAlgebra::from_table(space, d, table, Vec::new())
    }
}

/// The free graded Lie algebra on the desuspended reduced homology of a wedge
/// of spheres `S^{n₁} ∨ … ∨ S^{n_r}`: one generator `x_j` of degree `n_j − 1`.
pub fn wedge_of_spheres(dims: &[u32], cap: usize) -> Result<FreeGradedLie> {
    if let Some(n) = dims.iter().find(|&&n| n < 2) {
        return Err(Error::Precondition(format!("sphere dimension {n} is below 2")));
    }
    if cap == 0 && !dims.is_empty() {
        return Err(Error::Truncation(
            "the bracket-length cap must hold the generators".into(),
        ));
    }
    let basis = dims
        .iter()
        .enumerate()
        .map(|(j, &n)| (format!("x{}", j + 1), n as i32 - 1))
        .collect();
    FreeGradedLie::new(Arc::new(GradedSpace::new(basis)?), cap)
}
