//! The word-length-truncated symmetric coalgebra `Σ^c[V]`.
//!
//! A basis word `v_1 ⋯ v_k` stands for the symmetrised tensor
//! `Σ_σ ε(σ) v_σ(1) ⊗ ⋯ ⊗ v_σ(k)` in `(V^{⊗k})^{Σ_k}`, so the deconcatenation
//! diagonal becomes the unshuffle coproduct. Every operation below works on
//! positional words: repeated even factors are treated as distinct positions
//! and collected afterwards, which produces the correct multiplicities.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{add_entry, add_scaled, GradedMap, GradedSpace, SparseVec};
use crate::scalar::{sign, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymWord(Vec<usize>);

impl SymWord {
    pub fn empty() -> Self {
        SymWord(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        SymWord(vec![i])
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, gens: &GradedSpace) -> i32 {
        self.0.iter().map(|&i| gens.degree(i)).sum()
    }

    /// Puts positional factors in canonical order, returning the Koszul sign
    /// of the reordering, or `None` when an odd factor repeats.
    pub fn canonical(gens: &GradedSpace, factors: &[usize]) -> Option<(SymWord, Rational)> {
        let mut f = factors.to_vec();
        let key = |i: usize| (gens.degree(i), i);
        let mut e = 0i64;
        for i in 1..f.len() {
            let mut j = i;
            while j > 0 && key(f[j - 1]) > key(f[j]) {
                e += gens.degree(f[j - 1]) as i64 * gens.degree(f[j]) as i64;
                f.swap(j - 1, j);
                j -= 1;
            }
        }
        for w in f.windows(2) {
            if w[0] == w[1] && gens.degree(w[0]).rem_euclid(2) == 1 {
                return None;
            }
        }
        Some((SymWord(f), sign(e)))
    }

    pub fn label(&self, gens: &GradedSpace) -> String {
        if self.0.is_empty() {
            return "()".into();
        }
        self.0.iter().map(|&i| gens.label(i)).collect::<Vec<_>>().join("·")
    }

    fn select(&self, mask: u64) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(p, _)| mask >> p & 1 == 1)
            .map(|(_, &i)| i)
            .collect()
    }
}

impl fmt::Display for SymWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Linear combination of symmetric words.
pub type SymVec = BTreeMap<SymWord, Rational>;

pub fn sym_add(acc: &mut SymVec, w: SymWord, x: Rational) {
    if x.is_zero() {
        return;
    }
    match acc.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(x);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn sym_add_scaled(acc: &mut SymVec, v: &SymVec, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (w, x) in v {
        sym_add(acc, w.clone(), x * c);
    }
}

/// Koszul sign exponent of moving the positions selected by `mask` in front of
/// the remaining ones.
fn unshuffle_exponent(gens: &GradedSpace, word: &[usize], mask: u64) -> i64 {
    let mut e = 0i64;
    for (i, &a) in word.iter().enumerate() {
        if mask >> i & 1 == 0 {
            continue;
        }
        for (j, &b) in word.iter().enumerate().take(i) {
            if mask >> j & 1 == 0 {
                e += gens.degree(a) as i64 * gens.degree(b) as i64;
            }
        }
    }
    e
}

/// Graded-commutative product of positional factors, expanded multilinearly.
pub fn sym_product(gens: &GradedSpace, factors: &[SparseVec]) -> SymVec {
    let mut out = SymVec::new();
    let mut chosen = Vec::with_capacity(factors.len());
    fn rec(gens: &GradedSpace, factors: &[SparseVec], chosen: &mut Vec<usize>, coeff: Rational, out: &mut SymVec) {
        if chosen.len() == factors.len() {
            if let Some((w, s)) = SymWord::canonical(gens, chosen) {
                sym_add(out, w, coeff * s);
            }
            return;
        }
        for (&i, x) in &factors[chosen.len()] {
            chosen.push(i);
            rec(gens, factors, chosen, &coeff * x, out);
            chosen.pop();
        }
    }
    rec(gens, factors, &mut chosen, Rational::one(), &mut out);
    out
}

fn unit_vec(i: usize) -> SparseVec {
    crate::graded::unit(i)
}

/// All `(p, k-p)` unshuffles of a word with Koszul signs, duplicates collected.
/// With `reduced` the splittings with an empty side are left out.
pub fn reduced_diagonal(gens: &GradedSpace, w: &SymWord, reduced: bool) -> Vec<(SymWord, SymWord, Rational)> {
    let n = w.len();
    let mut acc: BTreeMap<(SymWord, SymWord), Rational> = BTreeMap::new();
    for mask in 0..(1u64 << n) {
        if reduced && (mask == 0 || mask == (1u64 << n) - 1) {
            continue;
        }
        let left = SymWord(w.select(mask));
        let right = SymWord(w.select(!mask));
        let s = sign(unshuffle_exponent(gens, &w.0, mask));
        let e = acc.entry((left, right)).or_insert_with(Rational::zero);
        *e += s;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((a, b), c)| (a, b, c))
        .collect()
}

/// Basis of `⊕_{k ≤ N} Σ^c_k[V]`, ordered by word length, then canonically.
#[derive(Clone, Debug)]
pub struct SymBasis {
    gens: Arc<GradedSpace>,
    max_len: usize,
    words: Vec<SymWord>,
    index: BTreeMap<SymWord, usize>,
    space: Arc<GradedSpace>,
}

impl SymBasis {
    pub fn new(gens: Arc<GradedSpace>, max_len: usize) -> Self {
        let mut order: Vec<usize> = (0..gens.dim()).collect();
        order.sort_by_key(|&i| (gens.degree(i), i));
        let mut words = Vec::new();
        for len in 0..=max_len {
            let mut cur = Vec::new();
            enumerate(&gens, &order, 0, len, &mut cur, &mut words);
        }
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let space = Arc::new(
            GradedSpace::new(words.iter().map(|w| (w.label(&gens), w.degree(&gens))).collect())
                .expect("distinct words have distinct labels"),
        );
        SymBasis {
            gens,
            max_len,
            words,
            index,
            space,
        }
    }

    pub fn gens(&self) -> &Arc<GradedSpace> {
        &self.gens
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn words(&self) -> &[SymWord] {
        &self.words
    }

    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = &SymWord> {
        self.words.iter().filter(move |w| w.len() == len)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn position(&self, w: &SymWord) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Word length of each basis element, the coaugmentation filtration.
    pub fn filtration(&self) -> Vec<usize> {
        self.words.iter().map(|w| w.len()).collect()
    }

    pub fn to_sparse(&self, v: &SymVec) -> Result<SparseVec> {
        let mut out = SparseVec::new();
        for (w, x) in v {
            let p = self
                .position(w)
                .ok_or_else(|| Error::Truncation(format!("word of length {} exceeds the truncation", w.len())))?;
            add_entry(&mut out, p, x.clone());
        }
        Ok(out)
    }

    pub fn from_sparse(&self, v: &SparseVec) -> SymVec {
        v.iter().map(|(&p, x)| (self.words[p].clone(), x.clone())).collect()
    }

    /// The matrix of a word-level linear operator on the truncated coalgebra.
    pub fn operator(
        &self,
        target: &SymBasis,
        degree: i32,
        mut f: impl FnMut(&SymWord) -> Result<SymVec>,
    ) -> Result<GradedMap> {
        let mut cols = Vec::with_capacity(self.words.len());
        for w in &self.words {
            cols.push(target.to_sparse(&f(w)?)?);
        }
        GradedMap::new(self.space.clone(), target.space.clone(), degree, cols)
    }
}

fn enumerate(
    gens: &GradedSpace,
    order: &[usize],
    start: usize,
    remaining: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<SymWord>,
) {
    if remaining == 0 {
        out.push(SymWord(cur.clone()));
        return;
    }
    for r in start..order.len() {
        let g = order[r];
        let odd = gens.degree(g).rem_euclid(2) == 1;
        cur.push(g);
        enumerate(gens, order, if odd { r + 1 } else { r }, remaining - 1, cur, out);
        cur.pop();
    }
}

/// A linear map `Σ^c[V] → W` given on basis words; the carrier of twisting
/// cochains and of coderivation/morphism components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    degree: i32,
    values: BTreeMap<SymWord, SparseVec>,
}

impl Cochain {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i32) -> Self {
        Cochain {
            source,
            target,
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Sets the value on a canonical word, checking homogeneity.
    pub fn set(&mut self, w: SymWord, mut v: SparseVec) -> Result<()> {
        v.retain(|_, x| !x.is_zero());
        let want = w.degree(&self.source) + self.degree;
        for &t in v.keys() {
            if t >= self.target.dim() || self.target.degree(t) != want {
                return Err(Error::Inhomogeneous {
                    target: self
                        .target
                        .label(t.min(self.target.dim().saturating_sub(1)))
                        .to_string(),
                    input: w.label(&self.source),
                    degree: self.degree,
                });
            }
        }
        if v.is_empty() {
            self.values.remove(&w);
        } else {
            self.values.insert(w, v);
        }
        Ok(())
    }

    pub fn get(&self, w: &SymWord) -> Option<&SparseVec> {
        self.values.get(w)
    }

    pub fn value(&self, w: &SymWord) -> SparseVec {
        self.values.get(w).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> &BTreeMap<SymWord, SparseVec> {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn eval(&self, v: &SymVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (w, x) in v {
            if let Some(val) = self.values.get(w) {
                add_scaled(&mut out, val, x);
            }
        }
        out
    }

    /// Value on a positional (not necessarily canonical) factor list.
    pub fn eval_positional(&self, factors: &[usize]) -> SparseVec {
        match SymWord::canonical(&self.source, factors) {
            Some((w, s)) => crate::graded::scaled(&self.value(&w), &s),
            None => SparseVec::new(),
        }
    }

    /// The part supported on words of the given length.
    pub fn component(&self, len: usize) -> Cochain {
        self.filter(|w| w.len() == len)
    }

    pub fn filter(&self, keep: impl Fn(&SymWord) -> bool) -> Cochain {
        Cochain {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, v)| (w.clone(), v.clone()))
                .collect(),
        }
    }

    pub fn max_arity(&self) -> usize {
        self.values.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn arities(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.values.keys().map(|w| w.len()).collect();
        a.dedup();
        a
    }

    fn check_parallel(&self, other: &Cochain) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::SpaceMismatch("cochains on different spaces".into()));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cochains of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add_scaled(&self, other: &Cochain, c: &Rational) -> Result<Cochain> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        if out.is_zero() {
            out.degree = other.degree;
        }
        for (w, v) in &other.values {
            let mut cur = out.value(w);
            add_scaled(&mut cur, v, c);
            if cur.is_empty() {
                out.values.remove(w);
            } else {
                out.values.insert(w.clone(), cur);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn scaled(&self, c: &Rational) -> Cochain {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.degree);
        if !c.is_zero() {
            for (w, v) in &self.values {
                out.values.insert(w.clone(), crate::graded::scaled(v, c));
            }
        }
        out
    }

    /// Post-composition with a linear map of the target.
    pub fn then(&self, f: &GradedMap) -> Result<Cochain> {
        if **f.source() != *self.target {
            return Err(Error::SpaceMismatch("post-composition target".into()));
        }
        let mut out = Cochain::zero(self.source.clone(), f.target().clone(), self.degree + f.degree());
        for (w, v) in &self.values {
            out.set(w.clone(), f.apply(v))?;
        }
        Ok(out)
    }

    /// Pre-composition with a linear operator on the source coalgebra.
    pub fn after(&self, op: &impl Fn(&SymWord) -> SymVec, op_degree: i32, basis: &SymBasis) -> Result<Cochain> {
        let mut out = Cochain::zero(self.source.clone(), self.target.clone(), self.degree + op_degree);
        for w in basis.words() {
            out.set(w.clone(), self.eval(&op(w)))?;
        }
        Ok(out)
    }

    /// Difference restricted to words of length at most `max_len`; returns the
    /// lengths on which the two cochains disagree.
    pub fn disagreement(&self, other: &Cochain, basis: &SymBasis, max_len: usize) -> Vec<usize> {
        let mut lens: Vec<usize> = basis
            .words()
            .iter()
            .filter(|w| w.len() <= max_len && self.value(w) != other.value(w))
            .map(|w| w.len())
            .collect();
        lens.dedup();
        lens
    }
}

/// Applies the coderivation whose corestriction is `q` (a cochain `Σ^c[V] → V`).
pub fn apply_coderivation(q: &Cochain, w: &SymWord) -> SymVec {
    let gens = q.source();
    let n = w.len();
    let mut out = SymVec::new();
    for mask in 1..(1u64 << n) {
        let block = w.select(mask);
        let value = q.eval_positional(&block);
        if value.is_empty() {
            continue;
        }
        let s = sign(unshuffle_exponent(gens, &w.0, mask));
        let mut factors = vec![value];
        factors.extend(w.select(!mask).into_iter().map(unit_vec));
        sym_add_scaled(&mut out, &sym_product(gens, &factors), &s);
    }
    out
}

pub fn apply_coderivation_vec(q: &Cochain, v: &SymVec) -> SymVec {
    let mut out = SymVec::new();
    for (w, x) in v {
        sym_add_scaled(&mut out, &apply_coderivation(q, w), x);
    }
    out
}

/// Set partitions of `0..n` with blocks ordered by their smallest element.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// Applies the coalgebra morphism `Σ^c[U] → Σ^c[W]` with degree-0 components `f`.
pub fn apply_morphism(f: &Cochain, w: &SymWord) -> SymVec {
    let gens = f.source();
    let n = w.len();
    let mut out = SymVec::new();
    if n == 0 {
        sym_add(&mut out, SymWord::empty(), Rational::one());
        return out;
    }
    for partition in set_partitions(n) {
        let perm: Vec<usize> = partition.iter().flatten().copied().collect();
        let degrees: Vec<i32> = w.0.iter().map(|&i| gens.degree(i)).collect();
        let s = sign(crate::graded::koszul_exponent(&perm, &degrees));
        let mut factors = Vec::with_capacity(partition.len());
        for block in &partition {
            let letters: Vec<usize> = block.iter().map(|&p| w.0[p]).collect();
            let v = f.eval_positional(&letters);
            if v.is_empty() {
                break;
            }
            factors.push(v);
        }
        if factors.len() == partition.len() {
            sym_add_scaled(&mut out, &sym_product(f.target(), &factors), &s);
        }
    }
    out
}

pub fn apply_morphism_vec(f: &Cochain, v: &SymVec) -> SymVec {
    let mut out = SymVec::new();
    for (w, x) in v {
        sym_add_scaled(&mut out, &apply_morphism(f, w), x);
    }
    out
}

/// Wraps a linear map as the arity-one cochain `Σ^c_1[U] → W`.
pub fn linear_cochain(f: &GradedMap) -> Cochain {
    let mut c = Cochain::zero(f.source().clone(), f.target().clone(), f.degree());
    for j in 0..f.source().dim() {
        c.set(SymWord::single(j), f.column(j).clone())
            .expect("columns of a graded map are homogeneous");
    }
    c
}

/// `Σ^c` of a map of degree zero: `v_1⋯v_k ↦ f(v_1)⋯f(v_k)`.
pub fn lift_degree_zero(f: &GradedMap, w: &SymWord) -> SymVec {
    let factors: Vec<SparseVec> = w.0.iter().map(|&i| f.column(i).clone()).collect();
    sym_product(f.target(), &factors)
}

/// The symmetrised homotopy: the average over `Σ_k` of
/// `Σ id^{⊗i} ⊗ h ⊗ (∇π)^{⊗j}`.
pub fn symmetrized_homotopy(h: &GradedMap, nabla_pi: &GradedMap, w: &SymWord) -> SymVec {
    let gens = h.source();
    let n = w.len();
    let mut out = SymVec::new();
    if n == 0 {
        return out;
    }
    let mut fact = vec![Rational::one(); n + 1];
    for i in 1..=n {
        fact[i] = &fact[i - 1] * Rational::from_integer((i as i64).into());
    }
    let degrees: Vec<i32> = w.0.iter().map(|&i| gens.degree(i)).collect();
    for m in 0..n {
        let hm = h.column(w.0[m]);
        if hm.is_empty() {
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|&p| p != m).collect();
        for mask in 0..(1u64 << rest.len()) {
            let a: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let b: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 0)
                .map(|(_, &p)| p)
                .collect();
            let mut factors: Vec<SparseVec> = Vec::with_capacity(n);
            let mut ok = true;
            for &p in &b {
                let v = nabla_pi.column(w.0[p]).clone();
                if v.is_empty() {
                    ok = false;
                    break;
                }
                factors.push(v);
            }
            if !ok {
                continue;
            }
            let mut perm = a.clone();
            perm.push(m);
            perm.extend(&b);
            let deg_a: i64 = a.iter().map(|&p| degrees[p] as i64).sum();
            let e = crate::graded::koszul_exponent(&perm, &degrees) + h.degree() as i64 * deg_a;
            let weight = &fact[a.len()] * &fact[b.len()] / &fact[n];
            let mut all: Vec<SparseVec> = a.iter().map(|&p| unit_vec(w.0[p])).collect();
            all.push(hm.clone());
            all.extend(factors);
            sym_add_scaled(&mut out, &sym_product(h.target(), &all), &(weight * sign(e)));
        }
    }
    out
}

/// `Σ^c[V]` truncated at word length `N`, with a (possibly perturbed)
/// coderivation differential given by its corestriction.
#[derive(Clone, Debug)]
pub struct TruncatedSymCoalgebra {
    basis: SymBasis,
    differential: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShLieReport {
    pub degree_ok: bool,
    pub kills_coaugmentation: bool,
    /// Input word lengths `≤ N-1` on which `(d+∂)^2` fails, each with the output
    /// lengths of the nonzero part.
    pub failures: Vec<(usize, Vec<usize>)>,
    pub verified_through: usize,
    pub truncation_incomplete: usize,
}

impl ShLieReport {
    pub fn passed(&self) -> bool {
        self.degree_ok && self.kills_coaugmentation && self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.failures.first().map(|f| f.0)
    }
}

impl TruncatedSymCoalgebra {
    pub fn new(gens: Arc<GradedSpace>, max_len: usize, differential: Cochain) -> Result<Self> {
        if **differential.source() != *gens || **differential.target() != *gens {
            return Err(Error::SpaceMismatch("differential must be a cochain Σ^c[V] → V".into()));
        }
        if !differential.is_zero() && differential.degree() != -1 {
            return Err(Error::DegreeMismatch(
                "coalgebra differential must have degree -1".into(),
            ));
        }
        if differential.get(&SymWord::empty()).is_some() {
            return Err(Error::InvalidStructure(
                "differential must vanish on the coaugmentation".into(),
            ));
        }
        Ok(TruncatedSymCoalgebra {
            basis: SymBasis::new(gens, max_len),
            differential,
        })
    }

    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }

    pub fn gens(&self) -> &Arc<GradedSpace> {
        self.basis.gens()
    }

    pub fn max_len(&self) -> usize {
        self.basis.max_len()
    }

    pub fn differential(&self) -> &Cochain {
        &self.differential
    }

    pub fn apply(&self, w: &SymWord) -> SymVec {
        apply_coderivation(&self.differential, w)
    }

    pub fn apply_vec(&self, v: &SymVec) -> SymVec {
        apply_coderivation_vec(&self.differential, v)
    }

    pub fn differential_matrix(&self) -> Result<GradedMap> {
        self.basis.operator(&self.basis, -1, |w| Ok(self.apply(w)))
    }

    /// Checks `(d+∂)^2 = 0` and `∂η = 0` on word lengths `≤ N-1`.
    pub fn check_sh_lie(&self) -> ShLieReport {
        let n = self.max_len();
        let top = n.saturating_sub(1);
        let mut failures: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for w in self.basis.words() {
            if w.len() > top {
                continue;
            }
            let sq = self.apply_vec(&self.apply(w));
            if !sq.is_empty() {
                let entry = failures.entry(w.len()).or_default();
                for out in sq.keys() {
                    if !entry.contains(&out.len()) {
                        entry.push(out.len());
                    }
                }
                entry.sort_unstable();
            }
        }
        ShLieReport {
            degree_ok: self.differential.is_zero() || self.differential.degree() == -1,
            kills_coaugmentation: self.apply(&SymWord::empty()).is_empty(),
            failures: failures.into_iter().collect(),
            verified_through: top,
            truncation_incomplete: n,
        }
    }

    pub fn extract_brackets(&self) -> LInfinityStructure {
        LInfinityStructure::from_coderivation(&self.differential)
    }
}

/// Multilinear brackets `l_k` on `V = s^{-1}(generators)`, `l_k` of degree `k-2`,
/// related to the coderivation by `l_k = -s^{-1} ∘ Q_k ∘ s^{⊗k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInfinityStructure {
    underlying: Arc<GradedSpace>,
    suspended: Arc<GradedSpace>,
    /// arity -> canonical argument word (indices into `underlying`) -> value
    brackets: BTreeMap<usize, BTreeMap<Vec<usize>, SparseVec>>,
}

fn decalage_exponent(space: &GradedSpace, args: &[usize]) -> i64 {
    let k = args.len();
    args.iter()
        .enumerate()
        .map(|(j, &i)| space.degree(i) as i64 * (k - 1 - j) as i64)
        .sum()
}

impl LInfinityStructure {
    pub fn from_coderivation(q: &Cochain) -> Self {
        let suspended = q.source().clone();
        let underlying = Arc::new(suspended.desuspend());
        let mut brackets: BTreeMap<usize, BTreeMap<Vec<usize>, SparseVec>> = BTreeMap::new();
        for (w, v) in q.values() {
            let e = decalage_exponent(&underlying, w.factors()) + 1;
            brackets
                .entry(w.len())
                .or_default()
                .insert(w.factors().to_vec(), crate::graded::scaled(v, &sign(e)));
        }
        LInfinityStructure {
            underlying,
            suspended,
            brackets,
        }
    }

    /// Builds the structure from bracket values `l_k(args)` on basis arguments in
    /// any order; each value is moved to the canonical argument order.
    pub fn from_brackets(
        underlying: Arc<GradedSpace>,
        values: impl IntoIterator<Item = (Vec<usize>, SparseVec)>,
    ) -> Result<Self> {
        let suspended = Arc::new(underlying.suspend());
        let mut brackets: BTreeMap<usize, BTreeMap<Vec<usize>, SparseVec>> = BTreeMap::new();
        for (args, v) in values {
            if args.is_empty() || args.iter().any(|&i| i >= underlying.dim()) {
                return Err(Error::InvalidStructure(format!("bad bracket arguments {args:?}")));
            }
            let want = args.iter().map(|&i| underlying.degree(i)).sum::<i32>() + args.len() as i32 - 2;
            if v.iter()
                .any(|(&t, x)| !x.is_zero() && (t >= underlying.dim() || underlying.degree(t) != want))
            {
                return Err(Error::InvalidStructure(format!(
                    "l_{} value on {args:?} is not of degree {want}",
                    args.len()
                )));
            }
            let Some((w, s)) = SymWord::canonical(&suspended, &args) else {
                return Err(Error::InvalidStructure(format!(
                    "l_{} on {args:?} repeats an argument of even degree",
                    args.len()
                )));
            };
            let e = decalage_exponent(&underlying, &args) + decalage_exponent(&underlying, w.factors());
            let mut v = crate::graded::scaled(&v, &(s * sign(e)));
            v.retain(|_, x| !x.is_zero());
            let table = brackets.entry(args.len()).or_default();
            match table.get(w.factors()) {
                Some(old) if *old != v => {
                    return Err(Error::InvalidStructure(format!(
                        "conflicting values for l_{} on {args:?}",
                        args.len()
                    )))
                }
                _ if v.is_empty() => {}
                _ => {
                    table.insert(w.factors().to_vec(), v);
                }
            }
        }
        Ok(LInfinityStructure {
            underlying,
            suspended,
            brackets,
        })
    }

    pub fn to_coderivation(&self) -> Cochain {
        let mut q = Cochain::zero(self.suspended.clone(), self.suspended.clone(), -1);
        for table in self.brackets.values() {
            for (args, v) in table {
                let e = decalage_exponent(&self.underlying, args) + 1;
                q.set(SymWord(args.clone()), crate::graded::scaled(v, &sign(e)))
                    .expect("bracket values are homogeneous");
            }
        }
        q
    }

    pub fn underlying(&self) -> &Arc<GradedSpace> {
        &self.underlying
    }

    pub fn arities(&self) -> Vec<usize> {
        self.brackets
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(&k, _)| k)
            .collect()
    }

    pub fn bracket_table(&self, k: usize) -> Option<&BTreeMap<Vec<usize>, SparseVec>> {
        self.brackets.get(&k)
    }

    pub fn is_zero_in_arity(&self, k: usize) -> bool {
        self.brackets.get(&k).is_none_or(|t| t.is_empty())
    }

    /// `l_k` on basis arguments in any order (graded antisymmetry applied).
    pub fn eval(&self, args: &[usize]) -> SparseVec {
        let Some(table) = self.brackets.get(&args.len()) else {
            return SparseVec::new();
        };
        // graded antisymmetry of l_k is graded symmetry after suspension, so
        // reorder the suspended word and undo the décalage on both sides.
        let Some((w, s)) = SymWord::canonical(&self.suspended, args) else {
            return SparseVec::new();
        };
        let Some(v) = table.get(w.factors()) else {
            return SparseVec::new();
        };
        let e = decalage_exponent(&self.underlying, args) + decalage_exponent(&self.underlying, w.factors());
        crate::graded::scaled(v, &(s * sign(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn gens(pairs: &[(&str, i32)]) -> Arc<GradedSpace> {
        Arc::new(GradedSpace::from_pairs(pairs).unwrap())
    }

    #[test]
    fn canonical_order_and_odd_squares() {
        let g = gens(&[("a", 1), ("b", 1), ("c", 2)]);
        let (w, s) = SymWord::canonical(&g, &[1, 0]).unwrap();
        assert_eq!(w.factors(), &[0, 1]);
        assert_eq!(s, rat(-1));
        assert!(SymWord::canonical(&g, &[0, 2, 0]).is_none());
        let (w, s) = SymWord::canonical(&g, &[2, 2]).unwrap();
        assert_eq!(w.factors(), &[2, 2]);
        assert_eq!(s, rat(1));
    }

    #[test]
    fn basis_counts() {
        // one odd and one even generator: lengths 0..3 have 1, 2, 2, 2 words
        let g = gens(&[("x", 1), ("y", 2)]);
        let b = SymBasis::new(g, 3);
        let counts: Vec<usize> = (0..=3).map(|k| b.words_of_length(k).count()).collect();
        assert_eq!(counts, vec![1, 2, 2, 2]);
    }

    #[test]
    fn reduced_diagonal_small_words() {
        let g = gens(&[("x", 0), ("y", 2), ("z", 1)]);
        assert!(reduced_diagonal(&g, &SymWord::empty(), true).is_empty());
        assert!(reduced_diagonal(&g, &SymWord::single(0), true).is_empty());
        let full = reduced_diagonal(&g, &SymWord::single(0), false);
        assert_eq!(full.len(), 2);
        // both even: x⊗y + y⊗x with sign +1
        let d = reduced_diagonal(&g, &SymWord(vec![0, 1]), true);
        assert_eq!(
            d,
            vec![
                (SymWord::single(0), SymWord::single(1), rat(1)),
                (SymWord::single(1), SymWord::single(0), rat(1)),
            ]
        );
        // odd z and y even: no sign either; odd with odd would give -1
        let h = gens(&[("p", 1), ("q", 1)]);
        let d = reduced_diagonal(&h, &SymWord(vec![0, 1]), true);
        assert_eq!(d[1], (SymWord::single(1), SymWord::single(0), rat(-1)));
        // repeated even factor: x·x ↦ 2 x⊗x
        let d = reduced_diagonal(&g, &SymWord(vec![0, 0]), true);
        assert_eq!(d, vec![(SymWord::single(0), SymWord::single(0), rat(2))]);
    }

    #[test]
    fn coderivation_with_linear_component_is_a_derivation() {
        let g = gens(&[("x", 1), ("y", 0)]);
        let d = GradedMap::from_entries(g.clone(), g.clone(), -1, [(1, 0, rat(1))]).unwrap();
        let q = linear_cochain(&d);
        // d(x·y) = y·y
        let w = SymWord::canonical(&g, &[0, 1]).unwrap().0;
        let out = apply_coderivation(&q, &w);
        assert_eq!(out, SymVec::from([(SymWord(vec![1, 1]), rat(1))]));
        let zero = Cochain::zero(g.clone(), g.clone(), -1);
        assert!(apply_coderivation(&zero, &w).is_empty());
    }

    #[test]
    fn set_partition_counts() {
        let bell: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn brackets_round_trip() {
        let g = gens(&[("sx", 0), ("sy", 1), ("sz", 2)]);
        let mut q = Cochain::zero(g.clone(), g.clone(), -1);
        q.set(SymWord(vec![0, 1]), crate::graded::unit(0)).unwrap();
        q.set(SymWord(vec![0, 0, 2]), crate::graded::unit(1)).unwrap();
        let l = LInfinityStructure::from_coderivation(&q);
        assert_eq!(l.to_coderivation(), q);
        assert_eq!(l.arities(), vec![2, 3]);
    }
}
