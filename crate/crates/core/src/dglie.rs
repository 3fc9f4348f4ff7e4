//! Differential graded Lie algebras and associative algebras, cup operations on
//! cochains out of `Σ^c`, twisting cochains and the Chevalley–Eilenberg coalgebra.
//!
//! The bracket-induced coderivation on `Σ^c[s𝔤]` has components
//! `Q₁ = −s d s⁻¹` and `Q₂(sx·sy) = (−1)^{|x|+1} s[x,y]`; these are the signs for
//! which the universal cochain `sx ↦ x` satisfies `Dτ = ½[τ,τ]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::graded::{add_entry, add_scaled, scaled, sub, unit, GradedMap, GradedSpace, SparseVec};
use crate::scalar::{ratio, sign, Rational};
use crate::symco::{apply_coderivation, Cochain, SymBasis, SymWord, TruncatedSymCoalgebra};

/// Structure constants `[e_i, e_j]`, stored for `i ≤ j` only.
pub type BracketTable = BTreeMap<(usize, usize), SparseVec>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgLieAlgebra {
    space: Arc<GradedSpace>,
    d: GradedMap,
    bracket: BracketTable,
    /// pairs given in both orders with values that violate graded antisymmetry
    conflicts: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DgLieReport {
    pub differential_squares_to_zero: bool,
    pub antisymmetry_failures: Vec<(usize, usize)>,
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    pub leibniz_failures: Vec<(usize, usize)>,
}

impl DgLieReport {
    pub fn antisymmetry(&self) -> bool {
        self.antisymmetry_failures.is_empty()
    }

    pub fn jacobi(&self) -> bool {
        self.jacobi_failures.is_empty()
    }

    pub fn leibniz(&self) -> bool {
        self.leibniz_failures.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.differential_squares_to_zero && self.antisymmetry() && self.jacobi() && self.leibniz()
    }
}

fn check_bracket_degree(space: &GradedSpace, i: usize, j: usize, v: &SparseVec) -> Result<()> {
    for &k in v.keys() {
        if k >= space.dim() {
            return Err(Error::SpaceMismatch(format!("bracket value index {k} out of range")));
        }
        if space.degree(k) != space.degree(i) + space.degree(j) {
            return Err(Error::Inhomogeneous {
                target: space.label(k).to_string(),
                input: format!("[{}, {}]", space.label(i), space.label(j)),
                degree: 0,
            });
        }
    }
    Ok(())
}

impl DgLieAlgebra {
    /// Builds from `(i, j, k, c)` entries meaning `[e_i, e_j] ∋ c e_k`; entries
    /// with `i > j` are converted by graded antisymmetry, and a pair supplied in
    /// both orders inconsistently is recorded as an antisymmetry failure.
    pub fn new(
        space: Arc<GradedSpace>,
        d: GradedMap,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut forward: BracketTable = BTreeMap::new();
        let mut backward: BracketTable = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= space.dim() || j >= space.dim() {
                return Err(Error::SpaceMismatch("bracket argument out of range".into()));
            }
            if i <= j {
                add_entry(forward.entry((i, j)).or_default(), k, c);
            } else {
                add_entry(backward.entry((j, i)).or_default(), k, c);
            }
        }
        let mut conflicts = Vec::new();
        let mut table = forward.clone();
        for ((i, j), v) in backward {
            // [e_j, e_i] = v  ⇒  [e_i, e_j] = −(−1)^{|i||j|} v
            let e = space.degree(i) as i64 * space.degree(j) as i64;
            let converted = scaled(&v, &-sign(e));
            match forward.get(&(i, j)) {
                Some(f) if i != j => {
                    if *f != converted {
                        conflicts.push((i, j));
                    }
                }
                Some(_) => {
                    let slot = table.entry((i, j)).or_default();
                    add_scaled(slot, &v, &Rational::one());
                }
                None => {
                    table.insert((i, j), converted);
                }
            }
        }
        Self::from_table(space, d, table, conflicts)
    }

    pub fn from_table(
        space: Arc<GradedSpace>,
        d: GradedMap,
        mut table: BracketTable,
        conflicts: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if **d.source() != *space || **d.target() != *space {
            return Err(Error::SpaceMismatch("differential must act on the algebra".into()));
        }
        let d = if d.is_zero() {
            GradedMap::zero(space.clone(), space.clone(), -1)
        } else if d.degree() != -1 {
            return Err(Error::DegreeMismatch("differential has degree -1".into()));
        } else {
            d.with_spaces(space.clone(), space.clone())?
        };
        table.retain(|_, v| {
            v.retain(|_, x| !x.is_zero());
            !v.is_empty()
        });
        for (&(i, j), v) in &table {
            if i > j {
                return Err(Error::InvalidStructure("bracket table stores i ≤ j only".into()));
            }
            check_bracket_degree(&space, i, j, v)?;
        }
        Ok(DgLieAlgebra {
            space,
            d,
            bracket: table,
            conflicts,
        })
    }

    pub fn abelian(space: Arc<GradedSpace>, d: GradedMap) -> Result<Self> {
        Self::from_table(space, d, BTreeMap::new(), Vec::new())
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn table(&self) -> &BracketTable {
        &self.bracket
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn complex(&self) -> Result<ChainComplex> {
        ChainComplex::new(self.d.clone())
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.is_empty()
    }

    /// `[e_i, e_j]` for any order of the arguments.
    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        if i <= j {
            self.bracket.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            let e = self.space.degree(i) as i64 * self.space.degree(j) as i64;
            self.bracket
                .get(&(j, i))
                .map(|v| scaled(v, &-sign(e)))
                .unwrap_or_default()
        }
    }

    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                add_scaled(&mut out, &self.bracket(i, j), &(x * y));
            }
        }
        out
    }

    /// Exact check of every dg Lie axiom on basis elements, with witnesses.
    pub fn validate(&self) -> DgLieReport {
        let n = self.dim();
        let deg = |i: usize| self.space.degree(i) as i64;
        let mut report = DgLieReport {
            differential_squares_to_zero: self.d.compose(&self.d).map(|m| m.is_zero()).unwrap_or(false),
            antisymmetry_failures: self.conflicts.clone(),
            ..Default::default()
        };
        for i in 0..n {
            if deg(i) % 2 == 0 && !self.bracket(i, i).is_empty() {
                report.antisymmetry_failures.push((i, i));
            }
        }
        for x in 0..n {
            for y in 0..n {
                // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
                let lhs = self.d.apply(&self.bracket(x, y));
                let mut rhs = self.bracket_vec(self.d.column(x), &unit(y));
                add_scaled(&mut rhs, &self.bracket_vec(&unit(x), self.d.column(y)), &sign(deg(x)));
                if lhs != rhs && x <= y {
                    report.leibniz_failures.push((x, y));
                }
                for z in 0..n {
                    // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                    let lhs = self.bracket_vec(&unit(x), &self.bracket(y, z));
                    let mut rhs = self.bracket_vec(&self.bracket(x, y), &unit(z));
                    add_scaled(
                        &mut rhs,
                        &self.bracket_vec(&unit(y), &self.bracket(x, z)),
                        &sign(deg(x) * deg(y)),
                    );
                    if lhs != rhs {
                        report.jacobi_failures.push((x, y, z));
                    }
                }
            }
        }
        report
    }

    /// The sub-dg Lie algebra spanned by homogeneous vectors, with its inclusion.
    /// Labels are `label_of(vector index)`.
    pub fn subalgebra(&self, vectors: &[SparseVec], labels: Vec<String>) -> Result<(DgLieAlgebra, GradedMap)> {
        if vectors.len() != labels.len() {
            return Err(Error::SpaceMismatch("one label per spanning vector".into()));
        }
        let mut basis = Vec::new();
        for (v, l) in vectors.iter().zip(labels) {
            let deg = self
                .space
                .degree_of(v)
                .ok_or_else(|| Error::InvalidStructure("subalgebra vectors must be nonzero and homogeneous".into()))?;
            basis.push((l, deg));
        }
        let sub_space = Arc::new(GradedSpace::new(basis)?);
        let incl = GradedMap::new(sub_space.clone(), self.space.clone(), 0, vectors.to_vec())?;
        let express = |v: &SparseVec, what: &str| -> Result<SparseVec> {
            coordinates_in(&incl, v)
                .ok_or_else(|| Error::InvalidStructure(format!("subspace is not closed under {what}")))
        };
        if incl.rank() != vectors.len() {
            return Err(Error::InvalidStructure(
                "subalgebra vectors are linearly dependent".into(),
            ));
        }
        let mut d_cols = Vec::new();
        for v in vectors {
            d_cols.push(express(&self.d.apply(v), "the differential")?);
        }
        let d = GradedMap::new(sub_space.clone(), sub_space.clone(), -1, d_cols)?;
        let mut table = BTreeMap::new();
        for i in 0..vectors.len() {
            for j in i..vectors.len() {
                let b = express(&self.bracket_vec(&vectors[i], &vectors[j]), "the bracket")?;
                if !b.is_empty() {
                    table.insert((i, j), b);
                }
            }
        }
        Ok((DgLieAlgebra::from_table(sub_space, d, table, Vec::new())?, incl))
    }

    /// Conjugates the structure by a degree-preserving change of basis: the new
    /// basis vector `i` is column `i` of `p`.
    pub fn change_basis(&self, p: &GradedMap) -> Result<DgLieAlgebra> {
        let inv = crate::complex::invert(p)
            .ok_or_else(|| Error::InvalidStructure("change of basis is not invertible".into()))?;
        let space = self.space.clone();
        let d = inv.compose(&self.d)?.compose(p)?;
        let mut table = BTreeMap::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let b = inv.apply(&self.bracket_vec(p.column(i), p.column(j)));
                if !b.is_empty() {
                    table.insert((i, j), b);
                }
            }
        }
        DgLieAlgebra::from_table(
            space,
            d.with_spaces(self.space.clone(), self.space.clone())?,
            table,
            Vec::new(),
        )
    }

    /// Direct sum; the second summand's labels get `suffix` appended if they clash.
    pub fn direct_sum(&self, other: &DgLieAlgebra) -> Result<DgLieAlgebra> {
        let mut basis: Vec<(String, i32)> = self.space.basis().to_vec();
        basis.extend(other.space.basis().iter().cloned());
        let space = Arc::new(GradedSpace::new(basis)?);
        let n = self.dim();
        let shift = |v: &SparseVec| v.iter().map(|(&k, x)| (k + n, x.clone())).collect::<SparseVec>();
        let mut d_cols: Vec<SparseVec> = self.d.columns().to_vec();
        d_cols.extend(other.d.columns().iter().map(shift));
        let d = GradedMap::new(space.clone(), space.clone(), -1, d_cols)?;
        let mut table = self.bracket.clone();
        for (&(i, j), v) in &other.bracket {
            table.insert((i + n, j + n), shift(v));
        }
        DgLieAlgebra::from_table(space, d, table, Vec::new())
    }
}

/// Coordinates of `v` with respect to the (independent) columns of `f`, if `v`
/// lies in their span.
pub fn coordinates_in(f: &GradedMap, v: &SparseVec) -> Option<SparseVec> {
    if v.is_empty() {
        return Some(SparseVec::new());
    }
    let deg = f.target().degree_of(v)?;
    let (m, rows, cols) = f.block(deg - f.degree());
    if v.keys().any(|k| !rows.contains(k)) {
        return None;
    }
    let x = m.solve(&crate::graded::to_dense(v, &rows))?;
    Some(crate::graded::from_dense(&x, &cols))
}

/// Differential graded associative algebra with full structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    space: Arc<GradedSpace>,
    d: GradedMap,
    product: BTreeMap<(usize, usize), SparseVec>,
    unit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DgAlgebraReport {
    pub differential_squares_to_zero: bool,
    pub associativity_failures: Vec<(usize, usize, usize)>,
    pub leibniz_failures: Vec<(usize, usize)>,
    pub unit_law: bool,
}

impl DgAlgebraReport {
    pub fn passed(&self) -> bool {
        self.differential_squares_to_zero
            && self.associativity_failures.is_empty()
            && self.leibniz_failures.is_empty()
            && self.unit_law
    }
}

impl DgAlgebra {
    pub fn new(
        space: Arc<GradedSpace>,
        d: GradedMap,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let d = if d.is_zero() {
            GradedMap::zero(space.clone(), space.clone(), -1)
        } else {
            d
        };
        if d.degree() != -1 || **d.source() != *space {
            return Err(Error::DegreeMismatch(
                "differential has degree -1 on the algebra".into(),
            ));
        }
        let mut product: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= space.dim() || j >= space.dim() {
                return Err(Error::SpaceMismatch("product argument out of range".into()));
            }
            add_entry(product.entry((i, j)).or_default(), k, c);
        }
        product.retain(|_, v| !v.is_empty());
        for (&(i, j), v) in &product {
            check_bracket_degree(&space, i, j, v)?;
        }
        if let Some(u) = unit {
            if u >= space.dim() || space.degree(u) != 0 {
                return Err(Error::InvalidStructure("the unit is a degree 0 basis element".into()));
            }
            for i in 0..space.dim() {
                for key in [(u, i), (i, u)] {
                    if product.get(&key).is_some_and(|v| *v != crate::graded::unit(i)) {
                        return Err(Error::InvalidStructure("unit products are fixed".into()));
                    }
                    product.insert(key, crate::graded::unit(i));
                }
            }
        }
        Ok(DgAlgebra {
            space,
            d,
            product,
            unit,
        })
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn mul(&self, i: usize, j: usize) -> SparseVec {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                add_scaled(&mut out, &self.mul(i, j), &(x * y));
            }
        }
        out
    }

    pub fn validate(&self) -> DgAlgebraReport {
        let n = self.space.dim();
        let deg = |i: usize| self.space.degree(i) as i64;
        let mut r = DgAlgebraReport {
            differential_squares_to_zero: self.d.compose(&self.d).map(|m| m.is_zero()).unwrap_or(false),
            unit_law: self.unit.is_none_or(|u| self.d.column(u).is_empty()),
            ..Default::default()
        };
        for x in 0..n {
            for y in 0..n {
                let lhs = self.d.apply(&self.mul(x, y));
                let mut rhs = self.mul_vec(self.d.column(x), &unit(y));
                add_scaled(&mut rhs, &self.mul_vec(&unit(x), self.d.column(y)), &sign(deg(x)));
                if lhs != rhs {
                    r.leibniz_failures.push((x, y));
                }
                for z in 0..n {
                    if self.mul_vec(&self.mul(x, y), &unit(z)) != self.mul_vec(&unit(x), &self.mul(y, z)) {
                        r.associativity_failures.push((x, y, z));
                    }
                }
            }
        }
        r
    }

    /// The graded commutator Lie algebra `[a,b] = ab − (−1)^{|a||b|} ba`.
    pub fn commutator_lie(&self) -> Result<DgLieAlgebra> {
        let n = self.space.dim();
        let mut table = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let e = self.space.degree(i) as i64 * self.space.degree(j) as i64;
                let mut v = self.mul(i, j);
                add_scaled(&mut v, &self.mul(j, i), &-sign(e));
                if !v.is_empty() {
                    table.insert((i, j), v);
                }
            }
        }
        DgLieAlgebra::from_table(self.space.clone(), self.d.clone(), table, Vec::new())
    }
}

/// Koszul sign exponent of moving the positions in `mask` in front of the rest.
pub(crate) fn unshuffle_exponent(gens: &GradedSpace, word: &[usize], mask: u64) -> i64 {
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

fn select(word: &[usize], mask: u64, keep: bool) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|(p, _)| (mask >> p & 1 == 1) == keep)
        .map(|(_, &i)| i)
        .collect()
}

/// `op ∘ (a ⊗ b) ∘ Δ` on a single word, summed over all positional unshuffles.
fn cup_on_word(
    a: &Cochain,
    b: &Cochain,
    w: &SymWord,
    op: &dyn Fn(&SparseVec, &SparseVec) -> SparseVec,
    proper_only: bool,
) -> SparseVec {
    let gens = a.source();
    let f = w.factors();
    let n = f.len();
    let mut out = SparseVec::new();
    for mask in 0..(1u64 << n) {
        if proper_only && (mask == 0 || mask == (1u64 << n) - 1) {
            continue;
        }
        let left = select(f, mask, true);
        let right = select(f, mask, false);
        let x = a.eval_positional(&left);
        if x.is_empty() {
            continue;
        }
        let y = b.eval_positional(&right);
        if y.is_empty() {
            continue;
        }
        let deg_left: i64 = left.iter().map(|&i| gens.degree(i) as i64).sum();
        let e = unshuffle_exponent(gens, f, mask) + b.degree() as i64 * deg_left;
        add_scaled(&mut out, &op(&x, &y), &sign(e));
    }
    out
}

fn check_cup_inputs(a: &Cochain, b: &Cochain, target: &Arc<GradedSpace>) -> Result<()> {
    if a.source() != b.source() {
        return Err(Error::SpaceMismatch(
            "cup operations need a common source coalgebra".into(),
        ));
    }
    if a.target() != target || b.target() != target {
        return Err(Error::SpaceMismatch(
            "cochains must take values in the target algebra".into(),
        ));
    }
    Ok(())
}

/// The cup bracket `[a,b] = [·,·] ∘ (a ⊗ b) ∘ Δ` on the words of `basis`.
pub fn cup_bracket(a: &Cochain, b: &Cochain, lie: &DgLieAlgebra, basis: &SymBasis) -> Result<Cochain> {
    check_cup_inputs(a, b, lie.space())?;
    let mut out = Cochain::zero(a.source().clone(), lie.space().clone(), a.degree() + b.degree());
    let op = |x: &SparseVec, y: &SparseVec| lie.bracket_vec(x, y);
    for w in basis.words() {
        out.set(w.clone(), cup_on_word(a, b, w, &op, false))?;
    }
    Ok(out)
}

/// The cup product `a ⌣ b = μ ∘ (a ⊗ b) ∘ Δ` on the words of `basis`.
pub fn cup_product(a: &Cochain, b: &Cochain, alg: &DgAlgebra, basis: &SymBasis) -> Result<Cochain> {
    check_cup_inputs(a, b, alg.space())?;
    let mut out = Cochain::zero(a.source().clone(), alg.space().clone(), a.degree() + b.degree());
    let op = |x: &SparseVec, y: &SparseVec| alg.mul_vec(x, y);
    for w in basis.words() {
        out.set(w.clone(), cup_on_word(a, b, w, &op, false))?;
    }
    Ok(out)
}

/// `½[τ,τ]` on one word, restricted to proper splittings (τ vanishes on the
/// coaugmentation).
pub(crate) fn half_self_bracket(tau: &Cochain, lie: &DgLieAlgebra, w: &SymWord) -> SparseVec {
    let op = |x: &SparseVec, y: &SparseVec| lie.bracket_vec(x, y);
    scaled(&cup_on_word(tau, tau, w, &op, true), &ratio(1, 2))
}

/// The target of a twisting cochain.
#[derive(Clone, Copy, Debug)]
pub enum TwistingTarget<'a> {
    Lie(&'a DgLieAlgebra),
    Algebra(&'a DgAlgebra),
}

impl TwistingTarget<'_> {
    fn space(&self) -> &Arc<GradedSpace> {
        match self {
            TwistingTarget::Lie(g) => g.space(),
            TwistingTarget::Algebra(a) => a.space(),
        }
    }

    fn d(&self) -> &GradedMap {
        match self {
            TwistingTarget::Lie(g) => g.d(),
            TwistingTarget::Algebra(a) => a.d(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingReport {
    pub kills_coaugmentation: bool,
    pub degree_ok: bool,
    /// word lengths on which the master equation fails
    pub failures: Vec<usize>,
    pub checked_through: usize,
}

impl TwistingReport {
    pub fn passed(&self) -> bool {
        self.kills_coaugmentation && self.degree_ok && self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.failures.first().copied()
    }
}

/// `Dt − ½[t,t]` (Lie) or `Dt − t⌣t` (algebra) on one word, where the source
/// differential is the coderivation `q` and `Dt = d∘t − (−1)^{|t|} t∘q`.
pub fn master_defect_on_word(t: &Cochain, q: &Cochain, target: TwistingTarget<'_>, w: &SymWord) -> SparseVec {
    let mut lhs = target.d().apply(&t.value(w));
    if !q.is_zero() {
        let qw = apply_coderivation(q, w);
        add_scaled(&mut lhs, &t.eval(&qw), &-sign(t.degree() as i64));
    }
    let rhs = match target {
        TwistingTarget::Lie(g) => half_self_bracket(t, g, w),
        TwistingTarget::Algebra(a) => {
            let op = |x: &SparseVec, y: &SparseVec| a.mul_vec(x, y);
            cup_on_word(t, t, w, &op, false)
        }
    };
    sub(&lhs, &rhs)
}

/// Checks the twisting-cochain equation on all words of length `≤ max_len`.
pub fn is_twisting_cochain(
    t: &Cochain,
    q: &Cochain,
    target: TwistingTarget<'_>,
    max_len: usize,
) -> Result<TwistingReport> {
    if t.target() != target.space() {
        return Err(Error::SpaceMismatch("cochain values must lie in the target".into()));
    }
    if q.source() != t.source() || (!q.is_zero() && q.target() != t.source()) {
        return Err(Error::SpaceMismatch(
            "source differential must act on the cochain's source".into(),
        ));
    }
    let basis = SymBasis::new(t.source().clone(), max_len);
    let mut failures = Vec::new();
    for w in basis.words() {
        if w.is_empty() {
            continue;
        }
        if !master_defect_on_word(t, q, target, w).is_empty() && !failures.contains(&w.len()) {
            failures.push(w.len());
        }
    }
    failures.sort_unstable();
    Ok(TwistingReport {
        kills_coaugmentation: t.get(&SymWord::empty()).is_none(),
        degree_ok: t.is_zero() || t.degree() == -1,
        failures,
        checked_through: max_len,
    })
}

/// The universal twisting cochain `τ_𝔤: Σ^c[s𝔤] → 𝔤`, `sx ↦ x`, zero off word length one.
pub fn universal_twisting_cochain(g: &DgLieAlgebra) -> Cochain {
    let gens = Arc::new(g.space().suspend());
    let mut t = Cochain::zero(gens, g.space().clone(), -1);
    for i in 0..g.dim() {
        t.set(SymWord::single(i), unit(i)).expect("desuspension is homogeneous");
    }
    t
}

/// The coderivation components of the Chevalley–Eilenberg coalgebra on `s𝔤`.
pub fn ce_coderivation(g: &DgLieAlgebra) -> Cochain {
    let gens = Arc::new(g.space().suspend());
    let mut q = Cochain::zero(gens.clone(), gens.clone(), -1);
    let ds = g.d().suspend_map();
    for i in 0..g.dim() {
        q.set(SymWord::single(i), ds.column(i).clone())
            .expect("suspended differential is homogeneous");
    }
    for i in 0..g.dim() {
        for j in i..g.dim() {
            if gens.degree(i) % 2 != 0 && i == j {
                continue;
            }
            let b = g.bracket(i, j);
            if b.is_empty() {
                continue;
            }
            // the canonical word may list the letters in the other order
            let (word, reorder) = SymWord::canonical(&gens, &[i, j]).expect("letters are admissible");
            let s = sign(g.space().degree(i) as i64 + 1);
            q.set(word, scaled(&b, &(s * reorder))).expect("bracket is homogeneous");
        }
    }
    q
}

/// `Σ^c[s𝔤]` truncated at word length `max_len` with the bracket-induced
/// differential, checked to square to zero below the top length.
pub fn ce_coalgebra(g: &DgLieAlgebra, max_len: usize) -> Result<TruncatedSymCoalgebra> {
    let gens = Arc::new(g.space().suspend());
    TruncatedSymCoalgebra::new(gens, max_len, ce_coderivation(g))
}

/// The twisted differential `d_Γ a = da − [Γ, a]` for a solution `dΓ = ½[Γ,Γ]`
/// of degree −1; refuses non-solutions and checks `d_Γ² = 0`.
pub fn twisted_differential(gamma: &SparseVec, g: &DgLieAlgebra) -> Result<GradedMap> {
    if !gamma.is_empty() && g.space().degree_of(gamma) != Some(-1) {
        return Err(Error::DegreeMismatch("a master-equation solution has degree -1".into()));
    }
    let lhs = g.d().apply(gamma);
    let rhs = scaled(&g.bracket_vec(gamma, gamma), &ratio(1, 2));
    if lhs != rhs {
        return Err(Error::Precondition("element does not satisfy dΓ = ½[Γ,Γ]".into()));
    }
    let cols = (0..g.dim())
        .map(|a| sub(g.d().column(a), &g.bracket_vec(gamma, &unit(a))))
        .collect();
    let dg = GradedMap::new(g.space().clone(), g.space().clone(), -1, cols)?;
    if !dg.compose(&dg)?.is_zero() {
        return Err(Error::NotAComplex);
    }
    Ok(dg)
}

/// Twisted differential for an associative target, `dΓ = ΓΓ`, via the commutator.
pub fn twisted_differential_algebra(gamma: &SparseVec, a: &DgAlgebra) -> Result<GradedMap> {
    let lhs = a.d().apply(gamma);
    if lhs != a.mul_vec(gamma, gamma) {
        return Err(Error::Precondition("element does not satisfy dΓ = ΓΓ".into()));
    }
    twisted_differential(gamma, &a.commutator_lie()?)
}
