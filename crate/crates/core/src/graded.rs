//! Graded vector spaces, homogeneous linear maps and Koszul signs.
//!
//! Sign ledger (every other module relies on these and nothing else):
//! * degrees are homological, differentials have degree -1;
//! * the suspension `s` has degree +1 and `(sM)_j = M_{j-1}`;
//! * a homogeneous map `f` induces `sf` on `sM` by `(sf)(sx) = (-1)^{|f|} s f(x)`,
//!   so the differential of `sM` is `-s d s^-1`;
//! * `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`, and reordering homogeneous
//!   factors costs the Koszul sign of the permutation.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{sign, Rational};

/// Sparse vector: basis index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn add_scaled(acc: &mut SparseVec, v: &SparseVec, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (&i, x) in v {
        add_entry(acc, i, x * c);
    }
}

pub fn add_entry(acc: &mut SparseVec, i: usize, x: Rational) {
    if x.is_zero() {
        return;
    }
    let e = acc.entry(i).or_insert_with(Rational::zero);
    *e += x;
    if e.is_zero() {
        acc.remove(&i);
    }
}

pub fn scaled(v: &SparseVec, c: &Rational) -> SparseVec {
    let mut out = SparseVec::new();
    add_scaled(&mut out, v, c);
    out
}

pub fn sub(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = a.clone();
    add_scaled(&mut out, b, &-Rational::one());
    out
}

pub fn unit(i: usize) -> SparseVec {
    SparseVec::from([(i, Rational::one())])
}

pub fn to_dense(v: &SparseVec, positions: &[usize]) -> Vec<Rational> {
    positions
        .iter()
        .map(|p| v.get(p).cloned().unwrap_or_else(Rational::zero))
        .collect()
}

pub fn from_dense(x: &[Rational], positions: &[usize]) -> SparseVec {
    let mut out = SparseVec::new();
    for (c, &p) in x.iter().zip(positions) {
        add_entry(&mut out, p, c.clone());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    basis: Vec<(String, i32)>,
    index: BTreeMap<String, usize>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, i32)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, (label, _)) in basis.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(GradedSpace { basis, index })
    }

    pub fn from_pairs(pairs: &[(&str, i32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|(l, d)| (l.to_string(), *d)).collect())
    }

    pub fn zero() -> Self {
        GradedSpace {
            basis: Vec::new(),
            index: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].1
    }

    pub fn basis(&self) -> &[(String, i32)] {
        &self.basis
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn indices_in_degree(&self, degree: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == degree).collect()
    }

    /// Sorted list of degrees that actually occur.
    pub fn degrees(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.basis.iter().map(|b| b.1).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn suspend(&self) -> GradedSpace {
        self.relabel(1, |l| format!("s{l}"))
    }

    pub fn desuspend(&self) -> GradedSpace {
        self.relabel(-1, |l| match l.strip_prefix('s') {
            Some(rest) if !rest.is_empty() => rest.to_string(),
            _ => format!("s^-1{l}"),
        })
    }

    fn relabel(&self, shift: i32, f: impl Fn(&str) -> String) -> GradedSpace {
        let basis = self.basis.iter().map(|(l, d)| (f(l), d + shift)).collect();
        GradedSpace::new(basis).expect("relabelling keeps labels distinct")
    }

    /// Degree of a nonzero vector, or `None` if it is zero or inhomogeneous.
    pub fn degree_of(&self, v: &SparseVec) -> Option<i32> {
        let mut it = v.keys().map(|&i| self.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn format_vec(&self, v: &SparseVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        v.iter()
            .map(|(&i, c)| format!("{}*{}", crate::scalar::format_rational(c), self.label(i)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(crate) fn same_space(a: &Arc<GradedSpace>, b: &Arc<GradedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A homogeneous linear map, stored column by column (image of each source basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    degree: i32,
    cols: Vec<SparseVec>,
}

impl GradedMap {
    pub fn new(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i32, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != source.dim() {
            return Err(Error::SpaceMismatch(format!(
                "{} columns for a source of dimension {}",
                cols.len(),
                source.dim()
            )));
        }
        let mut cols = cols;
        for (s, col) in cols.iter_mut().enumerate() {
            col.retain(|_, x| !x.is_zero());
            for &t in col.keys() {
                if t >= target.dim() {
                    return Err(Error::SpaceMismatch(format!("row {t} out of range")));
                }
                if target.degree(t) != source.degree(s) + degree {
                    return Err(Error::Inhomogeneous {
                        target: target.label(t).to_string(),
                        input: source.label(s).to_string(),
                        degree,
                    });
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            cols,
        })
    }

    pub fn from_fn(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i32,
        f: impl FnMut(usize) -> SparseVec,
    ) -> Result<Self> {
        let cols = (0..source.dim()).map(f).collect();
        Self::new(source, target, degree, cols)
    }

    /// Builds a map from `(target, source, coefficient)` triples; repeated positions add up.
    pub fn from_entries(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i32,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut cols = vec![SparseVec::new(); source.dim()];
        for (t, s, x) in entries {
            if s >= source.dim() {
                return Err(Error::SpaceMismatch(format!("column {s} out of range")));
            }
            add_entry(&mut cols[s], t, x);
        }
        Self::new(source, target, degree, cols)
    }

    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i32) -> Self {
        let cols = vec![SparseVec::new(); source.dim()];
        GradedMap {
            source,
            target,
            degree,
            cols,
        }
    }

    pub fn identity(space: Arc<GradedSpace>) -> Self {
        let cols = (0..space.dim()).map(unit).collect();
        GradedMap {
            source: space.clone(),
            target: space,
            degree: 0,
            cols,
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

    pub fn column(&self, s: usize) -> &SparseVec {
        &self.cols[s]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn entry(&self, t: usize, s: usize) -> Rational {
        self.cols[s].get(&t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&s, x) in v {
            add_scaled(&mut out, &self.cols[s], x);
        }
        out
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &GradedMap) -> Result<GradedMap> {
        if !same_space(&inner.target, &self.source) {
            return Err(Error::SpaceMismatch("composition of incompatible maps".into()));
        }
        let cols = inner.cols.iter().map(|c| self.apply(c)).collect();
        Ok(GradedMap {
            source: inner.source.clone(),
            target: self.target.clone(),
            degree: self.degree + inner.degree,
            cols,
        })
    }

    fn check_parallel(&self, other: &GradedMap) -> Result<()> {
        if !same_space(&self.source, &other.source) || !same_space(&self.target, &other.target) {
            return Err(Error::SpaceMismatch("sum of maps between different spaces".into()));
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "cannot add maps of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, &-Rational::one())
    }

    fn combine(&self, other: &GradedMap, c: &Rational) -> Result<GradedMap> {
        self.check_parallel(other)?;
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut v = a.clone();
                add_scaled(&mut v, b, c);
                v
            })
            .collect();
        Ok(GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree,
            cols,
        })
    }

    pub fn scaled(&self, c: &Rational) -> GradedMap {
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols: self.cols.iter().map(|v| scaled(v, c)).collect(),
        }
    }

    pub fn neg(&self) -> GradedMap {
        self.scaled(&-Rational::one())
    }

    /// Same entries, reinterpreted between other spaces with identical degree layout.
    pub fn with_spaces(&self, source: Arc<GradedSpace>, target: Arc<GradedSpace>) -> Result<GradedMap> {
        GradedMap::new(source, target, self.degree, self.cols.clone())
    }

    /// Dense block from source degree `n` to target degree `n + |f|`, with the
    /// basis positions of its rows and columns.
    pub fn block(&self, n: i32) -> (Matrix, Vec<usize>, Vec<usize>) {
        let cols = self.source.indices_in_degree(n);
        let rows = self.target.indices_in_degree(n + self.degree);
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (j, &s) in cols.iter().enumerate() {
            for (i, &t) in rows.iter().enumerate() {
                if let Some(x) = self.cols[s].get(&t) {
                    m.set(i, j, x.clone());
                }
            }
        }
        (m, rows, cols)
    }

    /// Rank of the map (sum of block ranks).
    pub fn rank(&self) -> usize {
        self.source.degrees().into_iter().map(|n| self.block(n).0.rank()).sum()
    }

    /// The induced map `sM -> sN`, `(sf)(sx) = (-1)^{|f|} s f(x)`.
    pub fn suspend_map(&self) -> GradedMap {
        let c = sign(self.degree as i64);
        GradedMap {
            source: Arc::new(self.source.suspend()),
            target: Arc::new(self.target.suspend()),
            degree: self.degree,
            cols: self.cols.iter().map(|v| scaled(v, &c)).collect(),
        }
    }

    pub fn format(&self) -> String {
        let mut lines = Vec::new();
        for s in 0..self.source.dim() {
            if !self.cols[s].is_empty() {
                lines.push(format!(
                    "{} -> {}",
                    self.source.label(s),
                    self.target.format_vec(&self.cols[s])
                ));
            }
        }
        lines.join("\n")
    }
}

/// Hom-complex differential `Dφ = d_tgt ∘ φ - (-1)^{|φ|} φ ∘ d_src`.
pub fn hom_differential(phi: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> Result<GradedMap> {
    if !same_space(d_src.source(), phi.source()) || !same_space(d_tgt.source(), phi.target()) {
        return Err(Error::SpaceMismatch("differentials do not match the map".into()));
    }
    if d_src.degree() != -1 || d_tgt.degree() != -1 {
        return Err(Error::DegreeMismatch("differentials must have degree -1".into()));
    }
    let left = d_tgt.compose(phi)?;
    let right = phi.compose(d_src)?.scaled(&sign(phi.degree() as i64));
    let mut out = left.sub(&right)?;
    out.degree = phi.degree() - 1;
    Ok(out)
}

/// Koszul sign of rearranging homogeneous elements of the given degrees into
/// the order `(x_{perm[0]}, x_{perm[1]}, ...)`.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<Rational> {
    if perm.len() != degrees.len() {
        return Err(Error::MalformedPermutation(perm.to_vec()));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::MalformedPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(sign(koszul_exponent(perm, degrees)))
}

pub fn koszul_exponent(perm: &[usize], degrees: &[i32]) -> i64 {
    let mut e = 0i64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                e += (degrees[perm[i]] as i64) * (degrees[perm[j]] as i64);
            }
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn two_dim() -> (Arc<GradedSpace>, GradedMap) {
        let v = Arc::new(GradedSpace::from_pairs(&[("x", 1), ("y", 0)]).unwrap());
        let d = GradedMap::from_entries(v.clone(), v.clone(), -1, [(1, 0, rat(1))]).unwrap();
        (v, d)
    }

    #[test]
    fn hom_differential_of_identity_and_d() {
        let (v, d) = two_dim();
        let id = GradedMap::identity(v.clone());
        assert!(hom_differential(&id, &d, &d).unwrap().is_zero());
        assert!(hom_differential(&d, &d, &d).unwrap().is_zero());
    }

    #[test]
    fn hom_differential_hand_example() {
        // φ: y ↦ x of degree +1. By hand: dφ sends y to y, φd sends x to x,
        // and Dφ = dφ + φd, so x ↦ x and y ↦ y.
        let (v, d) = two_dim();
        let phi = GradedMap::from_entries(v.clone(), v.clone(), 1, [(0, 1, rat(1))]).unwrap();
        let dphi = hom_differential(&phi, &d, &d).unwrap();
        assert_eq!(dphi.degree(), 0);
        assert_eq!(dphi.entry(0, 0), rat(1));
        assert_eq!(dphi.entry(1, 1), rat(1));
        assert_eq!(dphi.entry(0, 1), rat(0));
        assert_eq!(dphi.entry(1, 0), rat(0));
    }

    #[test]
    fn inhomogeneous_entry_rejected() {
        let (v, _) = two_dim();
        let err = GradedMap::from_entries(v.clone(), v, 0, [(1, 0, rat(1))]).unwrap_err();
        assert!(matches!(err, Error::Inhomogeneous { .. }));
    }

    #[test]
    fn koszul_sign_examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]).unwrap(), rat(1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), rat(-1));
        assert_eq!(koszul_sign(&[1, 0], &[2, 1]).unwrap(), rat(1));
        // 3-cycle (x1 x2 x3) -> (x2 x3 x1) on degrees (1,1,2): moving x1 past x2
        // and x3 costs (-1)^{1*1} (-1)^{1*2} = -1. The other decomposition
        // (swap x1,x2 then swap x1,x3) gives the same product.
        let by_cycle = koszul_sign(&[1, 2, 0], &[1, 1, 2]).unwrap();
        let first = koszul_sign(&[1, 0, 2], &[1, 1, 2]).unwrap();
        let second = koszul_sign(&[0, 2, 1], &[1, 1, 2]).unwrap();
        assert_eq!(by_cycle, rat(-1));
        assert_eq!(by_cycle, first * second);
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
        assert!(koszul_sign(&[0], &[1, 1]).is_err());
    }

    #[test]
    fn suspension_of_maps() {
        let (v, d) = two_dim();
        let id = GradedMap::identity(v.clone());
        let sid = id.suspend_map();
        assert_eq!(sid, GradedMap::identity(Arc::new(v.suspend())));
        let sd = d.suspend_map();
        assert_eq!(sd.entry(1, 0), rat(-1));
        assert_eq!(sd.source().degree(0), 2);
        let z = GradedMap::zero(v.clone(), v.clone(), 3);
        assert!(z.suspend_map().is_zero());
        // s is a degree +1 map that intertwines d and -s d s^-1 only up to the
        // ledger sign: (sd)(sx) = -s(dx).
        let sv = Arc::new(v.suspend());
        let s = GradedMap::from_fn(v.clone(), sv.clone(), 1, unit).unwrap();
        let lhs = sd.compose(&s).unwrap();
        let rhs = s.compose(&d).unwrap().neg();
        assert_eq!(lhs, rhs);
    }

    fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn koszul_sign_is_multiplicative(
            a in perm_strategy(5),
            b in perm_strategy(5),
            degs in proptest::collection::vec(-3i32..4, 5),
        ) {
            // apply a, then b to the result
            let after_a: Vec<i32> = a.iter().map(|&i| degs[i]).collect();
            let composite: Vec<usize> = b.iter().map(|&j| a[j]).collect();
            let direct = koszul_sign(&composite, &degs).unwrap();
            let path = koszul_sign(&a, &degs).unwrap() * koszul_sign(&b, &after_a).unwrap();
            prop_assert_eq!(direct, path);
        }

        #[test]
        fn hom_differential_is_a_differential_and_derivation(
            seed in proptest::collection::vec(-2i64..3, 24),
        ) {
            let (v, d) = two_dim();
            // random degree +1 and degree 0 maps on the 2-dim complex
            let phi = GradedMap::from_entries(v.clone(), v.clone(), 1, [(0, 1, rat(seed[0]))]).unwrap();
            let psi = GradedMap::from_entries(
                v.clone(), v.clone(), 0,
                [(0, 0, rat(seed[1])), (1, 1, rat(seed[2]))],
            ).unwrap();
            for f in [&phi, &psi] {
                let df = hom_differential(f, &d, &d).unwrap();
                prop_assert!(hom_differential(&df, &d, &d).unwrap().is_zero());
            }
            // D(φψ) = (Dφ)ψ + (-1)^{|φ|} φ(Dψ)
            let lhs = hom_differential(&phi.compose(&psi).unwrap(), &d, &d).unwrap();
            let rhs = hom_differential(&phi, &d, &d).unwrap().compose(&psi).unwrap()
                .sub(&phi.compose(&hom_differential(&psi, &d, &d).unwrap()).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
