//! Chain complexes over ℚ, homology, contractions and the basic perturbation lemma.
//!
//! A contraction `(∇, π, h)` of `N` onto `M` satisfies `π∇ = Id`,
//! `Dh = dh + hd = ∇π − Id` and the side conditions `πh = 0`, `h∇ = 0`,
//! `hh = 0`. With this sign of the homotopy identity the perturbation series
//! are `Σ(h∂)^n` and `Σ(∂h)^n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{from_dense, hom_differential, to_dense, GradedMap, GradedSpace, SparseVec};
use crate::linalg::Matrix;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    space: Arc<GradedSpace>,
    d: GradedMap,
}

impl ChainComplex {
    /// Wraps a degree −1 endomorphism, checking `d∘d = 0` exactly.
    pub fn new(d: GradedMap) -> Result<Self> {
        if d.source() != d.target() {
            return Err(Error::SpaceMismatch("a differential is an endomorphism".into()));
        }
        if d.degree() != -1 && !d.is_zero() {
            return Err(Error::DegreeMismatch(format!(
                "differential of degree {} (expected -1)",
                d.degree()
            )));
        }
        let d = if d.degree() == -1 {
            d
        } else {
            GradedMap::zero(d.source().clone(), d.source().clone(), -1)
        };
        if !d.compose(&d)?.is_zero() {
            return Err(Error::NotAComplex);
        }
        Ok(ChainComplex {
            space: d.source().clone(),
            d,
        })
    }

    /// The complex with zero differential.
    pub fn zero(space: Arc<GradedSpace>) -> Self {
        ChainComplex {
            d: GradedMap::zero(space.clone(), space.clone(), -1),
            space,
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `sC` with differential `−s d s⁻¹`.
    pub fn suspend(&self) -> ChainComplex {
        let d = self.d.suspend_map();
        ChainComplex {
            space: d.source().clone(),
            d,
        }
    }

    /// Betti numbers from `dim C_n − rank d_n − rank d_{n+1}`.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for n in self.space.degrees() {
            let dim = self.space.indices_in_degree(n).len();
            let out_rank = self.d.block(n).0.rank();
            let in_rank = self.d.block(n + 1).0.rank();
            let b = dim - out_rank - in_rank;
            if b > 0 {
                out.insert(n, b);
            }
        }
        out
    }

    /// A basis of homology: reduced-row-echelon cycle representatives modulo
    /// boundaries, labelled by their pivot basis elements.
    pub fn homology(&self) -> GradedSpace {
        self.decompose().small_space()
    }

    fn decompose(&self) -> Decomposition {
        let mut per_degree = BTreeMap::new();
        let degrees = self.space.degrees();
        // complements first, since boundaries in degree n come from K_{n+1}
        let mut complements: BTreeMap<i32, (Vec<usize>, Vec<Vec<Rational>>)> = BTreeMap::new();
        for &n in &degrees {
            let (dn, _, cols) = self.d.block(n);
            let cycles = dn.kernel();
            let mut z = Matrix::from_rows(cols.len(), &cycles);
            let pivots = z.rref();
            let k: Vec<usize> = (0..cols.len()).filter(|j| !pivots.contains(j)).collect();
            complements.insert(n, (k, cycles));
        }
        for &n in &degrees {
            let positions = self.space.indices_in_degree(n);
            let (k_here, cycles) = complements[&n].clone();
            let upper = self.space.indices_in_degree(n + 1);
            let k_above: Vec<usize> = complements
                .get(&(n + 1))
                .map(|c| c.0.iter().map(|&j| upper[j]).collect())
                .unwrap_or_default();
            let boundaries: Vec<Vec<Rational>> = k_above
                .iter()
                .map(|&j| to_dense(self.d.column(j), &positions))
                .collect();
            let mut bmat = Matrix::from_rows(positions.len(), &boundaries);
            let bpiv = bmat.rref();
            let mut residuals = Vec::new();
            for z in &cycles {
                let mut r = z.clone();
                for (row, &pc) in bpiv.iter().enumerate() {
                    let f = r[pc].clone();
                    if !f.is_zero() {
                        for (j, x) in r.iter_mut().enumerate() {
                            *x -= &f * bmat.get(row, j);
                        }
                    }
                }
                residuals.push(r);
            }
            let mut hmat = Matrix::from_rows(positions.len(), &residuals);
            let hpiv = hmat.rref();
            let reps: Vec<(usize, Vec<Rational>)> = hpiv
                .iter()
                .enumerate()
                .map(|(row, &pc)| {
                    (
                        positions[pc],
                        (0..positions.len()).map(|j| hmat.get(row, j).clone()).collect(),
                    )
                })
                .collect();
            per_degree.insert(
                n,
                DegreePiece {
                    positions,
                    boundaries,
                    boundary_sources: k_above,
                    reps,
                    complement: k_here,
                },
            );
        }
        Decomposition {
            big: self.space.clone(),
            per_degree,
        }
    }
}

struct DegreePiece {
    positions: Vec<usize>,
    boundaries: Vec<Vec<Rational>>,
    boundary_sources: Vec<usize>,
    /// (pivot basis index, dense representative)
    reps: Vec<(usize, Vec<Rational>)>,
    /// positions (within the degree) of the standard complement of the cycles
    complement: Vec<usize>,
}

struct Decomposition {
    big: Arc<GradedSpace>,
    per_degree: BTreeMap<i32, DegreePiece>,
}

impl Decomposition {
    fn small_space(&self) -> GradedSpace {
        let basis = self
            .per_degree
            .iter()
            .flat_map(|(&n, p)| {
                p.reps
                    .iter()
                    .map(move |(pivot, _)| (self.big.label(*pivot).to_string(), n))
            })
            .collect();
        GradedSpace::new(basis).expect("pivot labels are distinct")
    }
}

/// `(∇, π, h)` between `big` and `small`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    big: ChainComplex,
    small: ChainComplex,
    nabla: GradedMap,
    pi: GradedMap,
    h: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionReport {
    pub pi_nabla_is_identity: bool,
    pub homotopy_identity: bool,
    pub pi_h_zero: bool,
    pub h_nabla_zero: bool,
    pub h_h_zero: bool,
    pub nabla_chain_map: bool,
    pub pi_chain_map: bool,
}

impl ContractionReport {
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.pi_nabla_is_identity, "π∇ = Id"),
            (self.homotopy_identity, "Dh = ∇π − Id"),
            (self.pi_h_zero, "πh = 0"),
            (self.h_nabla_zero, "h∇ = 0"),
            (self.h_h_zero, "hh = 0"),
            (self.nabla_chain_map, "∇ chain map"),
            (self.pi_chain_map, "π chain map"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

impl Contraction {
    /// Assembles a contraction after checking spaces and degrees; the identities
    /// themselves are reported by [`Contraction::verify`].
    pub fn new(big: ChainComplex, small: ChainComplex, nabla: GradedMap, pi: GradedMap, h: GradedMap) -> Result<Self> {
        let shape = [
            (
                nabla.source() == small.space() && nabla.target() == big.space(),
                "∇: M → N",
            ),
            (pi.source() == big.space() && pi.target() == small.space(), "π: N → M"),
            (h.source() == big.space() && h.target() == big.space(), "h: N → N"),
        ];
        for (ok, what) in shape {
            if !ok {
                return Err(Error::SpaceMismatch(what.into()));
            }
        }
        if (nabla.degree() != 0 && !nabla.is_zero()) || (pi.degree() != 0 && !pi.is_zero()) {
            return Err(Error::DegreeMismatch("∇ and π have degree 0".into()));
        }
        if h.degree() != 1 && !h.is_zero() {
            return Err(Error::DegreeMismatch("h has degree +1".into()));
        }
        let fix = |m: GradedMap, deg: i32| {
            if m.degree() == deg {
                m
            } else {
                GradedMap::zero(m.source().clone(), m.target().clone(), deg)
            }
        };
        Ok(Contraction {
            big,
            small,
            nabla: fix(nabla, 0),
            pi: fix(pi, 0),
            h: fix(h, 1),
        })
    }

    /// The identity contraction of a complex onto itself.
    pub fn identity(c: ChainComplex) -> Self {
        let id = GradedMap::identity(c.space().clone());
        Contraction {
            h: GradedMap::zero(c.space().clone(), c.space().clone(), 1),
            nabla: id.clone(),
            pi: id,
            small: c.clone(),
            big: c,
        }
    }

    pub fn big(&self) -> &ChainComplex {
        &self.big
    }

    pub fn small(&self) -> &ChainComplex {
        &self.small
    }

    pub fn nabla(&self) -> &GradedMap {
        &self.nabla
    }

    pub fn pi(&self) -> &GradedMap {
        &self.pi
    }

    pub fn h(&self) -> &GradedMap {
        &self.h
    }

    /// Exact check of every contraction identity.
    pub fn verify(&self) -> ContractionReport {
        let run = || -> Result<ContractionReport> {
            let big = self.big.space().clone();
            let small = self.small.space().clone();
            let e = self.nabla.compose(&self.pi)?;
            let dh = hom_differential(&self.h, self.big.d(), self.big.d())?;
            let target = e.sub(&GradedMap::identity(big.clone()))?;
            Ok(ContractionReport {
                pi_nabla_is_identity: self.pi.compose(&self.nabla)? == GradedMap::identity(small),
                homotopy_identity: dh.columns() == target.columns(),
                pi_h_zero: self.pi.compose(&self.h)?.is_zero(),
                h_nabla_zero: self.h.compose(&self.nabla)?.is_zero(),
                h_h_zero: self.h.compose(&self.h)?.is_zero(),
                nabla_chain_map: hom_differential(&self.nabla, self.small.d(), self.big.d())?.is_zero(),
                pi_chain_map: hom_differential(&self.pi, self.big.d(), self.small.d())?.is_zero(),
            })
        };
        run().expect("contraction maps were shape-checked at construction")
    }

    /// Enforces the side conditions: `h₁ = (∇π − Id) h (∇π − Id)`, then `h₂ = −h₁ d h₁`.
    /// Requires `π∇ = Id` and `Dh = ∇π − Id`; leaves a normalized homotopy unchanged.
    pub fn normalized(&self) -> Result<Contraction> {
        let r = self.verify();
        if !r.pi_nabla_is_identity || !r.homotopy_identity {
            return Err(Error::InvalidContraction(
                "normalization needs π∇ = Id and Dh = ∇π − Id".into(),
            ));
        }
        let big = self.big.space().clone();
        let p = self.nabla.compose(&self.pi)?.sub(&GradedMap::identity(big))?;
        let h1 = p.compose(&self.h)?.compose(&p)?;
        let h2 = h1.compose(self.big.d())?.compose(&h1)?.neg();
        let mut out = self.clone();
        out.h = if h2.is_zero() {
            GradedMap::zero(h2.source().clone(), h2.target().clone(), 1)
        } else {
            h2
        };
        Ok(out)
    }

    /// The same contraction between suspended complexes; `h` becomes `−s h s⁻¹`.
    pub fn suspend(&self) -> Contraction {
        let big = self.big.suspend();
        let small = self.small.suspend();
        let relabel = |m: &GradedMap, src: &Arc<GradedSpace>, tgt: &Arc<GradedSpace>| {
            m.suspend_map()
                .with_spaces(src.clone(), tgt.clone())
                .expect("suspension keeps the degree layout")
        };
        Contraction {
            nabla: relabel(&self.nabla, small.space(), big.space()),
            pi: relabel(&self.pi, big.space(), small.space()),
            h: relabel(&self.h, big.space(), big.space()),
            big,
            small,
        }
    }

    /// Replaces the projection by a prescribed chain map `π': N → M'` onto a
    /// complex with zero differential, provided `π'∇` is invertible; the
    /// homotopy is corrected and renormalized accordingly.
    pub fn with_projection(&self, pi: GradedMap) -> Result<Contraction> {
        if pi.source() != self.big.space() {
            return Err(Error::SpaceMismatch(
                "prescribed projection must start at the big complex".into(),
            ));
        }
        if !self.small.d().is_zero() {
            return Err(Error::Precondition(
                "starting contraction must have zero small differential".into(),
            ));
        }
        let target = pi.target().clone();
        if !pi.compose(self.big.d())?.is_zero() {
            return Err(Error::Precondition(
                "prescribed projection is not a chain map to a complex with zero differential".into(),
            ));
        }
        let phi = pi.compose(&self.nabla)?;
        let phi_inv = invert(&phi).ok_or_else(|| {
            Error::Precondition("prescribed projection does not induce an isomorphism on homology".into())
        })?;
        let nabla = self.nabla.compose(&phi_inv)?;
        let psi = phi_inv.compose(&pi)?.sub(&self.pi)?;
        let correction = self.nabla.compose(&psi)?.compose(&self.h)?;
        let h = self.h.sub(&correction)?;
        let c = Contraction::new(self.big.clone(), ChainComplex::zero(target), nabla, pi, h)?;
        c.normalized()
    }
}

/// Inverse of a degree-0 map, block by block; `None` if some block is singular.
pub fn invert(f: &GradedMap) -> Option<GradedMap> {
    if f.degree() != 0 || f.source().dim() != f.target().dim() {
        return None;
    }
    let mut cols = vec![SparseVec::new(); f.target().dim()];
    let mut degrees = f.source().degrees();
    degrees.extend(f.target().degrees());
    degrees.sort_unstable();
    degrees.dedup();
    for n in degrees {
        let (m, rows, srcs) = f.block(n);
        let inv = m.inverse()?;
        for (j, &t) in rows.iter().enumerate() {
            cols[t] = from_dense(&inv.column(j), &srcs);
        }
    }
    GradedMap::new(f.target().clone(), f.source().clone(), 0, cols).ok()
}

/// Contraction of a complex onto its homology (with zero differential).
pub fn build_contraction(c: &ChainComplex) -> Contraction {
    let dec = c.decompose();
    let small = Arc::new(dec.small_space());
    let big = c.space().clone();
    let mut nabla_cols = Vec::new();
    let mut pi_cols = vec![SparseVec::new(); big.dim()];
    let mut h_cols = vec![SparseVec::new(); big.dim()];
    let mut offset = 0usize;
    for piece in dec.per_degree.values() {
        let nb = piece.boundaries.len();
        let nh = piece.reps.len();
        for (_, rep) in &piece.reps {
            nabla_cols.push(from_dense(rep, &piece.positions));
        }
        let mut columns: Vec<Vec<Rational>> = piece.boundaries.clone();
        columns.extend(piece.reps.iter().map(|r| r.1.clone()));
        for &k in &piece.complement {
            let mut e = vec![Rational::zero(); piece.positions.len()];
            e[k] = Rational::one();
            columns.push(e);
        }
        let m = Matrix::from_columns(piece.positions.len(), &columns);
        let inv = m
            .inverse()
            .expect("boundaries, representatives and complement form a basis");
        for (j, &s) in piece.positions.iter().enumerate() {
            let coords = inv.column(j);
            let mut p = SparseVec::new();
            for i in 0..nh {
                crate::graded::add_entry(&mut p, offset + i, coords[nb + i].clone());
            }
            pi_cols[s] = p;
            let mut hv = SparseVec::new();
            for (i, &src) in piece.boundary_sources.iter().enumerate() {
                crate::graded::add_entry(&mut hv, src, -coords[i].clone());
            }
            h_cols[s] = hv;
        }
        offset += nh;
    }
    let nabla = GradedMap::new(small.clone(), big.clone(), 0, nabla_cols).expect("representatives are homogeneous");
    let pi = GradedMap::new(big.clone(), small.clone(), 0, pi_cols).expect("coordinates are homogeneous");
    let h = GradedMap::new(big.clone(), big, 1, h_cols).expect("h raises degree by one");
    let raw = Contraction {
        big: c.clone(),
        small: ChainComplex::zero(small),
        nabla,
        pi,
        h,
    };
    raw.normalized().expect("the Hodge splitting is a contraction")
}

/// A degree −1 perturbation of the big complex that strictly lowers a filtration.
#[derive(Clone, Debug)]
pub struct FilteredPerturbation {
    operator: GradedMap,
    filtration: Vec<usize>,
}

impl FilteredPerturbation {
    /// Checks that `∂` strictly lowers `filtration` and that `(d + ∂)² = 0`.
    pub fn new(base: &ChainComplex, operator: GradedMap, filtration: Vec<usize>) -> Result<Self> {
        if operator.source() != base.space() || operator.target() != base.space() {
            return Err(Error::SpaceMismatch("perturbation must act on the big complex".into()));
        }
        if filtration.len() != base.dim() {
            return Err(Error::Filtration("one filtration value per basis element".into()));
        }
        for s in 0..base.dim() {
            for &t in operator.column(s).keys() {
                if filtration[t] >= filtration[s] {
                    return Err(Error::Filtration(format!(
                        "{} ↦ {} does not lower the filtration",
                        base.space().label(s),
                        base.space().label(t)
                    )));
                }
            }
        }
        let operator = if operator.is_zero() {
            GradedMap::zero(base.space().clone(), base.space().clone(), -1)
        } else {
            operator
        };
        if operator.degree() != -1 {
            return Err(Error::DegreeMismatch("perturbation has degree -1".into()));
        }
        let total = base.d().add(&operator)?;
        if !total.compose(&total)?.is_zero() {
            return Err(Error::NotAComplex);
        }
        Ok(FilteredPerturbation { operator, filtration })
    }

    pub fn operator(&self) -> &GradedMap {
        &self.operator
    }

    pub fn filtration(&self) -> &[usize] {
        &self.filtration
    }
}

/// `Σ_{n ≥ 0} f^n` for a nilpotent endomorphism.
fn geometric_series(f: &GradedMap) -> Result<GradedMap> {
    let space = f.source().clone();
    let mut total = GradedMap::identity(space.clone());
    let mut term = GradedMap::identity(space.clone());
    for _ in 0..=space.dim() {
        term = f.compose(&term)?;
        if term.is_zero() {
            return Ok(total);
        }
        total = total.add(&term)?;
    }
    Err(Error::Filtration("perturbation series does not terminate".into()))
}

/// The basic perturbation lemma: the contraction of `(N, d + ∂)` onto
/// `(M, d_M + π∂X∇)` with `X = Σ(h∂)^n`.
pub fn perturbation_lemma(c: &Contraction, p: &FilteredPerturbation) -> Result<Contraction> {
    if p.operator.source() != c.big.space() {
        return Err(Error::SpaceMismatch("perturbation of a different complex".into()));
    }
    let del = &p.operator;
    let x = geometric_series(&c.h.compose(del)?)?;
    let y = geometric_series(&del.compose(&c.h)?)?;
    let nabla = x.compose(&c.nabla)?;
    let h = x.compose(&c.h)?;
    let pi = c.pi.compose(&y)?;
    let small_d = c.small.d().add(&c.pi.compose(del)?.compose(&nabla)?)?;
    let big = ChainComplex::new(c.big.d().add(del)?)?;
    let small = ChainComplex::new(small_d)?;
    Contraction::new(big, small, nabla, pi, h)
}

/// Is `v` in the span of the columns of `f`? (exact solvability of `f ξ = v`)
pub fn in_image(f: &GradedMap, v: &SparseVec) -> bool {
    if v.is_empty() {
        return true;
    }
    let Some(deg) = f.target().degree_of(v) else {
        return false;
    };
    let (m, rows, _) = f.block(deg - f.degree());
    m.solve(&to_dense(v, &rows)).is_some() && v.keys().all(|k| rows.contains(k))
}

/// Basis of `ker f` as sparse vectors.
pub fn kernel_basis(f: &GradedMap) -> Vec<SparseVec> {
    let mut out = Vec::new();
    for n in f.source().degrees() {
        let (m, _, cols) = f.block(n);
        for v in m.kernel() {
            out.push(from_dense(&v, &cols));
        }
    }
    out
}

/// Does a degree-0 chain map `f: (A, d_src) → (B, d_tgt)` induce an isomorphism
/// on homology? Decided per degree by exact rank computations.
pub fn induces_homology_iso(f: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> bool {
    let mut degrees = f.source().degrees();
    degrees.extend(f.target().degrees());
    degrees.sort_unstable();
    degrees.dedup();
    for n in degrees {
        let (ds, _, src_pos) = d_src.block(n);
        let cycles = ds.kernel();
        let src_bound = d_src.block(n + 1).0.rank();
        let h_src = cycles.len() - src_bound;
        let (dt, _, tgt_pos) = d_tgt.block(n);
        let (bt, _, _) = d_tgt.block(n + 1);
        let tgt_bound = bt.rank();
        let h_tgt = dt.kernel().len() - tgt_bound;
        if h_src != h_tgt {
            return false;
        }
        let mut columns: Vec<Vec<Rational>> = (0..bt.cols()).map(|j| bt.column(j)).collect();
        for z in &cycles {
            let image = f.apply(&from_dense(z, &src_pos));
            columns.push(to_dense(&image, &tgt_pos));
        }
        let stacked = Matrix::from_columns(tgt_pos.len(), &columns);
        if stacked.rank() - tgt_bound != h_src {
            return false;
        }
    }
    true
}
