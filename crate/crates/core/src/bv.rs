//! Gerstenhaber and Batalin–Vilkovisky algebras, weak differential BV data,
//! the Kählerian formality predicate and the transfer along `ker Δ`.
//!
//! Everything in this module uses cohomological degrees: the product has
//! degree 0, the bracket and `Δ` degree −1 and the differential degree +1. The
//! regrading `𝔤_{−p} = 𝒜^{p+1}` turns the bracket into an ordinary dg Lie
//! bracket; in homological degrees an element of cohomological degree `p` sits
//! in degree `1 − p`, the differential keeps its matrix and `Δ` becomes a map of
//! homological degree +1.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::complex::{build_contraction, in_image, induces_homology_iso, kernel_basis, ChainComplex, Contraction};
use crate::dglie::{coordinates_in, is_twisting_cochain, DgLieAlgebra, TwistingReport, TwistingTarget};
use crate::error::{Error, Result};
use crate::graded::{add_entry, add_scaled, scaled, sub, unit, GradedMap, GradedSpace, SparseVec};
use crate::scalar::{ratio, sign, Rational};
use crate::symco::{Cochain, SymBasis, SymWord};
use crate::transfer::{subalgebra_transfer, MasterReport, SubalgebraTransfer};

/// Full product or bracket table indexed by ordered pairs of basis elements.
pub type PairTable = BTreeMap<(usize, usize), SparseVec>;

fn zero_or(map: Option<GradedMap>, space: &Arc<GradedSpace>, degree: i32, what: &str) -> Result<GradedMap> {
    let map = match map {
        Some(m) if !m.is_zero() => m,
        _ => return Ok(GradedMap::zero(space.clone(), space.clone(), degree)),
    };
    if map.source() != space || map.target() != space {
        return Err(Error::SpaceMismatch(format!("{what} must act on the algebra")));
    }
    if map.degree() != degree {
        return Err(Error::DegreeMismatch(format!(
            "{what} has cohomological degree {degree}"
        )));
    }
    Ok(map)
}

fn bilinear(table: &PairTable, a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (&i, x) in a {
        for (&j, y) in b {
            if let Some(v) = table.get(&(i, j)) {
                add_scaled(&mut out, v, &(x * y));
            }
        }
    }
    out
}

fn check_pair_degree(space: &GradedSpace, i: usize, j: usize, v: &SparseVec, shift: i32) -> Result<()> {
    let expected = space.degree(i) + space.degree(j) + shift;
    if v.keys().any(|&k| space.degree(k) != expected) {
        return Err(Error::DegreeMismatch(format!(
            "({}, {}) must land in degree {expected}",
            space.label(i),
            space.label(j)
        )));
    }
    Ok(())
}

/// A graded commutative algebra with unit and an optional differential of
/// degree +1, cohomologically graded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativeAlgebra {
    space: Arc<GradedSpace>,
    d: GradedMap,
    product: PairTable,
    unit: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommutativeAlgebraReport {
    pub differential_squares_to_zero: bool,
    pub associativity_failures: Vec<(usize, usize, usize)>,
    /// pairs where `d(ab) ≠ (da)b + (−1)^{|a|} a(db)`
    pub leibniz_failures: Vec<(usize, usize)>,
    /// `d(1) = 0` (vacuous without a unit)
    pub unit_law: bool,
}

impl CommutativeAlgebraReport {
    pub fn passed(&self) -> bool {
        self.differential_squares_to_zero
            && self.associativity_failures.is_empty()
            && self.leibniz_failures.is_empty()
            && self.unit_law
    }
}

impl CommutativeAlgebra {
    /// Entries `(i, j, k, c)` mean `e_i e_j ∋ c e_k`; the opposite order is filled
    /// in by graded commutativity, and an explicitly given opposite entry must agree.
    pub fn new(
        space: Arc<GradedSpace>,
        d: Option<GradedMap>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let d = zero_or(d, &space, 1, "the differential")?;
        let n = space.dim();
        let mut given: PairTable = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::SpaceMismatch("product entry out of range".into()));
            }
            add_entry(given.entry((i, j)).or_default(), k, c);
        }
        let deg = |i: usize| space.degree(i) as i64;
        let mut product: PairTable = BTreeMap::new();
        for (&(i, j), v) in &given {
            check_pair_degree(&space, i, j, v, 0)?;
            let swapped = scaled(v, &sign(deg(i) * deg(j)));
            if let Some(w) = given.get(&(j, i)) {
                if *w != swapped {
                    return Err(Error::InvalidStructure(format!(
                        "products ({0}, {1}) and ({1}, {0}) violate graded commutativity",
                        space.label(i),
                        space.label(j)
                    )));
                }
            }
            if i == j && deg(i) % 2 != 0 && !v.is_empty() {
                return Err(Error::InvalidStructure(format!(
                    "odd element {} must square to zero",
                    space.label(i)
                )));
            }
            if !v.is_empty() {
                product.insert((i, j), v.clone());
                product.insert((j, i), swapped);
            }
        }
        if let Some(u) = unit {
            if u >= n || space.degree(u) != 0 {
                return Err(Error::InvalidStructure("the unit is a degree 0 basis element".into()));
            }
            for i in 0..n {
                for key in [(u, i), (i, u)] {
                    if product.get(&key).is_some_and(|v| *v != crate::graded::unit(i)) {
                        return Err(Error::InvalidStructure("unit products are fixed".into()));
                    }
                    product.insert(key, crate::graded::unit(i));
                }
            }
        }
        Ok(CommutativeAlgebra {
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

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn product_table(&self) -> &PairTable {
        &self.product
    }

    pub fn mul(&self, i: usize, j: usize) -> SparseVec {
        self.product.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        bilinear(&self.product, a, b)
    }

    /// The same algebra with another differential.
    pub fn with_differential(&self, d: GradedMap) -> Result<Self> {
        Ok(CommutativeAlgebra {
            d: zero_or(Some(d), &self.space, 1, "the differential")?,
            ..self.clone()
        })
    }

    pub fn validate(&self) -> CommutativeAlgebraReport {
        let n = self.dim();
        let deg = |i: usize| self.space.degree(i) as i64;
        let mut r = CommutativeAlgebraReport {
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
}

/// A commutative algebra with a bracket of degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GerstenhaberAlgebra {
    algebra: CommutativeAlgebra,
    bracket: PairTable,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GerstenhaberReport {
    pub algebra: CommutativeAlgebraReport,
    /// `[a,b] = −(−1)^{(|a|−1)(|b|−1)}[b,a]`
    pub antisymmetry_failures: Vec<(usize, usize)>,
    /// `[a,[b,c]] = [[a,b],c] + (−1)^{(|a|−1)(|b|−1)}[b,[a,c]]`
    pub jacobi_failures: Vec<(usize, usize, usize)>,
    /// `[a,bc] = [a,b]c + (−1)^{(|a|−1)|b|} b[a,c]`
    pub poisson_failures: Vec<(usize, usize, usize)>,
    /// `d[a,b] = [da,b] − (−1)^{|a|}[a,db]`
    pub differential_failures: Vec<(usize, usize)>,
}

impl GerstenhaberReport {
    pub fn passed(&self) -> bool {
        self.algebra.passed()
            && self.antisymmetry_failures.is_empty()
            && self.jacobi_failures.is_empty()
            && self.poisson_failures.is_empty()
            && self.differential_failures.is_empty()
    }
}

impl GerstenhaberAlgebra {
    /// Entries `(i, j, k, c)` mean `[e_i, e_j] ∋ c e_k`; the opposite order is
    /// filled in by shifted antisymmetry.
    pub fn new(
        algebra: CommutativeAlgebra,
        entries: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let space = algebra.space().clone();
        let n = space.dim();
        let mut given: PairTable = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= n || j >= n || k >= n {
                return Err(Error::SpaceMismatch("bracket entry out of range".into()));
            }
            add_entry(given.entry((i, j)).or_default(), k, c);
        }
        let shifted = |i: usize| space.degree(i) as i64 - 1;
        let mut bracket = BTreeMap::new();
        for (&(i, j), v) in &given {
            check_pair_degree(&space, i, j, v, -1)?;
            let swapped = scaled(v, &-sign(shifted(i) * shifted(j)));
            if let Some(w) = given.get(&(j, i)) {
                if *w != swapped {
                    return Err(Error::InvalidStructure(format!(
                        "brackets ({0}, {1}) and ({1}, {0}) violate shifted antisymmetry",
                        space.label(i),
                        space.label(j)
                    )));
                }
            }
            if !v.is_empty() {
                bracket.insert((i, j), v.clone());
                bracket.insert((j, i), swapped);
            }
        }
        Ok(GerstenhaberAlgebra { algebra, bracket })
    }

    pub fn algebra(&self) -> &CommutativeAlgebra {
        &self.algebra
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.algebra.space()
    }

    pub fn bracket_table(&self) -> &PairTable {
        &self.bracket
    }

    pub fn bracket(&self, i: usize, j: usize) -> SparseVec {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn bracket_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        bilinear(&self.bracket, a, b)
    }

    pub fn is_zero_bracket(&self) -> bool {
        self.bracket.is_empty()
    }

    pub fn validate(&self) -> GerstenhaberReport {
        let space = self.space();
        let n = space.dim();
        let deg = |i: usize| space.degree(i) as i64;
        let alg = &self.algebra;
        let d = alg.d();
        let mut r = GerstenhaberReport {
            algebra: alg.validate(),
            ..Default::default()
        };
        for a in 0..n {
            for b in 0..n {
                let ab = self.bracket(a, b);
                if ab != scaled(&self.bracket(b, a), &-sign((deg(a) - 1) * (deg(b) - 1))) {
                    r.antisymmetry_failures.push((a, b));
                }
                let lhs = d.apply(&ab);
                let mut rhs = self.bracket_vec(d.column(a), &unit(b));
                add_scaled(&mut rhs, &self.bracket_vec(&unit(a), d.column(b)), &-sign(deg(a)));
                if lhs != rhs {
                    r.differential_failures.push((a, b));
                }
                for c in 0..n {
                    let lhs = self.bracket_vec(&unit(a), &self.bracket(b, c));
                    let mut rhs = self.bracket_vec(&ab, &unit(c));
                    add_scaled(
                        &mut rhs,
                        &self.bracket_vec(&unit(b), &self.bracket(a, c)),
                        &sign((deg(a) - 1) * (deg(b) - 1)),
                    );
                    if lhs != rhs {
                        r.jacobi_failures.push((a, b, c));
                    }
                    let lhs = self.bracket_vec(&unit(a), &alg.mul(b, c));
                    let mut rhs = alg.mul_vec(&ab, &unit(c));
                    add_scaled(
                        &mut rhs,
                        &alg.mul_vec(&unit(b), &self.bracket(a, c)),
                        &sign((deg(a) - 1) * deg(b)),
                    );
                    if lhs != rhs {
                        r.poisson_failures.push((a, b, c));
                    }
                }
            }
        }
        r
    }

    /// The dg Lie algebra `𝔤` with `𝔤_{−p} = 𝒜^{p+1}`: same labels and matrices,
    /// homological degree `1 − p` for an element of cohomological degree `p`.
    pub fn regraded(&self) -> Result<DgLieAlgebra> {
        let space = Arc::new(regraded_space(self.space())?);
        let d = GradedMap::new(space.clone(), space.clone(), -1, self.algebra.d().columns().to_vec())?;
        let table = self
            .bracket
            .iter()
            .filter(|((i, j), _)| i <= j)
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        DgLieAlgebra::from_table(space, d, table, Vec::new())
    }
}

/// Homological degrees `1 − p` for cohomological degrees `p`.
pub fn regraded_space(space: &GradedSpace) -> Result<GradedSpace> {
    GradedSpace::new(space.basis().iter().map(|(l, p)| (l.clone(), 1 - p)).collect())
}

/// The bracket generated by `Δ`:
/// `[a,b] = (−1)^{|a|}(Δ(ab) − (Δa)b − (−1)^{|a|} a(Δb))`.
pub fn bracket_from_generator(algebra: &CommutativeAlgebra, delta: &GradedMap) -> Result<GerstenhaberAlgebra> {
    let delta = zero_or(Some(delta.clone()), algebra.space(), -1, "the generator")?;
    let space = algebra.space();
    let n = space.dim();
    let deg = |i: usize| space.degree(i) as i64;
    let mut entries = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut v = delta.apply(&algebra.mul(a, b));
            add_scaled(
                &mut v,
                &algebra.mul_vec(delta.column(a), &unit(b)),
                &-Rational::from_integer(1.into()),
            );
            add_scaled(&mut v, &algebra.mul_vec(&unit(a), delta.column(b)), &-sign(deg(a)));
            for (k, c) in scaled(&v, &sign(deg(a))) {
                entries.push((a, b, k, c));
            }
        }
    }
    GerstenhaberAlgebra::new(algebra.clone(), entries)
}

/// A commutative algebra with a differential `d` and a generator `Δ` of degree −1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvData {
    gerstenhaber: GerstenhaberAlgebra,
    delta: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BvReport {
    pub gerstenhaber: GerstenhaberReport,
    /// `ΔΔ = 0`
    pub exact: bool,
    /// `[d,Δ] = dΔ + Δd = 0`
    pub weak_differential: bool,
    /// `Δ(1) = 0` (vacuous without a unit)
    pub delta_kills_unit: bool,
}

impl BvReport {
    /// The structure is a weak differential BV algebra with exact generator.
    pub fn passed(&self) -> bool {
        self.gerstenhaber.passed() && self.exact && self.weak_differential && self.delta_kills_unit
    }

    pub fn failures(&self) -> Vec<String> {
        let g = &self.gerstenhaber;
        let a = &g.algebra;
        let mut out = Vec::new();
        let mut note = |ok: bool, what: &str| {
            if !ok {
                out.push(what.to_string());
            }
        };
        note(a.differential_squares_to_zero, "dd = 0");
        note(a.associativity_failures.is_empty(), "associativity");
        note(a.leibniz_failures.is_empty(), "d is a derivation of the product");
        note(a.unit_law, "d(1) = 0");
        note(g.antisymmetry_failures.is_empty(), "bracket antisymmetry");
        note(g.jacobi_failures.is_empty(), "bracket Jacobi");
        note(g.poisson_failures.is_empty(), "bracket is a derivation of the product");
        note(g.differential_failures.is_empty(), "d is a derivation of the bracket");
        note(self.exact, "ΔΔ = 0");
        note(self.weak_differential, "[d,Δ] = 0");
        note(self.delta_kills_unit, "Δ(1) = 0");
        out
    }
}

/// `Δ[x,y] = [Δx,y] − (−1)^{|x|}[x,Δy]`, asserted only for exact generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulReport {
    pub applicable: bool,
    pub failures: Vec<(usize, usize)>,
}

impl KoszulReport {
    pub fn passed(&self) -> bool {
        self.applicable && self.failures.is_empty()
    }
}

/// `d[x,y] = [dx,y] − (−1)^{|x|}[x,dy]` on all basis pairs of a weak dBV algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialGerstenhaberReport {
    pub failures: Vec<(usize, usize)>,
}

impl DifferentialGerstenhaberReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Both maps `(ker Δ, d) → (𝒜, d)` and `(ker Δ, d) → (H(𝒜,Δ), 0)` checked for
/// being quasi-isomorphisms by exact rank computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalityLemmaReport {
    pub kernel_dim: usize,
    /// total dimension of `H(𝒜, d)`
    pub homology_d_dim: usize,
    /// total dimension of `H(ker Δ, d)`
    pub homology_kernel_dim: usize,
    /// total dimension of `H(𝒜, Δ)`
    pub homology_delta_dim: usize,
    pub inclusion_quasi_iso: bool,
    /// the projection `ker Δ → H(𝒜,Δ)` kills `d(ker Δ)`
    pub projection_chain_map: bool,
    pub projection_quasi_iso: bool,
}

impl FormalityLemmaReport {
    pub fn passed(&self) -> bool {
        self.inclusion_quasi_iso && self.projection_chain_map && self.projection_quasi_iso
    }
}

/// `H(𝒜,Δ)` in homological degrees together with the projection from `𝔤` and
/// representatives, computed through the complex `(𝒜, Δ)` with negated degrees.
struct DeltaHomology {
    space: Arc<GradedSpace>,
    proj: GradedMap,
}

fn delta_homology(space: &Arc<GradedSpace>, delta: &GradedMap) -> Result<DeltaHomology> {
    let negate = |s: &GradedSpace| GradedSpace::new(s.basis().iter().map(|(l, d)| (l.clone(), -d)).collect());
    let neg = Arc::new(negate(space)?);
    let cx = ChainComplex::new(GradedMap::new(neg.clone(), neg.clone(), -1, delta.columns().to_vec())?)?;
    let c = build_contraction(&cx);
    let h = Arc::new(negate(c.small().space())?);
    let proj = GradedMap::new(space.clone(), h.clone(), 0, c.pi().columns().to_vec())?;
    Ok(DeltaHomology { space: h, proj })
}

/// `ker f` as a subspace with labels: a basis vector keeps its label, other
/// kernel vectors are named `k0, k1, …`.
fn kernel_subspace(f: &GradedMap) -> Result<(Vec<SparseVec>, Vec<String>)> {
    let vectors = kernel_basis(f);
    let labels = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| match v.iter().next() {
            Some((&k, x)) if v.len() == 1 && x == &Rational::from_integer(1.into()) => f.source().label(k).to_string(),
            _ => format!("k{i}"),
        })
        .collect::<Vec<_>>();
    let unique: BTreeSet<&String> = labels.iter().collect();
    if unique.len() != labels.len() {
        return Ok((vectors.clone(), (0..vectors.len()).map(|i| format!("k{i}")).collect()));
    }
    Ok((vectors, labels))
}

fn restrict(f: &GradedMap, incl: &GradedMap) -> Result<GradedMap> {
    let mut cols = Vec::new();
    for v in incl.columns() {
        let image = f.apply(v);
        cols.push(
            coordinates_in(incl, &image)
                .ok_or_else(|| Error::Precondition("the kernel of Δ is not stable under d".into()))?,
        );
    }
    GradedMap::new(incl.source().clone(), incl.source().clone(), f.degree(), cols)
}

fn total(dims: &BTreeMap<i32, usize>) -> usize {
    dims.values().sum()
}

/// The formality predicate for a dg Lie algebra `g` with an exact operator
/// `delta` of homological degree +1 commuting with `d` up to sign.
fn lemma_report(g: &DgLieAlgebra, delta: &GradedMap) -> Result<FormalityLemmaReport> {
    let (vectors, labels) = kernel_subspace(delta)?;
    let k_space = Arc::new(GradedSpace::new(
        vectors
            .iter()
            .zip(labels)
            .map(|(v, l)| (l, g.space().degree_of(v).expect("kernel vectors are homogeneous")))
            .collect(),
    )?);
    let incl = GradedMap::new(k_space.clone(), g.space().clone(), 0, vectors)?;
    let d_k = restrict(g.d(), &incl)?;
    let hd = delta_homology(g.space(), delta)?;
    let proj_k = hd.proj.compose(&incl)?;
    let zero_h = GradedMap::zero(hd.space.clone(), hd.space.clone(), -1);
    let projection_chain_map = proj_k.compose(&d_k)?.is_zero();
    let negated = GradedSpace::new(g.space().basis().iter().map(|(l, d)| (l.clone(), -d)).collect())?;
    let delta_neg = GradedMap::new(
        Arc::new(negated.clone()),
        Arc::new(negated),
        -1,
        delta.columns().to_vec(),
    )?;
    Ok(FormalityLemmaReport {
        kernel_dim: k_space.dim(),
        homology_d_dim: total(&g.complex()?.homology_dims()),
        homology_kernel_dim: total(&ChainComplex::new(d_k.clone())?.homology_dims()),
        homology_delta_dim: total(&ChainComplex::new(delta_neg)?.homology_dims()),
        inclusion_quasi_iso: induces_homology_iso(&incl, &d_k, g.d()),
        projection_chain_map,
        projection_quasi_iso: projection_chain_map && induces_homology_iso(&proj_k, &d_k, &zero_h),
    })
}

/// The transfer along `𝔪 = ker Δ` onto `H(𝒜,Δ)` for a regraded algebra.
#[derive(Clone, Debug)]
pub struct KernelTransfer {
    /// `𝔪 = (ker Δ, d|)` as a sub dg Lie algebra
    pub kernel: DgLieAlgebra,
    pub inclusion: GradedMap,
    /// contraction of `𝔪` onto `H(𝒜,Δ)` whose projection is the quotient map
    pub contraction: Contraction,
    pub transfer: SubalgebraTransfer,
}

fn kernel_transfer(g: &DgLieAlgebra, delta: &GradedMap, max_len: usize) -> Result<KernelTransfer> {
    let (vectors, labels) = kernel_subspace(delta)?;
    let (kernel, inclusion) = g.subalgebra(&vectors, labels)?;
    let hd = delta_homology(g.space(), delta)?;
    let proj = hd
        .proj
        .compose(&inclusion)?
        .with_spaces(kernel.space().clone(), hd.space.clone())?;
    let contraction = build_contraction(&kernel.complex()?).with_projection(proj)?;
    let transfer = subalgebra_transfer(g, &kernel, &inclusion, &contraction, max_len)?;
    Ok(KernelTransfer {
        kernel,
        inclusion,
        contraction,
        transfer,
    })
}

/// Outcome of the transfer along `ker Δ` with the three asserted properties.
#[derive(Clone, Debug)]
pub struct KernelPipeline {
    pub lemma: FormalityLemmaReport,
    /// the regraded dg Lie algebra `𝔤`
    pub lie: DgLieAlgebra,
    pub kernel: KernelTransfer,
    /// `Δ∘τ = 0` on every word
    pub delta_kills_tau: bool,
    /// `πτ` is the universal twisting cochain of `H`
    pub projection_is_universal: bool,
    /// every value of `τ` on words of length ≥ 2 lies in `im Δ`
    pub higher_values_in_image: bool,
    /// `Dτ = ½[τ,τ]` on words of length `≤ N − 1`
    pub master: MasterReport,
    /// the master equation rewritten in cohomological degrees, evaluated with
    /// the Gerstenhaber bracket of `𝒜`
    pub cohomological_master: bool,
    /// cohomological degree of `τ` read off every nonzero component
    pub cohomological_degrees: BTreeSet<i32>,
    /// the transferred differential on `Σ^c[sH]` is zero
    pub formal: bool,
}

impl KernelPipeline {
    pub fn tau(&self) -> &Cochain {
        &self.kernel.transfer.tau
    }

    pub fn passed(&self) -> bool {
        self.lemma.passed()
            && self.delta_kills_tau
            && self.projection_is_universal
            && self.higher_values_in_image
            && self.master.passed()
            && self.cohomological_master
            && self.cohomological_degrees.iter().all(|&d| d == 2)
            && self.formal
    }
}

/// The master equation in cohomological form. Letters of `S⁻¹H` carry the
/// cohomological degree `−(homological degree of the suspended letter)`, `τ`
/// has cohomological degree 2, and since the bracket is odd the Koszul sign for
/// moving `τ` past a subword uses `|τ| − 1`.
fn cohomological_master_holds(ger: &GerstenhaberAlgebra, tau: &Cochain, max_len: usize) -> (bool, BTreeSet<i32>) {
    let gens = tau.source().clone();
    let coh_letter = |i: usize| -(gens.degree(i) as i64);
    let coh_value = |v: &SparseVec| ger.space().degree_of(v).map(|p| p as i64);
    let mut degrees = BTreeSet::new();
    for (w, v) in tau.values() {
        if let Some(p) = coh_value(v) {
            let letters: i64 = w.factors().iter().map(|&i| coh_letter(i)).sum();
            degrees.insert((p - letters) as i32);
        }
    }
    let tau_degree = 2i64;
    let basis = SymBasis::new(gens.clone(), max_len);
    let d = ger.algebra().d();
    for w in basis.words() {
        if w.is_empty() {
            continue;
        }
        let f = w.factors();
        let n = f.len();
        let mut half = SparseVec::new();
        for mask in 1..(1u64 << n) - 1 {
            let left: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).map(|p| f[p]).collect();
            let right: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 0).map(|p| f[p]).collect();
            let x = tau.eval_positional(&left);
            let y = tau.eval_positional(&right);
            if x.is_empty() || y.is_empty() {
                continue;
            }
            let mut e = 0i64;
            for (i, &a) in f.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (j, &b) in f.iter().enumerate().take(i) {
                        if mask >> j & 1 == 0 {
                            e += coh_letter(a) * coh_letter(b);
                        }
                    }
                }
            }
            let left_degree: i64 = left.iter().map(|&i| coh_letter(i)).sum();
            e += (tau_degree - 1) * left_degree;
            add_scaled(&mut half, &ger.bracket_vec(&x, &y), &sign(e));
        }
        let defect = sub(&d.apply(&tau.value(w)), &scaled(&half, &ratio(1, 2)));
        if !defect.is_empty() {
            return (false, degrees);
        }
    }
    (true, degrees)
}

impl BvData {
    pub fn new(gerstenhaber_source: CommutativeAlgebra, delta: GradedMap) -> Result<Self> {
        let gerstenhaber = bracket_from_generator(&gerstenhaber_source, &delta)?;
        let delta = zero_or(Some(delta), gerstenhaber_source.space(), -1, "the generator")?;
        Ok(BvData { gerstenhaber, delta })
    }

    pub fn algebra(&self) -> &CommutativeAlgebra {
        self.gerstenhaber.algebra()
    }

    pub fn gerstenhaber(&self) -> &GerstenhaberAlgebra {
        &self.gerstenhaber
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        self.algebra().space()
    }

    pub fn d(&self) -> &GradedMap {
        self.algebra().d()
    }

    pub fn delta(&self) -> &GradedMap {
        &self.delta
    }

    pub fn is_exact(&self) -> bool {
        self.delta.compose(&self.delta).map(|m| m.is_zero()).unwrap_or(false)
    }

    /// `[d,Δ] = dΔ + Δd` (both maps are odd).
    pub fn commutator_with_d(&self) -> GradedMap {
        let a = self.d().compose(&self.delta).expect("endomorphisms compose");
        let b = self.delta.compose(self.d()).expect("endomorphisms compose");
        a.add(&b).expect("same degree")
    }

    pub fn is_weak_differential(&self) -> bool {
        self.commutator_with_d().is_zero()
    }

    pub fn validate(&self) -> BvReport {
        BvReport {
            gerstenhaber: self.gerstenhaber.validate(),
            exact: self.is_exact(),
            weak_differential: self.is_weak_differential(),
            delta_kills_unit: self.algebra().unit().is_none_or(|u| self.delta.column(u).is_empty()),
        }
    }

    /// The regraded dg Lie algebra and `Δ` as a map of homological degree +1 on it.
    pub fn regraded(&self) -> Result<(DgLieAlgebra, GradedMap)> {
        let lie = self.gerstenhaber.regraded()?;
        let delta = GradedMap::new(
            lie.space().clone(),
            lie.space().clone(),
            1,
            self.delta.columns().to_vec(),
        )?;
        Ok((lie, delta))
    }

    pub fn koszul_identity_check(&self) -> KoszulReport {
        if !self.is_exact() {
            return KoszulReport {
                applicable: false,
                failures: Vec::new(),
            };
        }
        let g = &self.gerstenhaber;
        let n = self.space().dim();
        let mut failures = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let lhs = self.delta.apply(&g.bracket(x, y));
                let mut rhs = g.bracket_vec(self.delta.column(x), &unit(y));
                add_scaled(
                    &mut rhs,
                    &g.bracket_vec(&unit(x), self.delta.column(y)),
                    &-sign(self.space().degree(x) as i64),
                );
                if lhs != rhs {
                    failures.push((x, y));
                }
            }
        }
        KoszulReport {
            applicable: true,
            failures,
        }
    }

    /// `d` is a derivation of the generated bracket; requires `[d,Δ] = 0`.
    pub fn differential_gerstenhaber_check(&self) -> Result<DifferentialGerstenhaberReport> {
        if !self.is_weak_differential() {
            return Err(Error::Precondition("[d,Δ] ≠ 0".into()));
        }
        Ok(DifferentialGerstenhaberReport {
            failures: self.gerstenhaber.validate().differential_failures,
        })
    }

    fn check_lemma_preconditions(&self) -> Result<()> {
        if !self.is_exact() {
            return Err(Error::Precondition("ΔΔ ≠ 0".into()));
        }
        if !self.algebra().validate().differential_squares_to_zero {
            return Err(Error::Precondition("dd ≠ 0".into()));
        }
        if !self.is_weak_differential() {
            return Err(Error::Precondition("[d,Δ] ≠ 0".into()));
        }
        Ok(())
    }

    /// Are `(ker Δ, d) → (𝒜, d)` and `(ker Δ, d) → H(𝒜,Δ)` quasi-isomorphisms?
    pub fn kahler_formality_check(&self) -> Result<FormalityLemmaReport> {
        self.check_lemma_preconditions()?;
        let (lie, delta) = self.regraded()?;
        lemma_report(&lie, &delta)
    }

    /// Transfer along `𝔪 = ker Δ` with the quotient map onto `H(𝒜,Δ)` as
    /// projection, and the three asserted properties of the resulting `τ`.
    pub fn kernel_pipeline(&self, max_len: usize) -> Result<KernelPipeline> {
        let lemma = self.kahler_formality_check()?;
        if !lemma.passed() {
            return Err(Error::Precondition("the formality predicate fails".into()));
        }
        let (lie, delta) = self.regraded()?;
        let kernel = kernel_transfer(&lie, &delta, max_len)?;
        let tau = &kernel.transfer.tau;
        let delta_kills_tau = tau.values().values().all(|v| delta.apply(v).is_empty());
        let higher_values_in_image = tau
            .values()
            .iter()
            .filter(|(w, _)| w.len() >= 2)
            .all(|(_, v)| in_image(&delta, v));
        let (cohomological_master, cohomological_degrees) =
            cohomological_master_holds(&self.gerstenhaber, tau, max_len.saturating_sub(1));
        Ok(KernelPipeline {
            lemma,
            delta_kills_tau,
            projection_is_universal: kernel.transfer.projection_is_universal,
            higher_values_in_image,
            master: kernel.transfer.master.clone(),
            cohomological_master,
            cohomological_degrees,
            // the transfer refuses a nonzero differential on Σ^c[sH]
            formal: true,
            lie,
            kernel,
        })
    }

    /// The split variant for an algebra with `𝒜⁰ = ℚ·1`: transfer on the part
    /// `g̃` of nonzero cohomological degree and recombine with the rank-one
    /// universal cochain of the unit.
    pub fn flat_identity_pipeline(&self, max_len: usize) -> Result<FlatIdentity> {
        let u = self
            .algebra()
            .unit()
            .ok_or_else(|| Error::Precondition("the algebra has no unit".into()))?;
        if self.space().indices_in_degree(0) != vec![u] {
            return Err(Error::Precondition("degree 0 is not spanned by the unit".into()));
        }
        if !self.delta.column(u).is_empty() {
            return Err(Error::Precondition("Δ(1) ≠ 0".into()));
        }
        self.check_lemma_preconditions()?;
        if in_image(&self.delta, &unit(u)) {
            return Err(Error::Precondition("the class of 1 vanishes in H(𝒜,Δ)".into()));
        }
        let (lie, delta) = self.regraded()?;
        let rest: Vec<usize> = (0..lie.dim()).filter(|&i| i != u).collect();
        let position = |i: usize| rest.iter().position(|&r| r == i);
        let vectors: Vec<SparseVec> = rest.iter().map(|&i| unit(i)).collect();
        let labels = rest.iter().map(|&i| lie.space().label(i).to_string()).collect();
        let (tilde, tilde_incl) = lie
            .subalgebra(&vectors, labels)
            .map_err(|_| Error::Precondition("the part of nonzero degree is not a sub dg Lie algebra".into()))?;
        if rest
            .iter()
            .any(|&i| lie.d().column(i).contains_key(&u) || !lie.bracket(u, i).is_empty())
        {
            return Err(Error::Precondition(
                "the unit does not split off as a direct summand".into(),
            ));
        }
        let mut cols = Vec::new();
        for &i in &rest {
            let mut col = SparseVec::new();
            for (&k, x) in delta.column(i) {
                let p = position(k).ok_or_else(|| Error::Precondition("Δ hits the unit".into()))?;
                col.insert(p, x.clone());
            }
            cols.push(col);
        }
        let delta_tilde = GradedMap::new(tilde.space().clone(), tilde.space().clone(), 1, cols)?;
        let lemma = lemma_report(&tilde, &delta_tilde)?;
        if !lemma.passed() {
            return Err(Error::Precondition(
                "the formality predicate fails on the part of nonzero degree".into(),
            ));
        }
        let kernel = kernel_transfer(&tilde, &delta_tilde, max_len)?;
        let tau_tilde = kernel.transfer.tau.then(&tilde_incl)?;

        // H = ℚ[1] ⊕ H̃ with the unit class first
        let h_tilde = kernel.contraction.small().space();
        let mut h_basis = vec![(lie.space().label(u).to_string(), lie.space().degree(u))];
        h_basis.extend(h_tilde.basis().iter().cloned());
        let h = Arc::new(GradedSpace::new(h_basis)?);
        let gens = Arc::new(h.suspend());
        let basis = SymBasis::new(gens.clone(), max_len);
        let mut tau = Cochain::zero(gens.clone(), lie.space().clone(), -1);
        let tilde_gens = tau_tilde.source().clone();
        for w in basis.words() {
            let f = w.factors();
            if f.is_empty() {
                continue;
            }
            let value = if f == [0] {
                unit(u)
            } else if f.iter().all(|&i| i > 0) {
                let shifted: Vec<usize> = f.iter().map(|&i| i - 1).collect();
                match SymWord::canonical(&tilde_gens, &shifted) {
                    Some((word, s)) => scaled(&tau_tilde.value(&word), &s),
                    None => SparseVec::new(),
                }
            } else {
                SparseVec::new()
            };
            tau.set(w.clone(), value)?;
        }
        let zero = Cochain::zero(gens.clone(), gens, -1);
        let master = is_twisting_cochain(&tau, &zero, TwistingTarget::Lie(&lie), max_len - 1)?;
        let higher_values_in_tilde = tau
            .values()
            .iter()
            .filter(|(w, _)| w.len() >= 2)
            .all(|(_, v)| !v.contains_key(&u));
        let delta_kills_tau = tau.values().values().all(|v| delta.apply(v).is_empty());
        let higher_values_in_image = tau
            .values()
            .iter()
            .filter(|(w, _)| w.len() >= 2)
            .all(|(_, v)| in_image(&delta, v));
        let projection_is_universal = kernel.transfer.projection_is_universal;
        Ok(FlatIdentity {
            lemma,
            homology: h,
            tau,
            master,
            higher_values_in_tilde,
            delta_kills_tau,
            higher_values_in_image,
            projection_is_universal,
            tilde: kernel,
        })
    }
}

/// Outcome of the split transfer `τ = ε⊗τ̃ + τ₀⊗ε`.
#[derive(Clone, Debug)]
pub struct FlatIdentity {
    /// the formality predicate on the part of nonzero degree
    pub lemma: FormalityLemmaReport,
    /// `H = ℚ[1] ⊕ H̃`, the unit class first
    pub homology: Arc<GradedSpace>,
    /// the combined cochain with values in `𝔤`
    pub tau: Cochain,
    pub master: TwistingReport,
    /// every value on words of length ≥ 2 lies in `g̃`
    pub higher_values_in_tilde: bool,
    pub delta_kills_tau: bool,
    pub higher_values_in_image: bool,
    /// `πτ̃` is universal on `H̃`
    pub projection_is_universal: bool,
    /// the transfer on `g̃`
    pub tilde: KernelTransfer,
}

impl FlatIdentity {
    pub fn passed(&self) -> bool {
        self.lemma.passed()
            && self.master.passed()
            && self.higher_values_in_tilde
            && self.delta_kills_tau
            && self.higher_values_in_image
            && self.projection_is_universal
    }
}
