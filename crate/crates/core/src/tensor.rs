//! Contractions induced on the truncated tensor and symmetric coalgebras.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::complex::{ChainComplex, Contraction};
use crate::error::{Error, Result};
use crate::graded::{add_entry, GradedMap, GradedSpace, SparseVec};
use crate::scalar::{sign, Rational};
use crate::symco::{apply_coderivation, lift_degree_zero, linear_cochain, symmetrized_homotopy, SymBasis};

/// All tensor words `x_1 ⊗ ⋯ ⊗ x_k`, `k ≤ N`, ordered by length then lexicographically.
#[derive(Clone, Debug)]
pub struct TensorBasis {
    gens: Arc<GradedSpace>,
    words: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    space: Arc<GradedSpace>,
}

impl TensorBasis {
    pub fn new(gens: Arc<GradedSpace>, max_len: usize) -> Self {
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..gens.dim() {
                    let mut v = w.clone();
                    v.push(g);
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let index = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let space = Arc::new(
            GradedSpace::new(
                words
                    .iter()
                    .map(|w| {
                        let label = if w.is_empty() {
                            "()".to_string()
                        } else {
                            w.iter().map(|&i| gens.label(i)).collect::<Vec<_>>().join("⊗")
                        };
                        (label, w.iter().map(|&i| gens.degree(i)).sum())
                    })
                    .collect(),
            )
            .expect("distinct tensor words have distinct labels"),
        );
        TensorBasis {
            gens,
            words,
            index,
            space,
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn words(&self) -> &[Vec<usize>] {
        &self.words
    }

    pub fn gens(&self) -> &Arc<GradedSpace> {
        &self.gens
    }

    /// Expands `f_1(x_1) ⊗ ⋯ ⊗ f_k(x_k)` given each factor as a sparse vector.
    fn product(&self, factors: &[SparseVec], coeff: &Rational, out: &mut SparseVec) {
        let mut cur = vec![(Vec::new(), coeff.clone())];
        for f in factors {
            let mut next = Vec::new();
            for (w, c) in &cur {
                for (&i, x) in f {
                    let mut v: Vec<usize> = w.clone();
                    v.push(i);
                    next.push((v, c * x));
                }
            }
            cur = next;
        }
        for (w, c) in cur {
            add_entry(out, self.index[&w], c);
        }
    }

    /// `Σ_i ± id^{⊗i} ⊗ f ⊗ g^{⊗j}` with the Koszul sign `(−1)^{|f|(|x_1|+⋯+|x_i|)}`.
    fn side_to_side(&self, target: &TensorBasis, f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
        let mut cols = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let mut out = SparseVec::new();
            let mut prefix = 0i64;
            for i in 0..w.len() {
                let mut factors: Vec<SparseVec> = w[..i].iter().map(|&x| crate::graded::unit(x)).collect();
                factors.push(f.column(w[i]).clone());
                factors.extend(w[i + 1..].iter().map(|&x| g.column(x).clone()));
                target.product(&factors, &sign(f.degree() as i64 * prefix), &mut out);
                prefix += self.gens.degree(w[i]) as i64;
            }
            cols.push(out);
        }
        GradedMap::new(self.space.clone(), target.space.clone(), f.degree(), cols)
    }

    fn lift(&self, target: &TensorBasis, f: &GradedMap) -> Result<GradedMap> {
        let mut cols = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let mut out = SparseVec::new();
            let factors: Vec<SparseVec> = w.iter().map(|&x| f.column(x).clone()).collect();
            target.product(&factors, &Rational::one(), &mut out);
            cols.push(out);
        }
        GradedMap::new(self.space.clone(), target.space.clone(), 0, cols)
    }
}

/// A contraction between truncated coalgebras together with their word bases.
#[derive(Clone, Debug)]
pub struct CoalgebraContraction<B> {
    pub contraction: Contraction,
    pub big_basis: B,
    pub small_basis: B,
}

fn require_valid(c: &Contraction, max_len: usize) -> Result<()> {
    if max_len == 0 {
        return Err(Error::Truncation("a truncation bound of at least 1 is required".into()));
    }
    let r = c.verify();
    if !r.passed() {
        return Err(Error::InvalidContraction(r.failures().join(", ")));
    }
    Ok(())
}

/// `T^c` of a contraction, truncated at word length `max_len`, with
/// `T^c h = Σ id^{⊗i} ⊗ h ⊗ (∇π)^{⊗j}`.
pub fn tensor_coalgebra_contraction(c: &Contraction, max_len: usize) -> Result<CoalgebraContraction<TensorBasis>> {
    require_valid(c, max_len)?;
    let big = TensorBasis::new(c.big().space().clone(), max_len);
    let small = TensorBasis::new(c.small().space().clone(), max_len);
    let id_big = GradedMap::identity(c.big().space().clone());
    let id_small = GradedMap::identity(c.small().space().clone());
    let e = c.nabla().compose(c.pi())?;
    let d_big = big.side_to_side(&big, c.big().d(), &id_big)?;
    let d_small = small.side_to_side(&small, c.small().d(), &id_small)?;
    let h = big.side_to_side(&big, c.h(), &e)?;
    let contraction = Contraction::new(
        ChainComplex::new(zero_to_degree(d_big, -1))?,
        ChainComplex::new(zero_to_degree(d_small, -1))?,
        small.lift(&big, c.nabla())?,
        big.lift(&small, c.pi())?,
        zero_to_degree(h, 1),
    )?;
    Ok(CoalgebraContraction {
        contraction,
        big_basis: big,
        small_basis: small,
    })
}

/// `Σ^c` of a contraction, truncated at word length `max_len`; the homotopy is
/// the symmetrization of the tensor one.
pub fn symmetric_coalgebra_contraction(c: &Contraction, max_len: usize) -> Result<CoalgebraContraction<SymBasis>> {
    require_valid(c, max_len)?;
    let big = SymBasis::new(c.big().space().clone(), max_len);
    let small = SymBasis::new(c.small().space().clone(), max_len);
    let e = c.nabla().compose(c.pi())?;
    let qb = linear_cochain(c.big().d());
    let qs = linear_cochain(c.small().d());
    let d_big = big.operator(&big, -1, |w| Ok(apply_coderivation(&qb, w)))?;
    let d_small = small.operator(&small, -1, |w| Ok(apply_coderivation(&qs, w)))?;
    let nabla = small.operator(&big, 0, |w| Ok(lift_degree_zero(c.nabla(), w)))?;
    let pi = big.operator(&small, 0, |w| Ok(lift_degree_zero(c.pi(), w)))?;
    let h = big.operator(&big, 1, |w| Ok(symmetrized_homotopy(c.h(), &e, w)))?;
    let contraction = Contraction::new(ChainComplex::new(d_big)?, ChainComplex::new(d_small)?, nabla, pi, h)?;
    Ok(CoalgebraContraction {
        contraction,
        big_basis: big,
        small_basis: small,
    })
}

fn zero_to_degree(m: GradedMap, degree: i32) -> GradedMap {
    if m.is_zero() && m.degree() != degree {
        GradedMap::zero(m.source().clone(), m.target().clone(), degree)
    } else {
        m
    }
}
