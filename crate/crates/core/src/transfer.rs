//! Homotopy transfer of a dg Lie structure to homology.
//!
//! Given a contraction of `𝔤` onto `H` (with zero differential), the twisting
//! cochain `τ = Σ τ^b: Σ^c[sH] → 𝔤` and the coderivation `𝒟 = Σ 𝒟^b` on
//! `Σ^c[sH]` are built word length by word length:
//!
//! * `τ¹(sx̄) = ∇x̄`;
//! * `R_b = ½ Σ_{i+j=b} [τ^i, τ^j]` (cup bracket over the unperturbed diagonal);
//! * `τ^b = −h R_b` and `𝒟^{b−1} = s π R_b`.
//!
//! The minus sign in `τ^b` matches the homotopy identity `Dh = ∇π − Id`.

use std::sync::Arc;

use crate::complex::{induces_homology_iso, perturbation_lemma, Contraction, FilteredPerturbation};
use crate::dglie::{ce_coderivation, half_self_bracket, master_defect_on_word, DgLieAlgebra, TwistingTarget};
use crate::error::{Error, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::symco::{
    apply_coderivation, apply_coderivation_vec, apply_morphism, apply_morphism_vec, Cochain, LInfinityStructure,
    ShLieReport, SymBasis, SymWord, TruncatedSymCoalgebra,
};
use crate::tensor::symmetric_coalgebra_contraction;

/// Output of the transfer recursion.
#[derive(Clone, Debug)]
pub struct TransferResult {
    pub truncation: usize,
    /// words of `Σ^c[sH]` up to the truncation
    pub basis: SymBasis,
    /// the coderivation `𝒟` on `Σ^c[sH]`, by its components `Σ^c_b[sH] → sH`
    pub coderivation: Cochain,
    /// the twisting cochain `τ: Σ^c[sH] → 𝔤`
    pub tau: Cochain,
    pub brackets: LInfinityStructure,
    pub contraction: Contraction,
}

fn check_inputs(g: &DgLieAlgebra, c: &Contraction, max_len: usize) -> Result<()> {
    if max_len < 2 {
        return Err(Error::Truncation(
            "the transfer needs word lengths up to at least 2".into(),
        ));
    }
    if c.big().space() != g.space() || c.big().d().columns() != g.d().columns() {
        return Err(Error::InvalidContraction(
            "contraction is not of the algebra's complex".into(),
        ));
    }
    if !c.small().d().is_zero() {
        return Err(Error::InvalidContraction(
            "the small complex must carry the zero differential".into(),
        ));
    }
    let r = c.verify();
    if !r.passed() {
        return Err(Error::InvalidContraction(r.failures().join(", ")));
    }
    Ok(())
}

/// Runs the recursion; returns `(basis, τ, 𝒟)`.
pub(crate) fn run_recursion(g: &DgLieAlgebra, c: &Contraction, max_len: usize) -> Result<(SymBasis, Cochain, Cochain)> {
    let gens = Arc::new(c.small().space().suspend());
    let basis = SymBasis::new(gens.clone(), max_len);
    let mut tau = Cochain::zero(gens.clone(), g.space().clone(), -1);
    let mut coder = Cochain::zero(gens.clone(), gens.clone(), -1);
    for i in 0..gens.dim() {
        tau.set(SymWord::single(i), c.nabla().column(i).clone())?;
    }
    for b in 2..=max_len {
        let words: Vec<SymWord> = basis.words_of_length(b).cloned().collect();
        let mut new_tau = Vec::new();
        for w in words {
            // lengths below b are final, so the self bracket only sees τ^{<b}
            let r = half_self_bracket(&tau, g, &w);
            if r.is_empty() {
                continue;
            }
            let value = c.h().apply(&r);
            new_tau.push((w.clone(), crate::graded::scaled(&value, &crate::scalar::rat(-1))));
            coder.set(w, c.pi().apply(&r))?;
        }
        for (w, v) in new_tau {
            tau.set(w, v)?;
        }
    }
    Ok((basis, tau, coder))
}

/// Transfers the dg Lie structure of `g` along `c` up to word length `max_len`.
pub fn transfer(g: &DgLieAlgebra, c: &Contraction, max_len: usize) -> Result<TransferResult> {
    check_inputs(g, c, max_len)?;
    let (basis, tau, coderivation) = run_recursion(g, c, max_len)?;
    Ok(TransferResult {
        truncation: max_len,
        brackets: LInfinityStructure::from_coderivation(&coderivation),
        basis,
        coderivation,
        tau,
        contraction: c.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterReport {
    /// word lengths on which `Dτ = ½[τ,τ]` fails
    pub failures: Vec<usize>,
    pub verified_through: usize,
    pub words_checked: usize,
}

impl MasterReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn master_report(tau: &Cochain, q: &Cochain, g: &DgLieAlgebra, basis: &SymBasis, through: usize) -> MasterReport {
    let mut failures = Vec::new();
    let mut words_checked = 0;
    for w in basis.words() {
        if w.len() > through {
            continue;
        }
        words_checked += 1;
        let defect = if w.is_empty() {
            tau.value(w)
        } else {
            master_defect_on_word(tau, q, TwistingTarget::Lie(g), w)
        };
        if !defect.is_empty() && !failures.contains(&w.len()) {
            failures.push(w.len());
        }
    }
    failures.sort_unstable();
    MasterReport {
        failures,
        verified_through: through,
        words_checked,
    }
}

impl TransferResult {
    pub fn gens(&self) -> &Arc<GradedSpace> {
        self.basis.gens()
    }

    /// `𝒟` as a differential on the truncated `Σ^c[sH]`.
    pub fn coalgebra(&self) -> TruncatedSymCoalgebra {
        TruncatedSymCoalgebra::new(self.gens().clone(), self.truncation, self.coderivation.clone())
            .expect("the transferred coderivation has degree -1 and kills the coaugmentation")
    }

    /// `𝒟² = 0` on word lengths below the truncation.
    pub fn check_sh_lie(&self) -> ShLieReport {
        self.coalgebra().check_sh_lie()
    }

    /// `Dτ = ½[τ,τ]` in `Hom(Σ^c_𝒟[sH], 𝔤)`, on word lengths below the truncation.
    pub fn verify_master(&self, g: &DgLieAlgebra) -> MasterReport {
        master_report(&self.tau, &self.coderivation, g, &self.basis, self.truncation - 1)
    }

    /// The component of `𝒟` on words of length `arity`.
    pub fn component(&self, arity: usize) -> Cochain {
        self.coderivation.component(arity)
    }

    /// Arities `≥ 3` with a nonzero component, i.e. the higher brackets.
    pub fn higher_arities(&self) -> Vec<usize> {
        self.coderivation.arities().into_iter().filter(|&a| a >= 3).collect()
    }

    /// The adjoint coalgebra morphism `Σ^c[sH] → Σ^c[s𝔤]` with components `sτ`.
    pub fn adjoint(&self) -> Cochain {
        let target = Arc::new(self.tau.target().suspend());
        let mut f = Cochain::zero(self.gens().clone(), target, 0);
        for (w, v) in self.tau.values() {
            f.set(w.clone(), v.clone())
                .expect("suspension shifts value and cochain degree together");
        }
        f
    }

    /// Does the adjoint intertwine `𝒟` and the Chevalley–Eilenberg differential
    /// on every word up to the truncation?
    pub fn adjoint_intertwines(&self, g: &DgLieAlgebra) -> bool {
        let f = self.adjoint();
        let q = ce_coderivation(g);
        self.basis.words().iter().all(|w| {
            let left = apply_morphism_vec(&f, &apply_coderivation(&self.coderivation, w));
            let right = apply_coderivation_vec(&q, &apply_morphism(&f, w));
            left == right
        })
    }

    /// Does the adjoint induce an isomorphism between the homologies of the
    /// truncated coalgebras `(Σ^c_{≤N}[sH], 𝒟)` and `(Σ^c_{≤N}[s𝔤], d + ∂)`?
    pub fn adjoint_is_quasi_isomorphism(&self, g: &DgLieAlgebra) -> Result<bool> {
        let f = self.adjoint();
        let big = SymBasis::new(f.target().clone(), self.truncation);
        let q = ce_coderivation(g);
        let d_src = self
            .basis
            .operator(&self.basis, -1, |w| Ok(apply_coderivation(&self.coderivation, w)))?;
        let d_tgt = big.operator(&big, -1, |w| Ok(apply_coderivation(&q, w)))?;
        let fm = self.basis.operator(&big, 0, |w| Ok(apply_morphism(&f, w)))?;
        Ok(induces_homology_iso(&fm, &d_src, &d_tgt))
    }

    /// The induced strict bracket `π[∇x̄, ∇ȳ]` on homology as a dg Lie algebra
    /// with zero differential.
    pub fn induced_bracket(&self, g: &DgLieAlgebra) -> Result<DgLieAlgebra> {
        let c = &self.contraction;
        let h = c.small().space().clone();
        let mut table = std::collections::BTreeMap::new();
        for i in 0..h.dim() {
            for j in i..h.dim() {
                let v = c.pi().apply(&g.bracket_vec(c.nabla().column(i), c.nabla().column(j)));
                if !v.is_empty() {
                    table.insert((i, j), v);
                }
            }
        }
        DgLieAlgebra::from_table(h.clone(), GradedMap::zero(h.clone(), h, -1), table, Vec::new())
    }

    /// The binary bracket extracted from `𝒟` as a dg Lie algebra on `H`.
    pub fn extracted_l2(&self) -> Result<DgLieAlgebra> {
        let h = self.brackets.underlying().clone();
        let mut table = std::collections::BTreeMap::new();
        if let Some(l2) = self.brackets.bracket_table(2) {
            for (args, v) in l2 {
                table.insert((args[0], args[1]), v.clone());
            }
        }
        // the extracted table is keyed by canonical suspended order; re-key to i ≤ j
        let mut fixed = std::collections::BTreeMap::new();
        for ((i, j), _) in table {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            let v = self.brackets.eval(&[a, b]);
            if !v.is_empty() {
                fixed.insert((a, b), v);
            }
        }
        DgLieAlgebra::from_table(h.clone(), GradedMap::zero(h.clone(), h, -1), fixed, Vec::new())
    }

    /// The perturbed contraction of `(Σ^c[s𝔤], d + ∂)` onto `(Σ^c[sH], 𝒟_BPL)`
    /// given by the perturbation lemma applied to `Σ^c` of the suspended contraction.
    pub fn extended_contraction(&self, g: &DgLieAlgebra) -> Result<Contraction> {
        let sc = self.contraction.suspend();
        let sym = symmetric_coalgebra_contraction(&sc, self.truncation)?;
        let big = &sym.big_basis;
        let q2 = ce_coderivation(g).filter(|w| w.len() == 2);
        let del = big.operator(big, -1, |w| Ok(apply_coderivation(&q2, w)))?;
        let p = FilteredPerturbation::new(sym.contraction.big(), del, big.filtration())?;
        perturbation_lemma(&sym.contraction, &p)
    }

    /// Compares the perturbation-lemma output with the recursion: the small
    /// differential against `𝒟` and the perturbed inclusion against the adjoint.
    pub fn compare_with_perturbation_lemma(&self, g: &DgLieAlgebra) -> Result<BplComparison> {
        let ext = self.extended_contraction(g)?;
        let small_basis = &self.basis;
        let d_rec = small_basis.operator(small_basis, -1, |w| Ok(apply_coderivation(&self.coderivation, w)))?;
        let f = self.adjoint();
        let big = SymBasis::new(f.target().clone(), self.truncation);
        let f_rec = small_basis.operator(&big, 0, |w| Ok(apply_morphism(&f, w)))?;
        Ok(BplComparison {
            contraction_identities: ext.verify().passed(),
            small_differential_agrees: ext.small().d().columns() == d_rec.columns(),
            inclusion_agrees: ext.nabla().columns() == f_rec.columns(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BplComparison {
    pub contraction_identities: bool,
    pub small_differential_agrees: bool,
    pub inclusion_agrees: bool,
}

/// Degeneration checks: when the bracket dies after projecting to homology,
/// or vanishes on the image of `∇`, all higher components vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationReport {
    pub hypothesis_holds: bool,
    /// `Some` only when the hypothesis holds: do all components of arity ≥ 3 vanish?
    pub higher_components_vanish: Option<bool>,
    /// `Some` only when the hypothesis holds: does `𝒟` vanish entirely?
    pub coderivation_vanishes: Option<bool>,
    /// `Some` only when the hypothesis holds (∇-form): is `τ = τ¹`?
    pub tau_is_linear: Option<bool>,
}

impl DegenerationReport {
    /// True when the hypothesis fails (nothing asserted) or every assertion holds.
    pub fn consistent(&self) -> bool {
        [
            self.higher_components_vanish,
            self.coderivation_vanishes,
            self.tau_is_linear,
        ]
        .iter()
        .all(|x| x.unwrap_or(true))
    }
}

/// Is the composite `𝔤 ⊗ 𝔤 → 𝔤 → H` zero?
pub fn projection_kills_bracket(g: &DgLieAlgebra, c: &Contraction) -> bool {
    g.table().values().all(|v| c.pi().apply(v).is_empty())
}

/// Does the bracket vanish on the image of `∇`?
pub fn bracket_vanishes_on_image(g: &DgLieAlgebra, c: &Contraction) -> bool {
    let n = c.small().space().dim();
    (0..n).all(|i| (i..n).all(|j| g.bracket_vec(c.nabla().column(i), c.nabla().column(j)).is_empty()))
}

/// When `π ∘ [·,·] = 0`, every component of `𝒟` vanishes.
pub fn check_projection_degeneration(g: &DgLieAlgebra, result: &TransferResult) -> DegenerationReport {
    let holds = projection_kills_bracket(g, &result.contraction);
    DegenerationReport {
        hypothesis_holds: holds,
        higher_components_vanish: holds.then(|| result.higher_arities().is_empty()),
        coderivation_vanishes: holds.then(|| result.coderivation.is_zero()),
        tau_is_linear: None,
    }
}

/// When `[∇·, ∇·] = 0`, `τ = τ¹` and `𝒟 = 0`.
pub fn check_inclusion_degeneration(g: &DgLieAlgebra, result: &TransferResult) -> DegenerationReport {
    let holds = bracket_vanishes_on_image(g, &result.contraction);
    DegenerationReport {
        hypothesis_holds: holds,
        higher_components_vanish: holds.then(|| result.higher_arities().is_empty()),
        coderivation_vanishes: holds.then(|| result.coderivation.is_zero()),
        tau_is_linear: holds.then(|| result.tau.max_arity() <= 1),
    }
}

/// Result of transferring along a sub-dg Lie algebra whose bracket dies in homology.
#[derive(Clone, Debug)]
pub struct SubalgebraTransfer {
    pub truncation: usize,
    pub basis: SymBasis,
    /// `τ: Σ^c[sH] → 𝔤` (values pushed forward along the inclusion)
    pub tau: Cochain,
    /// the same cochain with values in the subalgebra
    pub tau_sub: Cochain,
    pub master: MasterReport,
    /// `πτ` is the universal twisting cochain of `H`
    pub projection_is_universal: bool,
    /// every value of `τ` lies in the subalgebra
    pub values_in_subalgebra: bool,
}

/// Transfer along a sub-dg Lie algebra `m ⊆ 𝔤` (given with its inclusion) and a
/// contraction of `m` onto `H`, under the hypothesis that `m ⊗ m → m → H` is zero.
/// The source `Σ^c[sH]` then carries no differential.
pub fn subalgebra_transfer(
    g: &DgLieAlgebra,
    m: &DgLieAlgebra,
    inclusion: &GradedMap,
    c: &Contraction,
    max_len: usize,
) -> Result<SubalgebraTransfer> {
    check_inputs(m, c, max_len)?;
    if inclusion.source() != m.space() || inclusion.target() != g.space() || inclusion.degree() != 0 {
        return Err(Error::SpaceMismatch(
            "inclusion must map the subalgebra into the algebra".into(),
        ));
    }
    if inclusion.rank() != m.dim() {
        return Err(Error::Precondition("inclusion is not injective".into()));
    }
    if !crate::graded::hom_differential(inclusion, m.d(), g.d())?.is_zero() {
        return Err(Error::Precondition("inclusion is not a chain map".into()));
    }
    for i in 0..m.dim() {
        for j in i..m.dim() {
            let up = inclusion.apply(&m.bracket(i, j));
            if up != g.bracket_vec(inclusion.column(i), inclusion.column(j)) {
                return Err(Error::Precondition("inclusion does not preserve the bracket".into()));
            }
        }
    }
    if !projection_kills_bracket(m, c) {
        return Err(Error::Precondition(
            "the bracket of the subalgebra survives in homology".into(),
        ));
    }
    let (basis, tau_sub, coder) = run_recursion(m, c, max_len)?;
    if !coder.is_zero() {
        return Err(Error::InvalidStructure(
            "nonzero transferred differential despite the hypothesis".into(),
        ));
    }
    let tau = tau_sub.then(inclusion)?;
    let zero = Cochain::zero(basis.gens().clone(), basis.gens().clone(), -1);
    let master = master_report(&tau, &zero, g, &basis, max_len - 1);
    let projection_is_universal = basis.words().iter().all(|w| {
        let v = c.pi().apply(&tau_sub.value(w));
        match w.len() {
            1 => v == crate::graded::unit(w.factors()[0]),
            _ => v.is_empty(),
        }
    });
    let values_in_subalgebra = tau
        .values()
        .values()
        .all(|v| crate::dglie::coordinates_in(inclusion, v).is_some());
    Ok(SubalgebraTransfer {
        truncation: max_len,
        basis,
        tau,
        tau_sub,
        master,
        projection_is_universal,
        values_in_subalgebra,
    })
}
