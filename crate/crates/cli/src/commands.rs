//! The four subcommands as library functions returning a report.

use std::fmt;
use std::str::FromStr;

use hpt_core::bv::BvData;
use hpt_core::complex::build_contraction;
use hpt_core::deformation::{
    formality_report, massey_family, mc_equations, morgan_example, transfer_formality, FormalityReport, MCVariety,
    MORGAN_SPHERES,
};
use hpt_core::dglie::DgLieAlgebra;
use hpt_core::freelie::wedge_of_spheres;
use hpt_core::scalar::{format_rational, Rational};
use hpt_core::transfer::transfer;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::problem::{Exact, Problem, ProblemFile};
use crate::report::{self, digest, witness};
use crate::SCHEMA;

/// A finished run: the report and whether every verification passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

impl Outcome {
    /// Pretty JSON with a trailing newline; keys are sorted.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("reports are plain JSON");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn header(command: &str, input_digest: String) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("input_digest".into(), json!(input_digest));
    m
}

fn lie_failures(g: &DgLieAlgebra) -> Vec<Value> {
    let r = g.validate();
    let s = g.space();
    let mut out = Vec::new();
    if !r.differential_squares_to_zero {
        out.push(json!({ "identity": "dd = 0", "witness": [] }));
    }
    out.extend(
        r.antisymmetry_failures
            .iter()
            .map(|&(a, b)| witness("antisymmetry", s, &[a, b])),
    );
    out.extend(
        r.jacobi_failures
            .iter()
            .map(|&(a, b, c)| witness("jacobi", s, &[a, b, c])),
    );
    out.extend(r.leibniz_failures.iter().map(|&(a, b)| witness("leibniz", s, &[a, b])));
    out
}

fn bv_failures(bv: &BvData) -> Vec<Value> {
    let r = bv.validate();
    let g = &r.gerstenhaber;
    let a = &g.algebra;
    let s = bv.space();
    let mut out = Vec::new();
    let mut flag = |ok: bool, identity: &str| {
        if !ok {
            out.push(json!({ "identity": identity, "witness": [] }));
        }
    };
    flag(a.differential_squares_to_zero, "dd = 0");
    flag(a.unit_law, "d(1) = 0");
    flag(r.exact, "ΔΔ = 0");
    flag(r.weak_differential, "[d,Δ] = 0");
    flag(r.delta_kills_unit, "Δ(1) = 0");
    out.extend(
        a.associativity_failures
            .iter()
            .map(|&(x, y, z)| witness("associativity", s, &[x, y, z])),
    );
    out.extend(
        a.leibniz_failures
            .iter()
            .map(|&(x, y)| witness("d is a derivation of the product", s, &[x, y])),
    );
    out.extend(
        g.antisymmetry_failures
            .iter()
            .map(|&(x, y)| witness("bracket antisymmetry", s, &[x, y])),
    );
    out.extend(
        g.jacobi_failures
            .iter()
            .map(|&(x, y, z)| witness("bracket jacobi", s, &[x, y, z])),
    );
    out.extend(
        g.poisson_failures
            .iter()
            .map(|&(x, y, z)| witness("bracket is a derivation", s, &[x, y, z])),
    );
    out.extend(
        g.differential_failures
            .iter()
            .map(|&(x, y)| witness("d is a derivation of the bracket", s, &[x, y])),
    );
    out
}

/// Checks every axiom of the structure in the file.
pub fn cmd_validate(input: &str) -> Result<Outcome> {
    let file = ProblemFile::parse(input)?;
    let mut m = header("validate", digest(input.as_bytes()));
    m.insert("grading".into(), json!(file.grading().to_string()));
    let failures = match file.problem()? {
        Problem::Lie(g) => {
            m.insert("kind".into(), json!("dg_lie"));
            m.insert("basis".into(), report::basis(g.space()));
            lie_failures(&g)
        }
        Problem::Bv(bv) => {
            m.insert("kind".into(), json!("bv"));
            m.insert("basis".into(), report::basis(bv.space()));
            let k = bv.koszul_identity_check();
            m.insert(
                "koszul_identity".into(),
                json!({ "applicable": k.applicable, "passed": k.passed() }),
            );
            bv_failures(&bv)
        }
    };
    let passed = failures.is_empty();
    m.insert("failures".into(), Value::Array(failures));
    m.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}

fn formality_json(f: &FormalityReport) -> Value {
    json!({
        "formal": f.formal(),
        "witness": f.witness,
        "nonzero_components": f.nonzero_components,
        "per_truncation": f.per_truncation.iter().map(|(n, ok)| json!({ "truncation": n, "formal": ok })).collect::<Vec<_>>(),
    })
}

pub fn check_truncation(n: usize) -> Result<()> {
    if n < 2 {
        return Err(CliError::Input(format!(
            "--max-word-length must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Transfers the dg Lie algebra of the file to its homology.
pub fn cmd_transfer(input: &str, max_word_length: usize, check: bool) -> Result<Outcome> {
    check_truncation(max_word_length)?;
    let file = ProblemFile::parse(input)?;
    let g = file.dg_lie()?;
    let failures = lie_failures(&g);
    if !failures.is_empty() {
        return Err(CliError::Input(format!(
            "the input is not a dg Lie algebra ({} failed identities; run validate)",
            failures.len()
        )));
    }
    let c = build_contraction(&g.complex()?);
    let r = transfer(&g, &c, max_word_length)?;
    let mut m = header("transfer", digest(input.as_bytes()));
    m.insert("grading".into(), json!(file.grading().to_string()));
    m.insert("truncation".into(), json!(max_word_length));
    m.insert("homology".into(), report::basis(c.small().space()));
    let cr = c.verify();
    m.insert(
        "contraction".into(),
        json!({ "passed": cr.passed(), "failures": cr.failures() }),
    );
    m.insert("brackets".into(), report::brackets(&r.brackets));
    m.insert("coderivation".into(), report::cochain(&r.coderivation));
    m.insert("tau".into(), report::cochain(&r.tau));
    m.insert("formality".into(), formality_json(&transfer_formality(&r)));
    let mut passed = cr.passed();
    if check {
        let master = r.verify_master(&g);
        let sh = r.check_sh_lie();
        let l2 = r.extracted_l2()?.validate().jacobi();
        let bpl = r.compare_with_perturbation_lemma(&g)?;
        let sh_failed: Vec<usize> = sh.failures.iter().map(|(n, _)| *n).collect();
        let per_length: Vec<Value> = (1..=max_word_length)
            .map(|n| {
                json!({
                    "length": n,
                    "master_equation": (n <= master.verified_through).then(|| !master.failures.contains(&n)),
                    "coderivation_squares_to_zero": (n <= sh.verified_through).then(|| !sh_failed.contains(&n)),
                })
            })
            .collect();
        let bpl_ok = bpl.contraction_identities && bpl.small_differential_agrees && bpl.inclusion_agrees;
        passed &= master.passed() && sh.passed() && l2 && bpl_ok;
        m.insert(
            "checks".into(),
            json!({
                "master_equation": { "passed": master.passed(), "failures": master.failures, "verified_through": master.verified_through },
                "coderivation_squares_to_zero": { "passed": sh.passed(), "failed_lengths": sh_failed, "verified_through": sh.verified_through },
                "l2_jacobi": l2,
                "perturbation_lemma": {
                    "contraction_identities": bpl.contraction_identities,
                    "small_differential_agrees": bpl.small_differential_agrees,
                    "inclusion_agrees": bpl.inclusion_agrees,
                },
                "per_length": per_length,
            }),
        );
    }
    m.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}

/// Which transfer along `ker Δ` to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pipeline {
    /// transfer along `ker Δ` onto `H(𝒜,Δ)`
    #[default]
    Kernel,
    /// the split variant with the unit class separated
    FlatIdentity,
}

impl FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "kernel" => Ok(Pipeline::Kernel),
            "flat-identity" => Ok(Pipeline::FlatIdentity),
            _ => Err(format!(
                "unknown pipeline {s:?} (expected \"kernel\" or \"flat-identity\")"
            )),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pipeline::Kernel => "kernel",
            Pipeline::FlatIdentity => "flat-identity",
        })
    }
}

/// Runs the BV checks and the chosen pipeline.
pub fn cmd_bv(input: &str, pipeline: Pipeline, max_word_length: usize) -> Result<Outcome> {
    check_truncation(max_word_length)?;
    let file = ProblemFile::parse(input)?;
    let bv = file.bv()?;
    let mut m = header("bv", digest(input.as_bytes()));
    m.insert("pipeline".into(), json!(pipeline.to_string()));
    m.insert("truncation".into(), json!(max_word_length));
    let failures = bv_failures(&bv);
    let structure_ok = failures.is_empty();
    m.insert(
        "structure".into(),
        json!({ "passed": structure_ok, "failures": failures }),
    );
    let mut passed = structure_ok;
    match bv.kahler_formality_check() {
        Ok(l) => {
            m.insert(
                "formality_lemma".into(),
                json!({
                    "passed": l.passed(),
                    "kernel_dim": l.kernel_dim,
                    "homology_d_dim": l.homology_d_dim,
                    "homology_kernel_dim": l.homology_kernel_dim,
                    "homology_delta_dim": l.homology_delta_dim,
                    "inclusion_quasi_iso": l.inclusion_quasi_iso,
                    "projection_chain_map": l.projection_chain_map,
                    "projection_quasi_iso": l.projection_quasi_iso,
                }),
            );
            passed &= l.passed();
        }
        Err(e) => {
            m.insert(
                "formality_lemma".into(),
                json!({ "passed": false, "error": e.to_string() }),
            );
            passed = false;
        }
    }
    let result = match pipeline {
        Pipeline::Kernel => bv.kernel_pipeline(max_word_length).map(|p| {
            let ok = p.passed();
            let v = json!({
                "passed": ok,
                "delta_kills_tau": p.delta_kills_tau,
                "projection_is_universal": p.projection_is_universal,
                "higher_values_in_image": p.higher_values_in_image,
                "master_equation": { "passed": p.master.passed(), "failures": p.master.failures, "verified_through": p.master.verified_through },
                "cohomological_master_equation": p.cohomological_master,
                "cohomological_degrees_of_tau": p.cohomological_degrees,
                "formal": p.formal,
                "homology": report::basis(p.kernel.contraction.small().space()),
                "tau": report::cochain(p.tau()),
            });
            (ok, v)
        }),
        Pipeline::FlatIdentity => bv.flat_identity_pipeline(max_word_length).map(|p| {
            let ok = p.passed();
            let v = json!({
                "passed": ok,
                "delta_kills_tau": p.delta_kills_tau,
                "projection_is_universal": p.projection_is_universal,
                "higher_values_in_image": p.higher_values_in_image,
                "higher_values_in_tilde": p.higher_values_in_tilde,
                "master_equation": { "passed": p.master.passed(), "failures": p.master.failures, "verified_through": p.master.checked_through },
                "homology": report::basis(&p.homology),
                "tau": report::cochain(&p.tau),
            });
            (ok, v)
        }),
    };
    match result {
        Ok((ok, v)) => {
            passed &= ok;
            m.insert("result".into(), v);
        }
        Err(e) => {
            passed = false;
            m.insert("result".into(), json!({ "passed": false, "error": e.to_string() }));
        }
    }
    m.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}

/// How the perturbation of `cmd_massey` is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThetaSource {
    Zero,
    /// drawn from the run's seed
    Random,
    /// the text of a JSON file: an array of rational strings, or `{"theta": [...]}`
    File(String),
}

#[derive(Clone, Debug)]
pub struct MasseyOptions {
    pub spheres: Vec<u32>,
    pub order: usize,
    pub theta: ThetaSource,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ThetaFile {
    Bare(Vec<Exact>),
    Wrapped { theta: Vec<Exact> },
}

fn mc_json(v: &MCVariety) -> Value {
    let vars: Vec<String> = (1..=v.coordinates.len()).map(|i| format!("t{i}")).collect();
    json!({
        "order": v.order,
        "coordinates": v.coordinates,
        "equations": v.targets.iter().zip(&v.equations).map(|(t, p)| json!({ "target": t, "series": p.format(&vars) })).collect::<Vec<_>>(),
        "unobstructed": v.is_unobstructed(),
    })
}

/// Counts and checks for Massey-product perturbations of a wedge of spheres.
pub fn cmd_massey(opts: &MasseyOptions) -> Result<Outcome> {
    let family = massey_family(&opts.spheres, opts.order)?;
    let theta: Vec<Rational> = match &opts.theta {
        ThetaSource::Zero => vec![Rational::default(); family.carrier_dimension()],
        ThetaSource::Random => family.seeded_theta(opts.seed),
        ThetaSource::File(text) => {
            let parsed: ThetaFile =
                serde_json::from_str(text).map_err(|e| CliError::Input(format!("theta file: parse error: {e}")))?;
            let v = match parsed {
                ThetaFile::Bare(v) | ThetaFile::Wrapped { theta: v } => v,
            };
            v.into_iter().map(|x| x.0).collect()
        }
    };
    if theta.len() != family.carrier_dimension() {
        return Err(CliError::Input(format!(
            "theta has {} entries, the carrier has {} coordinates",
            theta.len(),
            family.carrier_dimension()
        )));
    }
    let request = json!({
        "spheres": opts.spheres,
        "order": opts.order,
        "theta": theta.iter().map(format_rational).collect::<Vec<_>>(),
    });
    let mut m = header("massey", digest(request.to_string().as_bytes()));
    m.insert("spheres".into(), json!(opts.spheres));
    m.insert("order".into(), json!(opts.order));
    m.insert("theta".into(), request["theta"].clone());
    m.insert("parameter_dimension".into(), json!(family.parameter_dimension()));
    m.insert(
        "parameters_by_arity".into(),
        json!(family
            .parameters_by_arity()
            .iter()
            .map(|(k, c)| (k.to_string(), json!(c)))
            .collect::<Map<_, _>>()),
    );
    m.insert("carrier_dimension".into(), json!(family.carrier_dimension()));
    let gens = family.reduced.suspend();
    m.insert(
        "carrier".into(),
        Value::Array(
            family
                .carrier
                .iter()
                .map(|p| json!({ "word": report::labels(&gens, &p.word), "output": gens.label(p.output) }))
                .collect(),
        ),
    );
    m.insert(
        "carrier_by_arity".into(),
        json!(family
            .carrier_by_arity()
            .iter()
            .map(|(k, c)| (k.to_string(), json!(c)))
            .collect::<Map<_, _>>()),
    );
    m.insert("automorphism_dimension".into(), json!(family.automorphism_dimension));
    m.insert("nonlinear_automorphisms".into(), json!(family.nonlinear_automorphisms));
    m.insert("dimension_gap".into(), json!(family.dimension_gap()));
    let coalgebra = family.coalgebra(&theta)?;
    let sh = coalgebra.check_sh_lie();
    let formality = formality_report(coalgebra.differential(), opts.order);
    let structure = coalgebra.extract_brackets();
    m.insert("brackets".into(), report::brackets(&structure));
    m.insert("formality".into(), formality_json(&formality));
    m.insert("coderivation_squares_to_zero".into(), json!(sh.passed()));
    m.insert("mc_equations".into(), mc_json(&mc_equations(&structure, opts.order)?));
    if opts.spheres == MORGAN_SPHERES && opts.order >= 5 {
        let (_, r) = morgan_example(&theta, opts.order)?;
        let lie = wedge_of_spheres(&MORGAN_SPHERES[..2], 5)?;
        m.insert(
            "free_lie_cross_check".into(),
            json!({
                "length": 5,
                "lyndon_basis": r.free_lie_length5,
                "left_normed_rank": r.free_lie_cross_check,
                "by_degree": lie.dims_by_degree().get(&10).copied().unwrap_or(0),
            }),
        );
        m.insert("lower_brackets_vanish".into(), json!(r.lower_brackets_vanish()));
        m.insert("quintic_bracket_nonzero".into(), json!(r.quintic_bracket_nonzero()));
        m.insert("conclusion".into(), json!(r.conclusion));
    }
    let passed = sh.passed();
    m.insert("passed".into(), json!(passed));
    Ok(Outcome {
        report: Value::Object(m),
        passed,
    })
}
