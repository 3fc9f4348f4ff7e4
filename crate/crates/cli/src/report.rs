//! JSON renderings of engine objects. Maps are ordered, vectors are written
//! as `{label: "p/q"}` objects and words by their labels, so reports built
//! from identical inputs are identical byte for byte.

use hpt_core::graded::{GradedSpace, SparseVec};
use hpt_core::scalar::format_rational;
use hpt_core::symco::{Cochain, LInfinityStructure};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

pub fn vector(space: &GradedSpace, v: &SparseVec) -> Value {
    let mut m = Map::new();
    for (&i, c) in v {
        m.insert(space.label(i).to_string(), Value::String(format_rational(c)));
    }
    Value::Object(m)
}

pub fn basis(space: &GradedSpace) -> Value {
    Value::Array(
        space
            .basis()
            .iter()
            .map(|(l, d)| json!({ "label": l, "degree": d }))
            .collect(),
    )
}

pub fn labels(space: &GradedSpace, indices: &[usize]) -> Value {
    Value::Array(
        indices
            .iter()
            .map(|&i| Value::String(space.label(i).to_string()))
            .collect(),
    )
}

/// Every nonzero value of a cochain on `Σ^c[V]`, in canonical word order.
pub fn cochain(c: &Cochain) -> Value {
    Value::Array(
        c.values()
            .iter()
            .map(|(w, v)| {
                json!({
                    "word": labels(c.source(), w.factors()),
                    "length": w.len(),
                    "value": vector(c.target(), v),
                })
            })
            .collect(),
    )
}

/// The tables of `l_k`, keyed `"l2"`, `"l3"`, … (arities with a nonzero value only).
pub fn brackets(l: &LInfinityStructure) -> Value {
    let mut m = Map::new();
    for k in l.arities() {
        let table = l.bracket_table(k).expect("listed arities have tables");
        let rows = table
            .iter()
            .map(|(args, v)| json!({ "args": labels(l.underlying(), args), "value": vector(l.underlying(), v) }))
            .collect();
        m.insert(format!("l{k}"), Value::Array(rows));
    }
    Value::Object(m)
}

/// A failed identity with the basis elements that witness it.
pub fn witness(identity: &str, space: &GradedSpace, indices: &[usize]) -> Value {
    json!({ "identity": identity, "witness": labels(space, indices) })
}
