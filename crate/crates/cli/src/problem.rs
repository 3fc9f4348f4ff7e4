//! The JSON problem file: a labelled basis with degrees, and sparse tables for
//! the differential, bracket, product and BV operator, with exact rationals
//! written as strings.

use std::fmt;

use hpt_core::bv::BvData;
use hpt_core::dglie::DgLieAlgebra;
use hpt_core::fixtures::{try_bv, try_dgla};
use hpt_core::scalar::{format_rational, parse_rational, Rational};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CliError, Result};
use crate::SCHEMA;

/// An exact rational read from a string such as `"-3/4"`; rejected during
/// deserialization so that errors carry a line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s).map(Exact).map_err(de::Error::custom)
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    #[default]
    Homological,
    Cohomological,
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Grading::Homological => "homological",
            Grading::Cohomological => "cohomological",
        })
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Grading>,
    pub basis: Vec<(String, i32)>,
    #[serde(default)]
    pub differential: Vec<(String, String, Exact)>,
    #[serde(default)]
    pub bracket: Vec<(String, String, String, Exact)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product: Option<Vec<(String, String, String, Exact)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<Vec<(String, String, Exact)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

/// What a problem file describes.
#[derive(Clone, Debug)]
pub enum Problem {
    Lie(DgLieAlgebra),
    Bv(Box<BvData>),
}

impl ProblemFile {
    /// The homological problem file of a dg Lie algebra: every nonzero
    /// differential entry and one bracket entry per stored pair `i ≤ j`.
    pub fn from_dg_lie(g: &DgLieAlgebra) -> Self {
        let space = g.space();
        let label = |i: usize| space.label(i).to_string();
        let differential = (0..g.dim())
            .flat_map(|s| g.d().column(s).iter().map(move |(&t, c)| (s, t, c.clone())))
            .map(|(s, t, c)| (label(s), label(t), Exact(c)))
            .collect();
        let bracket = g
            .table()
            .iter()
            .flat_map(|(&(i, j), v)| v.iter().map(move |(&k, c)| (i, j, k, c.clone())))
            .map(|(i, j, k, c)| (label(i), label(j), label(k), Exact(c)))
            .collect();
        ProblemFile {
            schema: Some(SCHEMA.to_string()),
            grading: Some(Grading::Homological),
            basis: space.basis().to_vec(),
            differential,
            bracket,
            product: None,
            delta: None,
            unit: None,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files are plain JSON");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))?;
        if let Some(s) = &file.schema {
            if s != SCHEMA {
                return Err(CliError::Input(format!(
                    "unsupported schema {s:?}, expected {SCHEMA:?}"
                )));
            }
        }
        Ok(file)
    }

    pub fn is_bv(&self) -> bool {
        self.product.is_some() || self.delta.is_some()
    }

    /// The grading the file is read in: BV data defaults to cohomological.
    pub fn grading(&self) -> Grading {
        self.grading.unwrap_or(if self.is_bv() {
            Grading::Cohomological
        } else {
            Grading::Homological
        })
    }

    fn basis_refs(&self, negate: bool) -> Vec<(&str, i32)> {
        self.basis
            .iter()
            .map(|(l, d)| (l.as_str(), if negate { -d } else { *d }))
            .collect()
    }

    /// The dg Lie algebra of the file, in homological degrees; a cohomological
    /// file is regraded by `p ↦ −p`, which keeps every table unchanged.
    pub fn dg_lie(&self) -> Result<DgLieAlgebra> {
        if self.is_bv() {
            return Err(CliError::Input("the file carries BV data, not a dg Lie algebra".into()));
        }
        let basis = self.basis_refs(self.grading() == Grading::Cohomological);
        let d: Vec<(&str, &str, Rational)> = self
            .differential
            .iter()
            .map(|(s, t, c)| (s.as_str(), t.as_str(), c.0.clone()))
            .collect();
        let b: Vec<(&str, &str, &str, Rational)> = self
            .bracket
            .iter()
            .map(|(x, y, z, c)| (x.as_str(), y.as_str(), z.as_str(), c.0.clone()))
            .collect();
        try_dgla(&basis, &d, &b).map_err(|e| CliError::Input(format!("invalid dg Lie data: {e}")))
    }

    /// The BV data of the file, in cohomological degrees.
    pub fn bv(&self) -> Result<BvData> {
        if !self.is_bv() {
            return Err(CliError::Input(
                "the file has no \"product\" or \"delta\" section".into(),
            ));
        }
        if self.grading() != Grading::Cohomological {
            return Err(CliError::Input("BV data is read in cohomological degrees".into()));
        }
        if !self.bracket.is_empty() {
            return Err(CliError::Input(
                "the bracket of BV data is generated by \"delta\"; drop \"bracket\"".into(),
            ));
        }
        let basis = self.basis_refs(false);
        let product: Vec<(&str, &str, &str, Rational)> = self
            .product
            .iter()
            .flatten()
            .map(|(x, y, z, c)| (x.as_str(), y.as_str(), z.as_str(), c.0.clone()))
            .collect();
        let pairs = |v: &[(String, String, Exact)]| -> Vec<(String, String, Rational)> {
            v.iter().map(|(s, t, c)| (s.clone(), t.clone(), c.0.clone())).collect()
        };
        let d = pairs(&self.differential);
        let delta = pairs(self.delta.as_deref().unwrap_or(&[]));
        fn refs(v: &[(String, String, Rational)]) -> Vec<(&str, &str, Rational)> {
            v.iter().map(|(s, t, c)| (s.as_str(), t.as_str(), c.clone())).collect()
        }
        try_bv(&basis, self.unit.as_deref(), &product, &refs(&d), &refs(&delta))
            .map_err(|e| CliError::Input(format!("invalid BV data: {e}")))
    }

    pub fn problem(&self) -> Result<Problem> {
        if self.is_bv() {
            Ok(Problem::Bv(Box::new(self.bv()?)))
        } else {
            Ok(Problem::Lie(self.dg_lie()?))
        }
    }
}
