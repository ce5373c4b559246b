//! JSON interchange format for scenario trees.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "metadata": { "source": "..." },
//!   "atoms": [ { "probability": 0.25, "payoffs": { "X": 2.0 } }, ... ],
//!   "filtration": [ [[0, 1, 2, 3]], [[0, 1], [2, 3]], [[0], [1], [2], [3]] ]
//! }
//! ```
//!
//! Every atom must carry the same payoff names. Partitions list cells as
//! atom indices. Maps are ordered, so serialization is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::consistency::Counterexample;
use crate::error::{Error, Result};
use crate::space::{validate, FilteredSpace, RandomVariable, Violation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomRecord {
    pub probability: f64,
    #[serde(default)]
    pub payoffs: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDocument {
    pub schema_version: u32,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    pub atoms: Vec<AtomRecord>,
    pub filtration: Vec<Vec<Vec<usize>>>,
}

/// A parsed and validated tree.
#[derive(Debug, Clone)]
pub struct Tree {
    pub space: FilteredSpace,
    pub payoffs: BTreeMap<String, RandomVariable>,
    pub metadata: BTreeMap<String, String>,
}

impl Tree {
    pub fn payoff(&self, name: &str) -> Result<&RandomVariable> {
        self.payoffs.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.payoffs.keys().map(String::as_str).collect();
            Error::domain(format!(
                "unknown payoff `{name}` (available: {})",
                known.join(", ")
            ))
        })
    }
}

fn violation_path(v: &Violation) -> String {
    match v {
        Violation::NonPositiveProbability { atom, .. } => format!("atoms[{atom}].probability: {v}"),
        Violation::PayoffLength { .. } | Violation::PayoffNotFinite { .. } => format!("atoms: {v}"),
        Violation::NoAtoms | Violation::Normalization { .. } => format!("atoms: {v}"),
        _ => format!("filtration: {v}"),
    }
}

impl TreeDocument {
    /// Parses JSON text; syntax and type errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: TreeDocument = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "schema_version: unsupported version {} (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        Ok(doc)
    }

    pub fn payoff_names(&self) -> Vec<String> {
        self.atoms
            .first()
            .map(|a| a.payoffs.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Validates the document and builds the filtered space and payoffs.
    pub fn to_tree(&self) -> Result<Tree> {
        let names = self.payoff_names();
        for (i, atom) in self.atoms.iter().enumerate() {
            let here: Vec<&String> = atom.payoffs.keys().collect();
            if here.len() != names.len() || here.iter().zip(&names).any(|(a, b)| *a != b) {
                return Err(Error::Parse(format!(
                    "atoms[{i}].payoffs: names {here:?} differ from atoms[0] ({names:?})"
                )));
            }
        }
        let probs: Vec<f64> = self.atoms.iter().map(|a| a.probability).collect();
        let columns: Vec<(String, Vec<f64>)> = names
            .iter()
            .map(|n| (n.clone(), self.atoms.iter().map(|a| a.payoffs[n]).collect()))
            .collect();
        let borrowed: Vec<(&str, &[f64])> = columns
            .iter()
            .map(|(n, v)| (n.as_str(), v.as_slice()))
            .collect();
        let report = validate(&probs, &self.filtration, &borrowed);
        if let Some(v) = report.violations.first() {
            let rest = report.violations.len() - 1;
            let more = if rest > 0 {
                format!(" (and {rest} more)")
            } else {
                String::new()
            };
            return Err(Error::Parse(format!("{}{more}", violation_path(v))));
        }
        let space = FilteredSpace::from_raw(probs, self.filtration.clone())?;
        let payoffs = columns
            .into_iter()
            .map(|(n, v)| Ok((n, RandomVariable::new(v)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Tree {
            space,
            payoffs,
            metadata: self.metadata.clone(),
        })
    }

    pub fn from_parts(
        space: &FilteredSpace,
        payoffs: &[(String, RandomVariable)],
        metadata: BTreeMap<String, String>,
    ) -> Self {
        let atoms = (0..space.n_atoms())
            .map(|a| AtomRecord {
                probability: space.space().probability(a),
                payoffs: payoffs
                    .iter()
                    .map(|(n, x)| (n.clone(), x.values()[a]))
                    .collect(),
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            metadata,
            atoms,
            filtration: space.filtration().to_raw(),
        }
    }

    pub fn from_counterexample(ce: &Counterexample) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("construction".to_string(), ce.name.clone());
        metadata.insert("distortion".to_string(), ce.distortion.to_string());
        Self::from_parts(&ce.space, &ce.payoffs, metadata)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("tree documents always serialize");
        s.push('\n');
        s
    }
}

/// Formats a float like C's `%.17g`; non-finite values become `inf`,
/// `-inf` and `nan`.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let fixed = format!("{:.*}", (16 - exp) as usize, v);
        trim_fraction(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
