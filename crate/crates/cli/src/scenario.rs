//! Scenario documents: ambient field, base field, named elements and tasks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub ambient: AmbientSpec,
    pub base_field: BaseSpec,
    pub precision: PrecisionSpec,
    #[serde(default)]
    pub elements: BTreeMap<String, Builder>,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    /// `"Z"`, `"Q"` or `"Z^n_lex"`.
    pub group: String,
    /// `"F_p"`, `"Q"` or `"F_p(s)"`.
    pub field: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    Trivial,
    RationalFunctions,
    Completion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub kind: BaseKind,
    pub residue: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Exponent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionSpec {
    pub ceiling: Exponent,
    pub max_terms: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_cap: Option<usize>,
}

/// A group element: one exact rational, or a coordinate list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Scalar(String),
    Coords(Vec<String>),
}

/// `(exponent, coefficient)` with the coefficient in the ambient residue field.
pub type TermSpec = (Exponent, String);

fn one() -> String {
    "1".to_string()
}

fn is_one(s: &String) -> bool {
    s == "1"
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Builder {
    Ref(String),
    Terms(Vec<TermSpec>),
    Constant(String),
    Monomial {
        exponent: Exponent,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        coefficient: String,
    },
    /// `Σ_{k≥0} t^{k·step}`.
    Geometric {
        step: Exponent,
    },
    /// `Σ_{k≥0} t^{p^k·step}` with `p` the characteristic.
    ArtinSchreier {
        step: Exponent,
    },
    Sum(Vec<Builder>),
    Product(Vec<Builder>),
    Neg(Box<Builder>),
    Power {
        of: Box<Builder>,
        exponent: u32,
    },
    Inverse(Box<Builder>),
    /// An element of `K` given as a quotient of finite term lists.
    Ratio {
        num: Vec<TermSpec>,
        den: Vec<TermSpec>,
    },
}

/// Members `i = from, from+1, …` whose exponents are affine in `i`, such as
/// `"i+1"` or `"2i"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexedFamily {
    pub terms: Vec<(String, String)>,
    #[serde(default)]
    pub from: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Replaces the scenario's base field for this task.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_field: Option<BaseSpec>,
    #[serde(flatten)]
    pub op: Operation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    Independence {
        family: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        over: Vec<String>,
    },
    Normalize {
        family: Vec<String>,
    },
    NearestPoint {
        target: String,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        family: Vec<String>,
        /// Streamed stages `1..=max_terms` of an indexed family.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stream: Option<IndexedFamily>,
    },
    Orthogonalize {
        generators: Vec<String>,
    },
    /// Closure of `K[generators]`, or the explicit span of `space`.
    AnalyzeExtension {
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        generators: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        space: Vec<String>,
    },
    Immediacy {
        probe: String,
    },
    Approximate {
        u: Vec<String>,
        coefficients: Vec<Vec<String>>,
    },
    Exchange {
        basis: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        over: Vec<String>,
        element: String,
    },
    RelativeBasis {
        basis: Vec<String>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        over: Vec<String>,
        generators: Vec<String>,
    },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Independence { .. } => "independence",
            Operation::Normalize { .. } => "normalize",
            Operation::NearestPoint { .. } => "nearest_point",
            Operation::Orthogonalize { .. } => "orthogonalize",
            Operation::AnalyzeExtension { .. } => "analyze_extension",
            Operation::Immediacy { .. } => "immediacy",
            Operation::Approximate { .. } => "approximate",
            Operation::Exchange { .. } => "exchange",
            Operation::RelativeBasis { .. } => "relative_basis",
        }
    }

    /// Element names referenced by the task.
    pub fn references(&self) -> Vec<&str> {
        let lists: Vec<&[String]> = match self {
            Operation::Independence { family, over } => vec![family, over],
            Operation::Normalize { family } => vec![family],
            Operation::NearestPoint { target, family, .. } => {
                vec![std::slice::from_ref(target), family]
            }
            Operation::Orthogonalize { generators } => vec![generators],
            Operation::AnalyzeExtension { generators, space } => vec![generators, space],
            Operation::Immediacy { probe } => vec![std::slice::from_ref(probe)],
            Operation::Approximate { u, coefficients } => std::iter::once(u.as_slice())
                .chain(coefficients.iter().map(Vec::as_slice))
                .collect(),
            Operation::Exchange {
                basis,
                over,
                element,
            } => vec![basis, over, std::slice::from_ref(element)],
            Operation::RelativeBasis {
                basis,
                over,
                generators,
            } => vec![basis, over, generators],
        };
        lists.into_iter().flatten().map(String::as_str).collect()
    }
}

impl Builder {
    fn references<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Builder::Ref(name) => out.push(name),
            Builder::Sum(v) | Builder::Product(v) => v.iter().for_each(|b| b.references(out)),
            Builder::Neg(b) | Builder::Inverse(b) => b.references(out),
            Builder::Power { of, .. } => of.references(out),
            _ => {}
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        for (name, b) in &self.elements {
            let mut refs = Vec::new();
            b.references(&mut refs);
            for r in refs {
                if !self.elements.contains_key(r) {
                    return Err(CliError::UnknownName(format!("{r} (in element {name})")));
                }
            }
        }
        for (i, task) in self.tasks.iter().enumerate() {
            for r in task.op.references() {
                if !self.elements.contains_key(r) {
                    return Err(CliError::UnknownName(format!("{r} (in task {})", i + 1)));
                }
            }
            match &task.op {
                Operation::NearestPoint { family, stream, .. }
                    if family.is_empty() == stream.is_none() =>
                {
                    return Err(CliError::Unsupported(format!(
                        "task {}: nearest_point needs exactly one of family and stream",
                        i + 1
                    )));
                }
                Operation::AnalyzeExtension { generators, space }
                    if generators.is_empty() == space.is_empty() =>
                {
                    return Err(CliError::Unsupported(format!(
                        "task {}: analyze_extension needs exactly one of generators and space",
                        i + 1
                    )));
                }
                Operation::Approximate { u, coefficients }
                    if coefficients.iter().any(|r| r.len() != u.len()) =>
                {
                    return Err(CliError::Unsupported(format!(
                        "task {}: coefficient rows must have one entry per member of u",
                        i + 1
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Canonical JSON form; parsing it gives back the same scenario.
    pub fn echo(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenarios serialize")
    }
}
