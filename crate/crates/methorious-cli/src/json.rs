//! JSON input (problem specifications) and schema-stable JSON output.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use methorious::expalg::Scalar;
use methorious::methfun::{MethoriousFunction, MethoriousHyperfunction};
use methorious::operators::{IntDiffOperator, OperatorTerm};
use methorious::ore::MethoriousOperator;
use methorious::problems::{BoundaryProblem, FundamentalSystem};

use crate::parse::{self, ParseError};
use crate::render::{self, Format};

/// Version tag carried by every JSON document the tool emits.
pub const SCHEMA: u32 = 1;

/// A problem specification as read from a file or stdin.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(rename = "T")]
    pub t: String,
    pub conditions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fundamental_system: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
}

impl ProblemSpec {
    /// Parses into a boundary problem (attaching a verified fundamental
    /// system when one is supplied) plus optional boundary values.
    pub fn build(&self) -> Result<(BoundaryProblem, Option<Vec<Scalar>>), SpecError> {
        let op_raw = parse::parse_operator(&self.t).map_err(SpecError::Parse)?;
        let op = parse::operator_as_diffop(&op_raw).ok_or_else(|| {
            SpecError::Parse(ParseError {
                line: 1,
                column: 1,
                expected: vec!["a monic differential operator in field \"T\"".into()],
                found: self.t.clone(),
            })
        })?;
        let mut conds = Vec::new();
        for c in &self.conditions {
            conds.push(parse::parse_condition(c).map_err(SpecError::Parse)?);
        }
        let mut problem = BoundaryProblem::new(op.clone(), conds);
        if let Some(fs) = &self.fundamental_system {
            let mut basis = Vec::new();
            for f in fs {
                basis.push(parse::parse_expr(f).map_err(SpecError::Parse)?);
            }
            let system =
                FundamentalSystem::from_basis(&op, basis).map_err(SpecError::Core)?;
            problem = problem.with_system(system).map_err(SpecError::Core)?;
        }
        let values = match &self.values {
            None => None,
            Some(vs) => {
                let mut out = Vec::new();
                for v in vs {
                    out.push(parse::parse_scalar(v).map_err(SpecError::Parse)?);
                }
                Some(out)
            }
        };
        Ok((problem, values))
    }
}

#[derive(Debug)]
pub enum SpecError {
    Parse(ParseError),
    Core(methorious::Error),
}

fn term_json(term: &OperatorTerm) -> Value {
    match term {
        OperatorTerm::Diff { coeff, order } => json!({
            "kind": "diff",
            "coeff": render::expr(coeff, Format::Plain),
            "order": order,
        }),
        OperatorTerm::Int { coeff, kernel } => json!({
            "kind": "int",
            "coeff": render::expr(coeff, Format::Plain),
            "kernel": render::expr(kernel, Format::Plain),
        }),
        OperatorTerm::BoundLocal { coeff, point, order } => json!({
            "kind": "boundary-local",
            "coeff": render::expr(coeff, Format::Plain),
            "point": render::rat(point),
            "order": order,
        }),
        OperatorTerm::BoundGlobal { coeff, point, kernel } => json!({
            "kind": "boundary-global",
            "coeff": render::expr(coeff, Format::Plain),
            "point": render::rat(point),
            "kernel": render::expr(kernel, Format::Plain),
        }),
    }
}

pub fn operator_json(op: &IntDiffOperator) -> Value {
    json!({
        "text": render::operator(op, Format::Plain),
        "terms": op.terms().iter().map(term_json).collect::<Vec<_>>(),
    })
}

pub fn problem_json(p: &BoundaryProblem) -> Value {
    json!({
        "T": render::diff_operator(p.operator(), Format::Plain),
        "conditions": p
            .conditions()
            .iter()
            .map(|c| render::condition(c, Format::Plain))
            .collect::<Vec<_>>(),
    })
}

pub fn fraction_json(f: &MethoriousOperator) -> Value {
    json!({
        "den": problem_json(f.den()),
        "num": f
            .num()
            .terms()
            .iter()
            .map(|(c, p)| json!({"coeff": render::rat(c), "problem": problem_json(p)}))
            .collect::<Vec<_>>(),
        "text": render::fraction(f, Format::Plain),
    })
}

pub fn methorious_function_json(m: &MethoriousFunction) -> Value {
    json!({
        "smooth": render::expr(m.smooth_part(), Format::Plain),
        "ideal": m
            .ideal_part()
            .iter()
            .map(|el| json!({
                "coeff": render::scalar(el.coeff(), Format::Plain),
                "g": render::expr(el.generator(), Format::Plain),
                "T": render::diff_operator(el.problem().operator(), Format::Plain),
                "B": el
                    .problem()
                    .conditions()
                    .iter()
                    .map(|c| render::condition(c, Format::Plain))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn hyperfunction_json(h: &MethoriousHyperfunction) -> Value {
    if h.is_plain() {
        json!({"value": methorious_function_json(h.value())})
    } else {
        json!({
            "den": problem_json(h.den()),
            "value": methorious_function_json(h.value()),
        })
    }
}

/// Wraps a payload with the schema version.
pub fn document(mut payload: Value) -> Value {
    if let Value::Object(map) = &mut payload {
        let mut out = serde_json::Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.append(map);
        return Value::Object(out);
    }
    json!({"schema": SCHEMA, "result": payload})
}
