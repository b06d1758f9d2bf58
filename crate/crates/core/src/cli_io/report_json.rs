//! Machine-readable reports: every condition with its witness (residuals as
//! term lists), every cross-check, the request and the instance it ran on.

use serde_json::{json, Value};

use super::instance::{element_terms, matrix_terms, InstanceFile};
use crate::report::{Outcome, StructureReport, Witness};
use crate::scalar::Scalar;

fn terms<S: Scalar>(e: &crate::GradedElement<S>) -> Value {
    serde_json::to_value(element_terms(e).expect("term lists are infallible")).expect("serializable")
}

pub fn witness_json<S: Scalar>(w: &Witness<S>) -> Value {
    match w {
        Witness::None => Value::Null,
        Witness::Residual(r) => json!({ "type": "residual", "display": r.to_string(), "terms": terms(r) }),
        Witness::Sections { inputs, residual } => json!({
            "type": "sections",
            "inputs": inputs.iter().map(terms).collect::<Vec<_>>(),
            "display": w.to_string(),
            "residual": terms(residual),
        }),
        Witness::Matrix(m) => json!({ "type": "matrix", "matrix": matrix_terms(m) }),
        Witness::Grid { cell, detail } => json!({ "type": "grid", "cell": cell, "detail": detail }),
        Witness::Message(m) => json!({ "type": "message", "message": m }),
    }
}

pub fn report_json<S: Scalar>(r: &StructureReport<S>) -> Value {
    let conditions: Vec<Value> = r
        .conditions
        .iter()
        .map(|c| json!({ "name": c.name, "holds": c.holds, "witness": witness_json(&c.witness) }))
        .collect();
    let cross: Vec<Value> = r
        .cross_checks
        .iter()
        .map(|c| match &c.outcome {
            Outcome::Agree => json!({ "name": c.name, "outcome": "agree" }),
            Outcome::Disagree => json!({ "name": c.name, "outcome": "disagree" }),
            Outcome::NotApplicable(why) => json!({ "name": c.name, "outcome": "not-applicable", "reason": why }),
        })
        .collect();
    json!({
        "kind": r.kind.tag(),
        "verdict": r.verdict,
        "consistent": r.consistent(),
        "conditions": conditions,
        "cross_checks": cross,
    })
}

/// A report document; `instance` makes the verdict reproducible from the
/// file alone (it can be passed back wherever an instance file is expected).
pub fn document<S: Scalar>(r: &StructureReport<S>, request: Value, instance: Option<&InstanceFile>) -> Value {
    let mut doc = report_json(r);
    let obj = doc.as_object_mut().expect("object");
    obj.insert("request".into(), request);
    if let Some(inst) = instance {
        obj.insert("instance".into(), serde_json::to_value(inst).expect("serializable"));
    }
    doc
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
