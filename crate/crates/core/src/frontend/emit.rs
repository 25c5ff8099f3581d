//! Deterministic JSON output. Objects are key-sorted and exact numbers are
//! strings (`"-17"`, `"1/2"`, `"3/4+i"`).

use serde_json::{json, Map, Value};

use crate::geometry::Permutation;
use crate::model::gauss::{self, GaussRat};
use crate::model::{ComponentDescriptor, EpsilonFactor, SymbolicScalar, TorusCharacter};
use crate::oracle::SweepReport;

pub fn scalar(s: &SymbolicScalar) -> Value {
    epsilon(&EpsilonFactor::new(s.clone(), Vec::new()))
}

pub fn epsilon(e: &EpsilonFactor) -> Value {
    let factors: Map<String, Value> = e
        .constant
        .factors()
        .iter()
        .map(|(sym, exp)| (sym.to_string(), json!(exp)))
        .collect();
    json!({
        "sign": e.constant.sign().as_i64(),
        "q_exp": e.constant.q_exp().to_string(),
        "factors": factors,
        "beta": e.beta(),
    })
}

pub fn character(c: &TorusCharacter) -> Value {
    json!({ "beta": c.exponents() })
}

pub fn component(c: &ComponentDescriptor) -> Value {
    let parts: Vec<Value> = c
        .parts
        .iter()
        .map(|p| json!({ "t": p.t, "r": p.r }))
        .collect();
    json!({
        "parts": parts,
        "block_labels": c.block_labels,
        "variety": c.variety(),
        "dimension": c.dimension(),
        "symmetry_order": c.symmetry_order().to_string(),
    })
}

pub fn permutations(perms: &[Permutation]) -> Value {
    // 1-based images, matching the z_j numbering
    let perms: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| p.0.iter().map(|i| i + 1).collect())
        .collect();
    json!(perms)
}

pub fn number(z: &GaussRat) -> Value {
    json!(gauss::format(z))
}

pub fn sweep(report: &SweepReport) -> Value {
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|c| {
            json!({
                "sample": c.sample_index,
                "point": c.point.iter().map(gauss::format).collect::<Vec<_>>(),
                "phi_diagonals": c
                    .phi_diagonals
                    .iter()
                    .map(|d| d.iter().map(gauss::format).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "closed_form": number(&c.comparison.closed_form),
                "brute_force": number(&c.comparison.brute_force),
            })
        })
        .collect();
    json!({
        "seed": report.seed,
        "samples": report.samples,
        "agreed": report.agreed,
        "failures": failures,
    })
}

/// Compact, key-sorted JSON text.
pub fn to_text(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}
