//! JSON report shapes for CLI output.

use serde_json::{json, Value};

use diff_forge::formats::group_elem_to_json;
use diff_forge::paley::symbol_name;
use diff_forge::{
    BoundQuery, Design, DesignVerdict, DfVerdict, PaleyScheme, RelativeDifferenceFamily,
    ScanRecord, SdfVerdict, SearchProblem, SearchResult, StrongDifferenceFamily,
    SymbolicDhTable,
};

/// Full-width integer as a JSON number (serde_json's arbitrary_precision
/// feature keeps every digit).
fn big(n: impl ToString) -> Value {
    Value::Number(serde_json::Number::from_string_unchecked(n.to_string()))
}

pub fn bound_report(b: &BoundQuery) -> Value {
    json!({
        "d": b.d,
        "m": b.m,
        "U": big(&b.u),
        "Q": big(&b.q_floor),
        "Q_decimal": b.q_decimal,
        "q_threshold": big(&b.q_threshold),
    })
}

pub fn sdf_verdict_report(
    sdf: &StrongDifferenceFamily,
    v: &SdfVerdict,
) -> diff_forge::Result<Value> {
    let violation = match &v.first_violation {
        None => Value::Null,
        Some(t) => json!({
            "element": group_elem_to_json(&sdf.group, &t.element)?,
            "observed": t.observed,
            "expected": t.expected,
        }),
    };
    Ok(json!({
        "ok": v.ok,
        "mu_declared": sdf.mu,
        "mu_observed": v.mu_observed,
        "mu_even": v.mu_even,
        "divisibility": v.divisibility,
        "first_violation": violation,
    }))
}

pub fn df_verdict_report(
    df: &RelativeDifferenceFamily,
    v: &DfVerdict,
) -> diff_forge::Result<Value> {
    let violation = match &v.first_violation {
        None => Value::Null,
        Some(t) => json!({
            "element": group_elem_to_json(&df.group, &t.element)?,
            "observed": t.observed,
            "expected": t.expected,
        }),
    };
    Ok(json!({
        "ok": v.ok,
        "lambda": df.lambda,
        "base_blocks": df.blocks.len(),
        "first_violation": violation,
    }))
}

pub fn design_verdict_report(design: &Design, v: &DesignVerdict) -> Value {
    let violation = match &v.first_violation {
        None => Value::Null,
        Some(p) => json!({
            "pair": [p.pair.0, p.pair.1],
            "observed": p.observed,
            "expected": p.expected,
        }),
    };
    json!({
        "ok": v.ok,
        "v": design.v,
        "k": design.k,
        "lambda": design.lambda,
        "blocks": design.blocks.len(),
        "first_violation": violation,
    })
}

pub fn scheme_report(s: &PaleyScheme) -> Value {
    let base: Vec<u64> = s.base.iter().map(|x| x.index()).collect();
    let template: Vec<String> = s
        .template
        .iter()
        .map(|slot| match slot {
            diff_forge::paley::PhiSym::Zero => "0".to_string(),
            diff_forge::paley::PhiSym::Term { unit, sym } => {
                let name = symbol_name(*sym);
                match unit {
                    diff_forge::paley::Unit::One => name,
                    diff_forge::paley::Unit::MinusOne => format!("-{name}"),
                    diff_forge::paley::Unit::Xi => format!("xi*{name}"),
                    diff_forge::paley::Unit::MinusXi => format!("-xi*{name}"),
                }
            }
        })
        .collect();
    json!({
        "p": s.p(),
        "variant": s.variant.name(),
        "delta": s.delta.index(),
        "base": base,
        "template": template,
    })
}

pub fn table_report(t: &SymbolicDhTable) -> Value {
    let mut map = serde_json::Map::new();
    for (h, entries) in &t.entries {
        let rendered: Vec<String> = entries.iter().map(|e| e.render()).collect();
        map.insert(h.to_string(), json!(rendered));
    }
    json!({
        "p": t.p,
        "variant": t.variant.name(),
        "d_h": Value::Object(map),
    })
}

pub fn witness_json(witness: &[(usize, diff_forge::FieldElem)]) -> Value {
    let mut map = serde_json::Map::new();
    for (sym, val) in witness {
        map.insert(symbol_name(*sym), json!(val.index()));
    }
    Value::Object(map)
}

pub fn search_result_report(problem: &SearchProblem, r: &SearchResult) -> Value {
    json!({
        "p": problem.scheme.p(),
        "q": problem.field.q(),
        "d": problem.d,
        "lambda": problem.lambda,
        "status": r.status.name(),
        "witness": r.witness.as_ref().map(|w| witness_json(w)).unwrap_or(Value::Null),
        "nodes": r.nodes,
        "seconds": r.elapsed.as_secs_f64(),
    })
}

pub fn scan_record_report(r: &ScanRecord) -> Value {
    json!({
        "q": r.q,
        "status": r.status.name(),
        "witness": r.witness.as_ref().map(|w| witness_json(w)).unwrap_or(Value::Null),
        "nodes": r.nodes,
        "seconds": r.seconds,
    })
}
