//! JSON interchange formats: field/group descriptors, the three object
//! tiers, lift inputs, search problems/results, scan records and bound
//! reports.
//!
//! Elements serialize per the algebra encodings: a plain integer for cyclic
//! groups and prime fields, a coefficient list (constant term first) for
//! extension fields, and a two-element array for products. Designs stream as
//! JSON Lines (a header object, then one block per line) to bound memory;
//! the reader also accepts a single JSON object with a `blocks` array.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::family::{Design, RelativeDifferenceFamily, StrongDifferenceFamily};
use crate::field::{FieldElem, FiniteField};
use crate::group::{AbelianGroup, GroupElem, Subgroup};
use crate::lifting::LiftInput;

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

// ---------------------------------------------------------------- descriptors

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldDescriptor {
    pub p: u64,
    pub f: usize,
    pub modulus: Vec<u64>,
}

impl FieldDescriptor {
    pub fn of(field: &FiniteField) -> Self {
        FieldDescriptor {
            p: field.p(),
            f: field.f(),
            modulus: field.modulus().to_vec(),
        }
    }

    pub fn build(&self) -> Result<FiniteField> {
        FiniteField::new(self.p, self.f, Some(self.modulus.clone()))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GroupDescriptor {
    Cyclic { n: u64 },
    Field { field: FieldDescriptor },
    Product {
        left: Box<GroupDescriptor>,
        right: Box<GroupDescriptor>,
    },
}

impl GroupDescriptor {
    pub fn of(group: &AbelianGroup) -> Self {
        match group {
            AbelianGroup::Cyclic(n) => GroupDescriptor::Cyclic { n: *n },
            AbelianGroup::FieldAdditive(f) => GroupDescriptor::Field {
                field: FieldDescriptor::of(f),
            },
            AbelianGroup::Product(l, r) => GroupDescriptor::Product {
                left: Box::new(GroupDescriptor::of(l)),
                right: Box::new(GroupDescriptor::of(r)),
            },
        }
    }

    pub fn build(&self) -> Result<AbelianGroup> {
        Ok(match self {
            GroupDescriptor::Cyclic { n } => AbelianGroup::Cyclic(*n),
            GroupDescriptor::Field { field } => AbelianGroup::FieldAdditive(field.build()?),
            GroupDescriptor::Product { left, right } => AbelianGroup::Product(
                Box::new(left.build()?),
                Box::new(right.build()?),
            ),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SubgroupDescriptor {
    Trivial,
    Whole,
    LeftFactor,
    RightFactor,
    Elements { elements: Vec<u64> },
}

impl SubgroupDescriptor {
    pub fn of(sub: &Subgroup) -> Self {
        match sub {
            Subgroup::Trivial => SubgroupDescriptor::Trivial,
            Subgroup::Whole => SubgroupDescriptor::Whole,
            Subgroup::LeftFactor => SubgroupDescriptor::LeftFactor,
            Subgroup::RightFactor => SubgroupDescriptor::RightFactor,
            Subgroup::Elements(set) => SubgroupDescriptor::Elements {
                elements: set.iter().copied().collect(),
            },
        }
    }

    pub fn build(&self) -> Subgroup {
        match self {
            SubgroupDescriptor::Trivial => Subgroup::Trivial,
            SubgroupDescriptor::Whole => Subgroup::Whole,
            SubgroupDescriptor::LeftFactor => Subgroup::LeftFactor,
            SubgroupDescriptor::RightFactor => Subgroup::RightFactor,
            SubgroupDescriptor::Elements { elements } => {
                Subgroup::Elements(elements.iter().copied().collect())
            }
        }
    }
}

// ---------------------------------------------------------------- elements

pub fn field_elem_to_json(field: &FiniteField, x: FieldElem) -> Value {
    if field.f() == 1 {
        json!(x.index())
    } else {
        json!(field.coeffs(x))
    }
}

pub fn field_elem_from_json(field: &FiniteField, v: &Value) -> Result<FieldElem> {
    if let Some(n) = v.as_u64() {
        return field.elem(n);
    }
    let arr = v
        .as_array()
        .ok_or_else(|| bad(format!("expected field element, got {v}")))?;
    let coeffs: Vec<u64> = arr
        .iter()
        .map(|c| c.as_u64().ok_or_else(|| bad("field coefficients must be integers")))
        .collect::<Result<_>>()?;
    field.from_coeffs(&coeffs)
}

pub fn group_elem_to_json(group: &AbelianGroup, e: &GroupElem) -> Result<Value> {
    Ok(match (group, e) {
        (AbelianGroup::Cyclic(_), GroupElem::Int(x)) => json!(x),
        (AbelianGroup::FieldAdditive(f), GroupElem::Field(x)) => field_elem_to_json(f, *x),
        (AbelianGroup::Product(l, r), GroupElem::Pair(a, b)) => {
            json!([group_elem_to_json(l, a)?, group_elem_to_json(r, b)?])
        }
        _ => return Err(bad("element does not match group kind")),
    })
}

pub fn group_elem_from_json(group: &AbelianGroup, v: &Value) -> Result<GroupElem> {
    match group {
        AbelianGroup::Cyclic(n) => {
            let x = v
                .as_u64()
                .ok_or_else(|| bad(format!("expected integer element, got {v}")))?;
            if x >= *n {
                return Err(bad(format!("element {x} out of range for Z_{n}")));
            }
            Ok(GroupElem::Int(x))
        }
        AbelianGroup::FieldAdditive(f) => Ok(GroupElem::Field(field_elem_from_json(f, v)?)),
        AbelianGroup::Product(l, r) => {
            let arr = v
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| bad(format!("expected [left, right] pair, got {v}")))?;
            Ok(GroupElem::pair(
                group_elem_from_json(l, &arr[0])?,
                group_elem_from_json(r, &arr[1])?,
            ))
        }
    }
}

fn blocks_to_json(group: &AbelianGroup, blocks: &[Vec<GroupElem>]) -> Result<Value> {
    let mut out = Vec::with_capacity(blocks.len());
    for b in blocks {
        let row: Vec<Value> = b
            .iter()
            .map(|e| group_elem_to_json(group, e))
            .collect::<Result<_>>()?;
        out.push(Value::Array(row));
    }
    Ok(Value::Array(out))
}

fn blocks_from_json(group: &AbelianGroup, v: &Value) -> Result<Vec<Vec<GroupElem>>> {
    let arr = v.as_array().ok_or_else(|| bad("blocks must be an array"))?;
    arr.iter()
        .map(|row| {
            let row = row
                .as_array()
                .ok_or_else(|| bad("each block must be an array"))?;
            row.iter().map(|e| group_elem_from_json(group, e)).collect()
        })
        .collect()
}

// ---------------------------------------------------------------- objects

pub fn sdf_to_json(sdf: &StrongDifferenceFamily) -> Result<Value> {
    Ok(json!({
        "group": GroupDescriptor::of(&sdf.group),
        "k": sdf.k,
        "mu": sdf.mu,
        "blocks": blocks_to_json(&sdf.group, &sdf.blocks)?,
    }))
}

pub fn sdf_from_json(v: &Value) -> Result<StrongDifferenceFamily> {
    let group: GroupDescriptor = field_of(v, "group")?;
    let group = group.build()?;
    let k = u64_of(v, "k")? as usize;
    let mu = u64_of(v, "mu")?;
    let blocks = blocks_from_json(&group, value_of(v, "blocks")?)?;
    StrongDifferenceFamily::new(group, blocks, k, mu)
}

pub fn df_to_json(df: &RelativeDifferenceFamily) -> Result<Value> {
    Ok(json!({
        "group": GroupDescriptor::of(&df.group),
        "subgroup": SubgroupDescriptor::of(&df.subgroup),
        "k": df.k,
        "lambda": df.lambda,
        "blocks": blocks_to_json(&df.group, &df.blocks)?,
    }))
}

pub fn df_from_json(v: &Value) -> Result<RelativeDifferenceFamily> {
    let group: GroupDescriptor = field_of(v, "group")?;
    let group = group.build()?;
    let sub: SubgroupDescriptor = field_of(v, "subgroup")?;
    let k = u64_of(v, "k")? as usize;
    let lambda = u64_of(v, "lambda")?;
    let blocks = blocks_from_json(&group, value_of(v, "blocks")?)?;
    RelativeDifferenceFamily::new(group, sub.build(), blocks, k, lambda)
}

pub fn lift_input_to_json(input: &LiftInput) -> Result<Value> {
    let phi: Vec<Value> = input
        .phi_blocks
        .iter()
        .map(|row| Value::Array(row.iter().map(|&x| field_elem_to_json(&input.field, x)).collect()))
        .collect();
    Ok(json!({
        "group": GroupDescriptor::of(&input.group),
        "field": FieldDescriptor::of(&input.field),
        "e": input.e,
        "d": input.d,
        "lambda": input.lambda,
        "f_blocks": blocks_to_json(&input.group, &input.f_blocks)?,
        "phi_blocks": phi,
    }))
}

pub fn lift_input_from_json(v: &Value) -> Result<LiftInput> {
    let group: GroupDescriptor = field_of(v, "group")?;
    let group = group.build()?;
    let field: FieldDescriptor = field_of(v, "field")?;
    let field = field.build()?;
    let e = u64_of(v, "e")?;
    let d = u64_of(v, "d")?;
    let lambda = u64_of(v, "lambda")?;
    let f_blocks = blocks_from_json(&group, value_of(v, "f_blocks")?)?;
    let phi_raw = value_of(v, "phi_blocks")?
        .as_array()
        .ok_or_else(|| bad("phi_blocks must be an array"))?;
    let phi_blocks: Vec<Vec<FieldElem>> = phi_raw
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("each phi block must be an array"))?
                .iter()
                .map(|x| field_elem_from_json(&field, x))
                .collect()
        })
        .collect::<Result<_>>()?;
    LiftInput::new(group, field, e, d, lambda, f_blocks, phi_blocks)
}

// ---------------------------------------------------------------- designs

/// Writes a design as JSON Lines: `{"v":..,"k":..,"lambda":..}` then one
/// block array per line.
pub fn write_design_jsonl<W: Write>(mut w: W, design: &Design) -> Result<()> {
    let header = json!({"v": design.v, "k": design.k, "lambda": design.lambda});
    writeln!(w, "{header}").map_err(|e| bad(format!("write failed: {e}")))?;
    for b in &design.blocks {
        writeln!(w, "{}", json!(b)).map_err(|e| bad(format!("write failed: {e}")))?;
    }
    Ok(())
}

/// Reads either the JSON Lines form or a single object with a `blocks` array.
pub fn read_design<R: BufRead>(r: R) -> Result<Design> {
    let mut text = String::new();
    let mut r = r;
    r.read_to_string(&mut text)
        .map_err(|e| bad(format!("read failed: {e}")))?;
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty design input"));
    }
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        if v.get("blocks").is_some() {
            let v_pts = u64_of(&v, "v")?;
            let k = u64_of(&v, "k")? as usize;
            let lambda = u64_of(&v, "lambda")?;
            let blocks = design_blocks_from_json(value_of(&v, "blocks")?)?;
            return Design::new(v_pts, k, lambda, blocks);
        }
    }
    let mut lines = text.lines();
    let header: Value = serde_json::from_str(lines.next().ok_or_else(|| bad("missing header"))?)
        .map_err(|e| bad(format!("bad header: {e}")))?;
    let v_pts = u64_of(&header, "v")?;
    let k = u64_of(&header, "k")? as usize;
    let lambda = u64_of(&header, "lambda")?;
    let mut blocks = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Vec<u32> = serde_json::from_str(line)
            .map_err(|e| bad(format!("bad block on line {}: {e}", lineno + 2)))?;
        blocks.push(row);
    }
    Design::new(v_pts, k, lambda, blocks)
}

fn design_blocks_from_json(v: &Value) -> Result<Vec<Vec<u32>>> {
    let arr = v.as_array().ok_or_else(|| bad("blocks must be an array"))?;
    arr.iter()
        .map(|row| {
            serde_json::from_value(row.clone()).map_err(|e| bad(format!("bad block: {e}")))
        })
        .collect()
}

pub fn design_to_json(design: &Design) -> Value {
    json!({
        "v": design.v,
        "k": design.k,
        "lambda": design.lambda,
        "blocks": design.blocks,
    })
}

// ---------------------------------------------------------------- helpers

fn value_of<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn u64_of(v: &Value, key: &str) -> Result<u64> {
    value_of(v, key)?
        .as_u64()
        .ok_or_else(|| bad(format!("field `{key}` must be a non-negative integer")))
}

fn field_of<T: for<'de> Deserialize<'de>>(v: &Value, key: &str) -> Result<T> {
    serde_json::from_value(value_of(v, key)?.clone())
        .map_err(|e| bad(format!("field `{key}`: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{catalog_entry, gf25};
    use crate::group::{make_cyclic, make_field_additive, make_product};

    #[test]
    fn element_round_trips() {
        let f25 = gf25();
        let g = make_product(make_cyclic(63), make_field_additive(f25.clone()));
        let e = GroupElem::pair(
            GroupElem::Int(42),
            GroupElem::Field(f25.omega_pow(7)),
        );
        let v = group_elem_to_json(&g, &e).unwrap();
        assert_eq!(group_elem_from_json(&g, &v).unwrap(), e);
        // extension elements serialize as coefficient lists
        assert!(v.as_array().unwrap()[1].is_array());
    }

    #[test]
    fn sdf_round_trip() {
        let sdf = catalog_entry("2.2").unwrap().as_sdf().unwrap().clone();
        let v = sdf_to_json(&sdf).unwrap();
        let back = sdf_from_json(&v).unwrap();
        assert_eq!(back.blocks, sdf.blocks);
        assert_eq!(back.mu, sdf.mu);
    }

    #[test]
    fn lift_input_round_trip() {
        let e = catalog_entry("2.16-p81").unwrap();
        let input = e.as_lift().unwrap();
        let v = lift_input_to_json(input).unwrap();
        let back = lift_input_from_json(&v).unwrap();
        assert_eq!(back.f_blocks, input.f_blocks);
        assert_eq!(back.phi_blocks, input.phi_blocks);
        assert_eq!((back.e, back.d, back.lambda), (input.e, input.d, input.lambda));
    }

    #[test]
    fn design_jsonl_round_trip() {
        let d = crate::family::trivial_design(5, 2);
        let mut buf = Vec::new();
        write_design_jsonl(&mut buf, &d).unwrap();
        let back = read_design(&buf[..]).unwrap();
        assert_eq!(back.blocks, d.blocks);
        // whole-object form reads too
        let j = design_to_json(&d).to_string();
        let back = read_design(j.as_bytes()).unwrap();
        assert_eq!(back.blocks, d.blocks);
    }

    #[test]
    fn malformed_inputs_are_reported() {
        assert!(read_design("".as_bytes()).is_err());
        assert!(sdf_from_json(&json!({"k": 3})).is_err());
        let v = json!({
            "group": {"kind": "cyclic", "n": 5},
            "k": 2, "mu": 2,
            "blocks": [[0, 9]]
        });
        assert!(sdf_from_json(&v).is_err());
    }
}
