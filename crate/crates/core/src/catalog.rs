//! The built-in catalog of explicit constructions: five strong difference
//! families and seven lift inputs, addressable by tag.
//!
//! Companion values for the GF(25) entries are stored as omega exponents
//! against the fixed modulus x^2 + 2x + 3, so the emitted blocks reproduce
//! the source tables exactly. Derived blocks (B * (1,-1), B * (1,xi),
//! B * (1,-xi)) are generated from their base block by the multiplier rule
//! rather than transcribed.

use crate::error::Result;
use crate::field::{FieldElem, FiniteField};
use crate::group::{make_cyclic, GroupElem};
use crate::lifting::LiftInput;

#[derive(Clone, Debug)]
pub enum CatalogObject {
    Sdf(crate::family::StrongDifferenceFamily),
    Lift(LiftInput),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Sdf { order: u64, k: usize, mu: u64 },
    Df { v: u64, n: u64, k: usize, lambda: u64 },
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub tag: &'static str,
    pub summary: String,
    pub object: CatalogObject,
    pub expected: Expected,
}

fn ints(xs: &[u64]) -> Vec<GroupElem> {
    xs.iter().map(|&x| GroupElem::Int(x)).collect()
}

fn sdf_entry(tag: &'static str, n: u64, k: usize, mu: u64, blocks: &[&[u64]]) -> CatalogEntry {
    let group = make_cyclic(n);
    let blocks: Vec<Vec<GroupElem>> = blocks.iter().map(|b| ints(b)).collect();
    let sdf = crate::family::StrongDifferenceFamily::new(group, blocks, k, mu)
        .expect("catalog SDF data is well-formed");
    CatalogEntry {
        tag,
        summary: format!("({n},{k},{mu})-SDF over Z_{n}"),
        object: CatalogObject::Sdf(sdf),
        expected: Expected::Sdf { order: n, k, mu },
    }
}

struct LiftSpec {
    tag: &'static str,
    n: u64,
    field: FiniteField,
    e: u64,
    d: u64,
    lambda: u64,
    /// (f sequence, phi sequence, multipliers to derive extra blocks from it)
    blocks: Vec<(Vec<u64>, Vec<FieldElem>, Vec<FieldElem>)>,
}

fn lift_entry(spec: LiftSpec) -> CatalogEntry {
    let group = make_cyclic(spec.n);
    let fq = &spec.field;
    let mut f_blocks = Vec::new();
    let mut phi_blocks = Vec::new();
    for (f_seq, phi_seq, multipliers) in &spec.blocks {
        f_blocks.push(ints(f_seq));
        phi_blocks.push(phi_seq.clone());
        for &m in multipliers {
            f_blocks.push(ints(f_seq));
            phi_blocks.push(phi_seq.iter().map(|&x| fq.mul(x, m)).collect());
        }
    }
    let k = f_blocks[0].len();
    let v = spec.n * fq.q();
    let input = LiftInput::new(
        group,
        spec.field.clone(),
        spec.e,
        spec.d,
        spec.lambda,
        f_blocks,
        phi_blocks,
    )
    .expect("catalog lift data is well-formed");
    CatalogEntry {
        tag: spec.tag,
        summary: format!(
            "({v},{},{k},{})-DF over Z_{} x F_{}",
            spec.n,
            spec.lambda,
            spec.n,
            fq.q()
        ),
        object: CatalogObject::Lift(input),
        expected: Expected::Df {
            v,
            n: spec.n,
            k,
            lambda: spec.lambda,
        },
    }
}

fn felems(fq: &FiniteField, xs: &[u64]) -> Vec<FieldElem> {
    xs.iter().map(|&x| fq.elem(x).expect("in range")).collect()
}

/// Signed integers for prime fields, so tables can be written as printed.
fn zelems(fq: &FiniteField, xs: &[i64]) -> Vec<FieldElem> {
    let q = fq.q() as i64;
    xs.iter()
        .map(|&x| fq.elem(x.rem_euclid(q) as u64).expect("in range"))
        .collect()
}

/// None marks a literal zero; Some(j) is omega^j.
fn wexps(fq: &FiniteField, xs: &[Option<u64>]) -> Vec<FieldElem> {
    xs.iter()
        .map(|x| match x {
            None => fq.zero(),
            Some(j) => fq.omega_pow(*j),
        })
        .collect()
}

/// The field GF(25) used by the 2.16 entries: splitting field of
/// x^2 + 2x + 3 over F_5, omega a root, xi = omega^6.
pub fn gf25() -> FiniteField {
    FiniteField::new(5, 2, Some(vec![3, 2, 1])).expect("x^2+2x+3 is primitive over F_5")
}

pub fn catalog() -> Vec<CatalogEntry> {
    let mut entries = Vec::new();

    entries.push(sdf_entry(
        "lemma-2.2",
        63,
        7,
        2,
        &[
            &[0, 4, 15, 23, 37, 58, 58],
            &[0, 1, 3, 7, 13, 25, 39],
            &[0, 1, 3, 11, 18, 34, 47],
        ],
    ));

    let f11 = FiniteField::prime(11).expect("11 is prime");
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.3",
        n: 63,
        e: 10,
        d: 2,
        lambda: 1,
        blocks: vec![
            (
                vec![0, 4, 15, 23, 37, 58, 58],
                felems(&f11, &[0, 3, 5, 6, 8, 1, 10]),
                vec![],
            ),
            (
                vec![0, 1, 3, 7, 13, 25, 39],
                felems(&f11, &[0, 2, 4, 6, 1, 10, 8]),
                vec![],
            ),
            (
                vec![0, 1, 3, 11, 18, 34, 47],
                felems(&f11, &[0, 4, 7, 9, 2, 3, 5]),
                vec![],
            ),
        ],
        field: f11,
    }));

    entries.push(sdf_entry(
        "lemma-2.6",
        27,
        9,
        8,
        &[
            &[0, 3, 3, 8, 8, 17, 17, 23, 23],
            &[0, 1, 2, 3, 19, 4, 5, 8, 12],
            &[0, 1, 2, 3, 19, 6, 11, 13, 17],
        ],
    ));

    let f17 = FiniteField::prime(17).expect("17 is prime");
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.7-q17",
        n: 27,
        e: 16,
        d: 2,
        lambda: 4,
        blocks: vec![
            (
                vec![0, 3, 3, 8, 8, 17, 17, 23, 23],
                zelems(&f17, &[0, 1, -1, 2, -2, 3, -3, 5, -5]),
                vec![],
            ),
            (
                vec![0, 1, 2, 3, 19, 4, 5, 8, 12],
                felems(&f17, &[0, 1, 2, 7, 11, 10, 5, 14, 16]),
                vec![],
            ),
            (
                vec![0, 1, 2, 3, 19, 6, 11, 13, 17],
                zelems(&f17, &[0, -1, -2, -7, 6, 3, 2, 12, 13]),
                vec![],
            ),
        ],
        field: f17.clone(),
    }));

    let f29 = FiniteField::prime(29).expect("29 is prime");
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.7-q29",
        n: 27,
        e: 28,
        d: 2,
        lambda: 4,
        blocks: vec![
            (
                vec![0, 3, 3, 8, 8, 17, 17, 23, 23],
                zelems(&f29, &[0, 1, -1, 2, -2, 3, -3, 4, -4]),
                vec![],
            ),
            (
                vec![0, 1, 2, 3, 19, 4, 5, 8, 12],
                felems(&f29, &[0, 1, 2, 4, 11, 15, 5, 13, 21]),
                vec![],
            ),
            (
                vec![0, 1, 2, 3, 19, 6, 11, 13, 17],
                zelems(&f29, &[0, -1, -2, -4, -11, 11, 19, 10, 22]),
                vec![],
            ),
        ],
        field: f29,
    }));

    entries.push(sdf_entry(
        "lemma-2.10",
        45,
        9,
        8,
        &[
            &[0, 2, 2, 15, 15, 23, 23, 33, 33],
            &[0, 1, 4, 5, 6, 7, 13, 22, 33],
            &[0, 1, 4, 5, 6, 7, 13, 22, 33],
            &[0, 2, 5, 11, 21, 25, 28, 36, 40],
            &[0, 2, 5, 11, 21, 25, 28, 36, 40],
        ],
    ));

    let minus_one_17 = f17.neg(f17.one());
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.11",
        n: 45,
        e: 8,
        d: 2,
        lambda: 2,
        blocks: vec![
            (
                vec![0, 2, 2, 15, 15, 23, 23, 33, 33],
                zelems(&f17, &[0, 1, -1, 2, -2, 3, -3, 5, -5]),
                vec![],
            ),
            (
                vec![0, 1, 4, 5, 6, 7, 13, 22, 33],
                felems(&f17, &[0, 1, 2, 3, 6, 9, 4, 11, 15]),
                vec![minus_one_17],
            ),
            (
                vec![0, 2, 5, 11, 21, 25, 28, 36, 40],
                felems(&f17, &[0, 3, 8, 6, 12, 7, 9, 2, 13]),
                vec![minus_one_17],
            ),
        ],
        field: f17,
    }));

    let f41 = FiniteField::prime(41).expect("41 is prime");
    let minus_one_41 = f41.neg(f41.one());
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.12",
        n: 45,
        e: 20,
        d: 4,
        lambda: 1,
        blocks: vec![
            (
                vec![0, 2, 2, 15, 15, 23, 23, 33, 33],
                zelems(&f41, &[0, 1, -1, 2, -2, 3, -3, 6, -6]),
                vec![],
            ),
            (
                vec![0, 1, 4, 5, 6, 7, 13, 22, 33],
                felems(&f41, &[0, 1, 7, 21, 12, 15, 24, 4, 34]),
                vec![minus_one_41],
            ),
            (
                vec![0, 2, 5, 11, 21, 25, 28, 36, 40],
                felems(&f41, &[0, 3, 31, 32, 15, 9, 40, 25, 35]),
                vec![minus_one_41],
            ),
        ],
        field: f41,
    }));

    entries.push(sdf_entry(
        "lemma-2.15-p63",
        63,
        8,
        8,
        &[
            &[20, 20, 43, 43, 29, 29, 34, 34],
            &[0, 1, 3, 7, 19, 34, 42, 53],
            &[0, 1, 3, 7, 19, 34, 42, 53],
            &[0, 1, 3, 7, 19, 34, 42, 53],
            &[0, 1, 3, 7, 19, 34, 42, 53],
            &[0, 1, 4, 6, 26, 36, 43, 51],
            &[0, 1, 4, 6, 26, 36, 43, 51],
            &[0, 1, 4, 6, 26, 36, 43, 51],
            &[0, 1, 4, 6, 26, 36, 43, 51],
        ],
    ));

    entries.push(sdf_entry(
        "lemma-2.15-p81",
        81,
        9,
        8,
        &[
            &[0, 4, 4, 77, 77, 37, 37, 44, 44],
            &[0, 1, 4, 6, 17, 18, 38, 63, 72],
            &[0, 1, 4, 6, 17, 18, 38, 63, 72],
            &[0, 1, 4, 6, 17, 18, 38, 63, 72],
            &[0, 1, 4, 6, 17, 18, 38, 63, 72],
            &[0, 2, 7, 27, 30, 38, 53, 59, 69],
            &[0, 2, 7, 27, 30, 38, 53, 59, 69],
            &[0, 2, 7, 27, 30, 38, 53, 59, 69],
            &[0, 2, 7, 27, 30, 38, 53, 59, 69],
        ],
    ));

    // multipliers for the 2.16 entries: -1 = w^12, xi = w^6, -xi = w^18
    let f25 = gf25();
    let w = |j: u64| f25.omega_pow(j);
    let mults = vec![w(12), w(6), w(18)];
    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.16-p63",
        n: 63,
        e: 6,
        d: 2,
        lambda: 1,
        blocks: vec![
            (
                vec![20, 20, 43, 43, 29, 29, 34, 34],
                wexps(
                    &f25,
                    // (1, -1, xi, -xi, w, -w, w*xi, -w*xi)
                    &[
                        Some(0),
                        Some(12),
                        Some(6),
                        Some(18),
                        Some(1),
                        Some(13),
                        Some(7),
                        Some(19),
                    ],
                ),
                vec![],
            ),
            (
                vec![0, 1, 3, 7, 19, 34, 42, 53],
                wexps(
                    &f25,
                    &[
                        None,
                        Some(0),
                        Some(1),
                        Some(2),
                        Some(3),
                        Some(4),
                        Some(7),
                        Some(10),
                    ],
                ),
                mults.clone(),
            ),
            (
                vec![0, 1, 4, 6, 26, 36, 43, 51],
                wexps(
                    &f25,
                    &[
                        None,
                        Some(1),
                        Some(4),
                        Some(20),
                        Some(14),
                        Some(12),
                        Some(15),
                        Some(17),
                    ],
                ),
                mults.clone(),
            ),
        ],
        field: f25.clone(),
    }));

    entries.push(lift_entry(LiftSpec {
        tag: "lemma-2.16-p81",
        n: 81,
        e: 6,
        d: 2,
        lambda: 1,
        blocks: vec![
            (
                vec![0, 4, 4, 77, 77, 37, 37, 44, 44],
                wexps(
                    &f25,
                    &[
                        None,
                        Some(0),
                        Some(12),
                        Some(6),
                        Some(18),
                        Some(1),
                        Some(13),
                        Some(7),
                        Some(19),
                    ],
                ),
                vec![],
            ),
            (
                vec![0, 1, 4, 6, 17, 18, 38, 63, 72],
                wexps(
                    &f25,
                    &[
                        None,
                        Some(0),
                        Some(1),
                        Some(2),
                        Some(3),
                        Some(4),
                        Some(5),
                        Some(7),
                        Some(8),
                    ],
                ),
                mults.clone(),
            ),
            (
                vec![0, 2, 7, 27, 30, 38, 53, 59, 69],
                wexps(
                    &f25,
                    &[
                        None,
                        Some(0),
                        Some(4),
                        Some(17),
                        Some(2),
                        Some(18),
                        Some(8),
                        Some(10),
                        Some(14),
                    ],
                ),
                mults,
            ),
        ],
        field: f25,
    }));

    entries
}

/// Looks up an entry; accepts both "lemma-2.3" and the bare "2.3".
pub fn catalog_entry(tag: &str) -> Option<CatalogEntry> {
    let want = if tag.starts_with("lemma-") {
        tag.to_string()
    } else {
        format!("lemma-{tag}")
    };
    catalog().into_iter().find(|e| e.tag == want)
}

/// Convenience: the SDF tags checked by the regression suite.
pub fn sdf_tags() -> [&'static str; 5] {
    [
        "lemma-2.2",
        "lemma-2.6",
        "lemma-2.10",
        "lemma-2.15-p63",
        "lemma-2.15-p81",
    ]
}

/// Convenience: the lift tags checked by the regression suite.
pub fn lift_tags() -> [&'static str; 7] {
    [
        "lemma-2.3",
        "lemma-2.7-q17",
        "lemma-2.7-q29",
        "lemma-2.11",
        "lemma-2.12",
        "lemma-2.16-p63",
        "lemma-2.16-p81",
    ]
}

impl CatalogEntry {
    pub fn as_sdf(&self) -> Option<&crate::family::StrongDifferenceFamily> {
        match &self.object {
            CatalogObject::Sdf(s) => Some(s),
            _ => None,
        }
    }
    pub fn as_lift(&self) -> Option<&LiftInput> {
        match &self.object {
            CatalogObject::Lift(l) => Some(l),
            _ => None,
        }
    }

    /// The SDF formed by the entry's first components (the entry itself for
    /// SDF entries).
    pub fn component_sdf(&self) -> Result<crate::family::StrongDifferenceFamily> {
        match &self.object {
            CatalogObject::Sdf(s) => Ok(s.clone()),
            CatalogObject::Lift(l) => crate::family::StrongDifferenceFamily::new(
                l.group.clone(),
                l.f_blocks.clone(),
                l.k(),
                l.expected_mu(),
            ),
        }
    }
}
