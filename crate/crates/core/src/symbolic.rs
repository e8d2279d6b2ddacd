//! Symbolic D_h tables: the positional differences of a Paley scheme's
//! (base, template) pair, factored through the formal unit group and brought
//! to a fixed normal form.
//!
//! For each difference h the template differences form a multiset
//! T_h = {units} * D_h; the normal form of a D_h entry puts coefficient 1 on
//! the higher-indexed symbol, so every entry is one of
//!
//!   y_i - y_j, y_i + y_j, y_i - xi*y_j, y_i + xi*y_j (i > j),
//!   y_i*(1-xi), y_i, 2*y_i,
//!
//! with the half-second variant's extra symbol y written as index 0. Tables
//! are keyed on one representative per {h, -h} pair (plus 0); the factor-and-
//! normalize step asserts D_h = D_{-h} and that T_h splits into full unit
//! orbits, so a scheme bug surfaces as an error rather than a wrong table.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};
use crate::paley::{symbol_name, PaleyScheme, PhiSym, SchemeVariant, Unit};

/// Coefficient in Z[xi]/(xi^2+1); units are {1,-1,xi,-xi}.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Gauss {
    re: i8,
    im: i8,
}

impl Gauss {
    const ZERO: Gauss = Gauss { re: 0, im: 0 };
    const ONE: Gauss = Gauss { re: 1, im: 0 };

    fn mul(self, other: Gauss) -> Gauss {
        Gauss {
            re: self.re * other.re - self.im * other.im,
            im: self.re * other.im + self.im * other.re,
        }
    }
    fn add(self, other: Gauss) -> Gauss {
        Gauss {
            re: self.re + other.re,
            im: self.im + other.im,
        }
    }
    fn sub(self, other: Gauss) -> Gauss {
        Gauss {
            re: self.re - other.re,
            im: self.im - other.im,
        }
    }
    fn is_unit(self) -> bool {
        (self.re.abs() == 1 && self.im == 0) || (self.re == 0 && self.im.abs() == 1)
    }
    /// Inverse of a unit.
    fn unit_inv(self) -> Gauss {
        Gauss {
            re: self.re,
            im: -self.im,
        }
    }
}

fn unit_coeff(u: Unit) -> Gauss {
    match u {
        Unit::One => Gauss { re: 1, im: 0 },
        Unit::MinusOne => Gauss { re: -1, im: 0 },
        Unit::Xi => Gauss { re: 0, im: 1 },
        Unit::MinusXi => Gauss { re: 0, im: -1 },
    }
}

fn units_of(variant: SchemeVariant) -> &'static [Gauss] {
    const FOUR: [Gauss; 4] = [
        Gauss { re: 1, im: 0 },
        Gauss { re: -1, im: 0 },
        Gauss { re: 0, im: 1 },
        Gauss { re: 0, im: -1 },
    ];
    if variant.uses_xi() {
        &FOUR
    } else {
        &FOUR[..2]
    }
}

/// A formal difference of two template slots: at most two symbol terms.
/// Terms are kept sorted by symbol id.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
struct Expr {
    terms: Vec<(usize, Gauss)>,
}

impl Expr {
    fn from_slots(a: PhiSym, b: PhiSym) -> Expr {
        let mut terms: BTreeMap<usize, Gauss> = BTreeMap::new();
        if let PhiSym::Term { unit, sym } = a {
            let c = terms.entry(sym).or_insert(Gauss::ZERO);
            *c = c.add(unit_coeff(unit));
        }
        if let PhiSym::Term { unit, sym } = b {
            let c = terms.entry(sym).or_insert(Gauss::ZERO);
            *c = c.sub(unit_coeff(unit));
        }
        Expr {
            terms: terms.into_iter().filter(|(_, c)| *c != Gauss::ZERO).collect(),
        }
    }

    fn scale(&self, u: Gauss) -> Expr {
        Expr {
            terms: self.terms.iter().map(|&(s, c)| (s, c.mul(u))).collect(),
        }
    }
}

/// A normalized D_h entry.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SymbolicDiff {
    /// y_hi - y_lo
    Diff { hi: usize, lo: usize },
    /// y_hi + y_lo
    Sum { hi: usize, lo: usize },
    /// y_hi - xi*y_lo
    DiffXi { hi: usize, lo: usize },
    /// y_hi + xi*y_lo
    SumXi { hi: usize, lo: usize },
    /// y_sym * (1 - xi)
    OneMinusXi { sym: usize },
    /// y_sym
    Single { sym: usize },
    /// 2*y_sym (only in D_0)
    Twice { sym: usize },
}

impl SymbolicDiff {
    /// The symbol decided last in search order.
    pub fn max_symbol(self) -> usize {
        match self {
            SymbolicDiff::Diff { hi, .. }
            | SymbolicDiff::Sum { hi, .. }
            | SymbolicDiff::DiffXi { hi, .. }
            | SymbolicDiff::SumXi { hi, .. } => hi,
            SymbolicDiff::OneMinusXi { sym }
            | SymbolicDiff::Single { sym }
            | SymbolicDiff::Twice { sym } => sym,
        }
    }

    pub fn is_two_term(self) -> bool {
        matches!(
            self,
            SymbolicDiff::Diff { .. }
                | SymbolicDiff::Sum { .. }
                | SymbolicDiff::DiffXi { .. }
                | SymbolicDiff::SumXi { .. }
        )
    }

    pub fn render(self) -> String {
        match self {
            SymbolicDiff::Diff { hi, lo } => format!("{}-{}", symbol_name(hi), symbol_name(lo)),
            SymbolicDiff::Sum { hi, lo } => format!("{}+{}", symbol_name(hi), symbol_name(lo)),
            SymbolicDiff::DiffXi { hi, lo } => {
                format!("{}-xi*{}", symbol_name(hi), symbol_name(lo))
            }
            SymbolicDiff::SumXi { hi, lo } => {
                format!("{}+xi*{}", symbol_name(hi), symbol_name(lo))
            }
            SymbolicDiff::OneMinusXi { sym } => format!("{}*(1-xi)", symbol_name(sym)),
            SymbolicDiff::Single { sym } => symbol_name(sym),
            SymbolicDiff::Twice { sym } => format!("2*{}", symbol_name(sym)),
        }
    }
}

/// D_h for one representative h per {h,-h} pair, plus h = 0.
#[derive(Clone, Debug)]
pub struct SymbolicDhTable {
    pub p: u64,
    pub variant: SchemeVariant,
    /// Key: canonical index of h (the smaller of index(h), index(-h)).
    pub entries: BTreeMap<u64, Vec<SymbolicDiff>>,
}

fn normalize(expr: &Expr, units: &[Gauss]) -> Result<SymbolicDiff> {
    let bad = || Error::InconsistentScheme(format!("unreducible difference {expr:?}"));
    match expr.terms.as_slice() {
        [(sym, c)] => {
            for &u in units {
                let cu = c.mul(u);
                if cu == Gauss::ONE {
                    return Ok(SymbolicDiff::Single { sym: *sym });
                }
                if cu == (Gauss { re: 2, im: 0 }) {
                    return Ok(SymbolicDiff::Twice { sym: *sym });
                }
                if cu == (Gauss { re: 1, im: -1 }) {
                    return Ok(SymbolicDiff::OneMinusXi { sym: *sym });
                }
            }
            Err(bad())
        }
        [(lo, cl), (hi, ch)] => {
            if !ch.is_unit() || !cl.is_unit() {
                return Err(bad());
            }
            let inv = ch.unit_inv();
            if !units.contains(&inv) {
                return Err(bad());
            }
            let r = cl.mul(inv);
            match (r.re, r.im) {
                (-1, 0) => Ok(SymbolicDiff::Diff { hi: *hi, lo: *lo }),
                (1, 0) => Ok(SymbolicDiff::Sum { hi: *hi, lo: *lo }),
                (0, -1) => Ok(SymbolicDiff::DiffXi { hi: *hi, lo: *lo }),
                (0, 1) => Ok(SymbolicDiff::SumXi { hi: *hi, lo: *lo }),
                _ => Err(bad()),
            }
        }
        _ => Err(bad()),
    }
}

fn denormalize(nf: SymbolicDiff) -> Expr {
    let g = |re, im| Gauss { re, im };
    let terms = match nf {
        SymbolicDiff::Diff { hi, lo } => vec![(lo, g(-1, 0)), (hi, g(1, 0))],
        SymbolicDiff::Sum { hi, lo } => vec![(lo, g(1, 0)), (hi, g(1, 0))],
        SymbolicDiff::DiffXi { hi, lo } => vec![(lo, g(0, -1)), (hi, g(1, 0))],
        SymbolicDiff::SumXi { hi, lo } => vec![(lo, g(0, 1)), (hi, g(1, 0))],
        SymbolicDiff::OneMinusXi { sym } => vec![(sym, g(1, -1))],
        SymbolicDiff::Single { sym } => vec![(sym, g(1, 0))],
        SymbolicDiff::Twice { sym } => vec![(sym, g(2, 0))],
    };
    Expr { terms }
}

/// Derives the full symbolic table of a scheme, checking that every T_h is a
/// disjoint union of complete unit orbits and that D_h = D_{-h}.
pub fn symbolic_dh(scheme: &PaleyScheme) -> Result<SymbolicDhTable> {
    let fp = &scheme.field_p;
    let p = fp.q();
    let units = units_of(scheme.variant);
    let n = scheme.base.len();

    // raw T_h per h index
    let mut raw: BTreeMap<u64, Vec<Expr>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let h = fp.sub(scheme.base[a], scheme.base[b]);
            raw.entry(h.index())
                .or_default()
                .push(Expr::from_slots(scheme.template[a], scheme.template[b]));
        }
    }
    if raw.len() != p as usize {
        return Err(Error::InconsistentScheme(format!(
            "base sequence differences miss {} of {p} values",
            p as usize - raw.len()
        )));
    }

    let mut per_h: BTreeMap<u64, Vec<SymbolicDiff>> = BTreeMap::new();
    for (h, exprs) in raw {
        let mut tally: BTreeMap<Expr, u64> = BTreeMap::new();
        for e in exprs {
            *tally.entry(e).or_insert(0) += 1;
        }
        let mut d_h = Vec::new();
        while let Some((expr, _)) = tally.iter().next() {
            let expr = expr.clone();
            let nf = normalize(&expr, units)?;
            let canonical = denormalize(nf);
            // the orbit of the normal form must be fully present, uniformly
            let mult = *tally.get(&canonical.scale(units[0])).ok_or_else(|| {
                Error::InconsistentScheme(format!(
                    "orbit of {} missing its normal form at h={h}",
                    nf.render()
                ))
            })?;
            for &u in units {
                let member = canonical.scale(u);
                match tally.remove(&member) {
                    Some(c) if c == mult => {}
                    _ => {
                        return Err(Error::InconsistentScheme(format!(
                            "T_{h} is not a union of complete unit orbits at {}",
                            nf.render()
                        )))
                    }
                }
            }
            for _ in 0..mult {
                d_h.push(nf);
            }
        }
        d_h.sort_unstable();
        per_h.insert(h, d_h);
    }

    // fold h and -h together, asserting equality
    let mut entries: BTreeMap<u64, Vec<SymbolicDiff>> = BTreeMap::new();
    for (h, d_h) in &per_h {
        let neg = fp.neg(fp.elem(*h)?).index();
        let key = (*h).min(neg);
        match entries.get(&key) {
            None => {
                entries.insert(key, d_h.clone());
            }
            Some(existing) => {
                if existing != d_h {
                    return Err(Error::InconsistentScheme(format!(
                        "D_h != D_-h at h = {h}"
                    )));
                }
            }
        }
    }

    Ok(SymbolicDhTable {
        p,
        variant: scheme.variant,
        entries,
    })
}

impl SymbolicDhTable {
    /// |D_h| for h != 0, which also equals |D_0|: lambda*d per the scheme.
    pub fn entry_size(&self) -> usize {
        self.entries[&0].len()
    }

    /// All symbol ids appearing in the table.
    pub fn symbols(&self) -> Vec<usize> {
        let mut syms: Vec<usize> = self.entries[&0]
            .iter()
            .map(|e| e.max_symbol())
            .collect();
        syms.sort_unstable();
        syms.dedup();
        syms
    }
}

/// Evaluates one entry under an assignment (indexed by symbol id) in F_q.
pub fn evaluate_entry(
    entry: SymbolicDiff,
    assign: &BTreeMap<usize, FieldElem>,
    fq: &FiniteField,
    xi: FieldElem,
) -> FieldElem {
    let v = |s: usize| assign[&s];
    match entry {
        SymbolicDiff::Diff { hi, lo } => fq.sub(v(hi), v(lo)),
        SymbolicDiff::Sum { hi, lo } => fq.add(v(hi), v(lo)),
        SymbolicDiff::DiffXi { hi, lo } => fq.sub(v(hi), fq.mul(xi, v(lo))),
        SymbolicDiff::SumXi { hi, lo } => fq.add(v(hi), fq.mul(xi, v(lo))),
        SymbolicDiff::OneMinusXi { sym } => fq.mul(v(sym), fq.sub(fq.one(), xi)),
        SymbolicDiff::Single { sym } => v(sym),
        SymbolicDiff::Twice { sym } => fq.add(v(sym), v(sym)),
    }
}

/// Evaluates every D_h numerically. Errors on a zero assignment, on a
/// missing symbol, or when some entry evaluates to zero (a degenerate
/// choice that can never be part of a transversal).
pub fn evaluate_dh(
    table: &SymbolicDhTable,
    assign: &BTreeMap<usize, FieldElem>,
    fq: &FiniteField,
    xi: FieldElem,
) -> Result<BTreeMap<u64, Vec<FieldElem>>> {
    if table.variant.uses_xi() && fq.mul(xi, xi) != fq.neg(fq.one()) {
        return Err(Error::CongruenceViolated(
            "xi must square to -1 for the quarter variant".into(),
        ));
    }
    for sym in table.symbols() {
        match assign.get(&sym) {
            None => {
                return Err(Error::Format(format!(
                    "assignment misses symbol {}",
                    symbol_name(sym)
                )))
            }
            Some(v) if v.index() == 0 => return Err(Error::ZeroElement),
            _ => {}
        }
    }
    let mut out = BTreeMap::new();
    for (&h, d_h) in &table.entries {
        let mut vals = Vec::with_capacity(d_h.len());
        for &e in d_h {
            let v = evaluate_entry(e, assign, fq, xi);
            if v.index() == 0 {
                return Err(Error::EvaluatesToZero(e.render()));
            }
            vals.push(v);
        }
        out.insert(h, vals);
    }
    Ok(out)
}

/// True iff every cyclotomic class C_l^{d,q} contains exactly lambda of the
/// given values. A zero value or a size other than d*lambda simply fails.
pub fn transversal_check(
    values: &[FieldElem],
    fq: &FiniteField,
    d: u64,
    lambda: u64,
) -> Result<bool> {
    if (fq.q() - 1) % d != 0 {
        return Err(Error::DivisibilityViolated {
            what: "d must divide q - 1",
            a: d,
            b: fq.q() - 1,
        });
    }
    if values.len() as u64 != d * lambda {
        return Ok(false);
    }
    let mut counts = vec![0u64; d as usize];
    for &v in values {
        if v.index() == 0 {
            return Ok(false);
        }
        counts[fq.cyclo_index(d, v)? as usize] += 1;
    }
    Ok(counts.iter().all(|&c| c == lambda))
}
