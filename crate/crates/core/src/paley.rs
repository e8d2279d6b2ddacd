//! Paley difference multisets and the ordered lifting schemes built on them.
//!
//! The first type multiset is {0} plus every nonzero square twice, an
//! (F_p, p, p-1)-SDF; the second type (p = 3 mod 4) doubles {0} as well and
//! gives an (F_p, p+1, p+1)-SDF. A scheme fixes a specific ordering of these
//! multisets around powers of delta (a generator of the squares) and pairs it
//! with a symbolic phi-template over symbols y, y_1, y_2, ... and the formal
//! unit xi.

use crate::error::{Error, Result};
use crate::family::StrongDifferenceFamily;
use crate::field::{FieldElem, FiniteField};
use crate::group::{make_field_additive, GroupElem};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PaleyType {
    First,
    Second,
}

/// The Paley difference multiset over F_p as a strong difference family.
pub fn paley_sdf(field: &FiniteField, ty: PaleyType) -> Result<StrongDifferenceFamily> {
    let p = field.q();
    if p % 2 == 0 {
        return Err(Error::CongruenceViolated(format!(
            "Paley multisets need odd order, got {p}"
        )));
    }
    if ty == PaleyType::Second && p % 4 != 3 {
        return Err(Error::CongruenceViolated(format!(
            "second type needs p = 3 (mod 4), got p = {p}"
        )));
    }
    // squares: omega^{2j}, j < (p-1)/2
    let squares: Vec<FieldElem> = (0..(p - 1) / 2).map(|j| field.omega_pow(2 * j)).collect();
    let mut block = Vec::new();
    match ty {
        PaleyType::First => {
            block.push(field.zero());
            for s in &squares {
                block.push(*s);
                block.push(*s);
            }
        }
        PaleyType::Second => {
            block.push(field.zero());
            block.push(field.zero());
            for s in &squares {
                block.push(*s);
                block.push(*s);
            }
        }
    }
    let (k, mu) = match ty {
        PaleyType::First => (p as usize, p - 1),
        PaleyType::Second => (p as usize + 1, p + 1),
    };
    StrongDifferenceFamily::new(
        make_field_additive(field.clone()),
        vec![block.into_iter().map(GroupElem::Field).collect()],
        k,
        mu,
    )
}

/// Which displayed ordering/template a scheme uses. Quarter pairs with
/// e = (q-1)/4 lifts, the half variants with e = (q-1)/2.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SchemeVariant {
    /// First type Paley, p = 1 (mod 4): base (0, d, d, -d, -d, ...), template
    /// (0, y1, -y1, xi*y1, -xi*y1, ...).
    Quarter,
    /// First type Paley, any odd p: base (0, d, d, d^2, d^2, ...), template
    /// (0, y1, -y1, y2, -y2, ...).
    HalfFirst,
    /// Second type Paley, p = 3 (mod 4): base (0, 0, d, d, ...), template
    /// (y, -y, y1, -y1, ...).
    HalfSecond,
}

impl SchemeVariant {
    pub fn name(self) -> &'static str {
        match self {
            SchemeVariant::Quarter => "quarter",
            SchemeVariant::HalfFirst => "half-first",
            SchemeVariant::HalfSecond => "half-second",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "quarter" => Ok(SchemeVariant::Quarter),
            "half-first" => Ok(SchemeVariant::HalfFirst),
            "half-second" => Ok(SchemeVariant::HalfSecond),
            _ => Err(Error::Format(format!("unknown scheme variant `{s}`"))),
        }
    }

    /// Number of formal units: the positional differences factor through
    /// {1,-1,xi,-xi} for the quarter variant and {1,-1} for the half ones.
    pub fn unit_count(self) -> u64 {
        match self {
            SchemeVariant::Quarter => 4,
            _ => 2,
        }
    }

    pub fn uses_xi(self) -> bool {
        self == SchemeVariant::Quarter
    }
}

/// A formal unit coefficient attached to a symbol in the phi-template.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Unit {
    One,
    MinusOne,
    Xi,
    MinusXi,
}

/// One slot of the phi-template: literal zero, or unit * y_sym.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PhiSym {
    Zero,
    Term { unit: Unit, sym: usize },
}

/// The ordered Paley base block together with its phi-template.
#[derive(Clone, Debug)]
pub struct PaleyScheme {
    pub field_p: FiniteField,
    pub variant: SchemeVariant,
    /// The canonical generator of the squares: omega^2.
    pub delta: FieldElem,
    /// Ordered base sequence over F_p, length p or p+1.
    pub base: Vec<FieldElem>,
    /// Template of the same length.
    pub template: Vec<PhiSym>,
    /// Symbol ids in search order: 1..=(p-1)/4 or 1..=(p-1)/2, with the extra
    /// symbol 0 (named y) first for the half-second variant.
    pub symbols: Vec<usize>,
}

/// Display name for a symbol id: 0 is y, i >= 1 is y<i>.
pub fn symbol_name(sym: usize) -> String {
    if sym == 0 {
        "y".into()
    } else {
        format!("y{sym}")
    }
}

pub fn build_scheme(field_p: &FiniteField, variant: SchemeVariant) -> Result<PaleyScheme> {
    let p = field_p.q();
    if p % 2 == 0 {
        return Err(Error::CongruenceViolated(format!(
            "schemes need odd p, got {p}"
        )));
    }
    match variant {
        SchemeVariant::Quarter if p % 4 != 1 => {
            return Err(Error::CongruenceViolated(format!(
                "quarter variant needs p = 1 (mod 4), got p = {p}"
            )));
        }
        SchemeVariant::HalfSecond if p % 4 != 3 => {
            return Err(Error::CongruenceViolated(format!(
                "half-second variant needs p = 3 (mod 4), got p = {p}"
            )));
        }
        _ => {}
    }
    let delta = field_p.mul(field_p.omega(), field_p.omega());
    let mut base = Vec::new();
    let mut template = Vec::new();
    let mut symbols = Vec::new();
    match variant {
        SchemeVariant::Quarter => {
            base.push(field_p.zero());
            template.push(PhiSym::Zero);
            let m = ((p - 1) / 4) as usize;
            let mut dp = field_p.one();
            for i in 1..=m {
                dp = field_p.mul(dp, delta);
                let nd = field_p.neg(dp);
                base.extend([dp, dp, nd, nd]);
                template.extend([
                    PhiSym::Term { unit: Unit::One, sym: i },
                    PhiSym::Term { unit: Unit::MinusOne, sym: i },
                    PhiSym::Term { unit: Unit::Xi, sym: i },
                    PhiSym::Term { unit: Unit::MinusXi, sym: i },
                ]);
                symbols.push(i);
            }
        }
        SchemeVariant::HalfFirst | SchemeVariant::HalfSecond => {
            if variant == SchemeVariant::HalfSecond {
                base.extend([field_p.zero(), field_p.zero()]);
                template.extend([
                    PhiSym::Term { unit: Unit::One, sym: 0 },
                    PhiSym::Term { unit: Unit::MinusOne, sym: 0 },
                ]);
                symbols.push(0);
            } else {
                base.push(field_p.zero());
                template.push(PhiSym::Zero);
            }
            let m = ((p - 1) / 2) as usize;
            let mut dp = field_p.one();
            for i in 1..=m {
                dp = field_p.mul(dp, delta);
                base.extend([dp, dp]);
                template.extend([
                    PhiSym::Term { unit: Unit::One, sym: i },
                    PhiSym::Term { unit: Unit::MinusOne, sym: i },
                ]);
                symbols.push(i);
            }
        }
    }
    Ok(PaleyScheme {
        field_p: field_p.clone(),
        variant,
        delta,
        base,
        template,
        symbols,
    })
}

impl PaleyScheme {
    pub fn p(&self) -> u64 {
        self.field_p.q()
    }

    /// Block size of the lifted family: p, or p+1 for the half-second variant.
    pub fn block_size(&self) -> usize {
        self.base.len()
    }

    pub fn paley_type(&self) -> PaleyType {
        match self.variant {
            SchemeVariant::HalfSecond => PaleyType::Second,
            _ => PaleyType::First,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupElem;

    fn block_values(sdf: &StrongDifferenceFamily) -> Vec<u64> {
        sdf.blocks[0]
            .iter()
            .map(|e| match e {
                GroupElem::Field(x) => x.index(),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn first_type_smallest() {
        let f3 = FiniteField::prime(3).unwrap();
        let sdf = paley_sdf(&f3, PaleyType::First).unwrap();
        assert_eq!(block_values(&sdf), vec![0, 1, 1]);
        assert_eq!((sdf.k, sdf.mu), (3, 2));
        assert!(sdf.verify().unwrap().ok);

        let second = paley_sdf(&f3, PaleyType::Second).unwrap();
        assert_eq!(block_values(&second), vec![0, 0, 1, 1]);
        assert_eq!((second.k, second.mu), (4, 4));
        assert!(second.verify().unwrap().ok);
    }

    #[test]
    fn first_type_p13() {
        let f13 = FiniteField::prime(13).unwrap();
        let sdf = paley_sdf(&f13, PaleyType::First).unwrap();
        assert_eq!(sdf.k, 13);
        assert_eq!(sdf.mu, 12);
        assert!(sdf.verify().unwrap().ok);
        let mut vals = block_values(&sdf);
        vals.sort_unstable();
        // {0} plus each of the six squares twice
        assert_eq!(vals, vec![0, 1, 1, 3, 3, 4, 4, 9, 9, 10, 10, 12, 12]);
    }

    #[test]
    fn rejects_bad_parameters() {
        let f2 = FiniteField::prime(2).unwrap();
        assert!(paley_sdf(&f2, PaleyType::First).is_err());
        let f13 = FiniteField::prime(13).unwrap();
        assert!(paley_sdf(&f13, PaleyType::Second).is_err());
        assert!(build_scheme(&f13, SchemeVariant::HalfSecond).is_err());
        let f7 = FiniteField::prime(7).unwrap();
        assert!(build_scheme(&f7, SchemeVariant::Quarter).is_err());
    }

    #[test]
    fn quarter_scheme_p13_matches_displayed_sequence() {
        let f13 = FiniteField::prime(13).unwrap();
        let s = build_scheme(&f13, SchemeVariant::Quarter).unwrap();
        assert_eq!(s.delta.index(), 4);
        let seq: Vec<u64> = s.base.iter().map(|x| x.index()).collect();
        // (0, 4, 4, -4, -4, 3, 3, -3, -3, -1, -1, 1, 1)
        assert_eq!(seq, vec![0, 4, 4, 9, 9, 3, 3, 10, 10, 12, 12, 1, 1]);
        assert_eq!(s.symbols, vec![1, 2, 3]);
    }

    #[test]
    fn quarter_scheme_p17_matches_displayed_sequence() {
        let f17 = FiniteField::prime(17).unwrap();
        let s = build_scheme(&f17, SchemeVariant::Quarter).unwrap();
        let seq: Vec<u64> = s.base.iter().map(|x| x.index()).collect();
        // (0, -8, -8, 8, 8, -4, -4, 4, 4, -2, -2, 2, 2, -1, -1, 1, 1)
        assert_eq!(
            seq,
            vec![0, 9, 9, 8, 8, 13, 13, 4, 4, 15, 15, 2, 2, 16, 16, 1, 1]
        );
    }

    #[test]
    fn half_second_p3() {
        let f3 = FiniteField::prime(3).unwrap();
        let s = build_scheme(&f3, SchemeVariant::HalfSecond).unwrap();
        let seq: Vec<u64> = s.base.iter().map(|x| x.index()).collect();
        assert_eq!(seq, vec![0, 0, 1, 1]);
        assert_eq!(s.symbols, vec![0, 1]);
    }

    #[test]
    fn scheme_base_is_reordered_paley_block() {
        for (p, f, variant) in [
            (13u64, 1usize, SchemeVariant::Quarter),
            (17, 1, SchemeVariant::Quarter),
            (3, 2, SchemeVariant::Quarter), // GF(9)
            (11, 1, SchemeVariant::HalfFirst),
            (7, 1, SchemeVariant::HalfSecond),
            (3, 3, SchemeVariant::HalfSecond), // GF(27)
        ] {
            let fld = FiniteField::new(p, f, None).unwrap();
            let s = build_scheme(&fld, variant).unwrap();
            let sdf = paley_sdf(&fld, s.paley_type()).unwrap();
            let mut a: Vec<u64> = s.base.iter().map(|x| x.index()).collect();
            let mut b = block_values(&sdf);
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "p={p} variant={variant:?}");
            assert_eq!(s.template.len(), s.base.len());
        }
    }
}
