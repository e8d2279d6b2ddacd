//! Finite abelian groups: Z_n, additive groups of finite fields, and direct
//! products, with a canonical element encoding and enumeration order.
//!
//! The canonical index of an element is its position in enumeration order:
//! the integer itself for Z_n, the field element index for (F_q, +), and
//! `left_index * |right| + right_index` for products (left-major).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AbelianGroup {
    Cyclic(u64),
    FieldAdditive(FiniteField),
    Product(Box<AbelianGroup>, Box<AbelianGroup>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElem {
    Int(u64),
    Field(FieldElem),
    Pair(Box<GroupElem>, Box<GroupElem>),
}

impl GroupElem {
    pub fn pair(left: GroupElem, right: GroupElem) -> GroupElem {
        GroupElem::Pair(Box::new(left), Box::new(right))
    }
}

pub fn make_cyclic(n: u64) -> AbelianGroup {
    AbelianGroup::Cyclic(n.max(1))
}

pub fn make_field_additive(field: FiniteField) -> AbelianGroup {
    AbelianGroup::FieldAdditive(field)
}

pub fn make_product(left: AbelianGroup, right: AbelianGroup) -> AbelianGroup {
    AbelianGroup::Product(Box::new(left), Box::new(right))
}

impl AbelianGroup {
    pub fn order(&self) -> u64 {
        match self {
            AbelianGroup::Cyclic(n) => *n,
            AbelianGroup::FieldAdditive(f) => f.q(),
            AbelianGroup::Product(l, r) => l.order() * r.order(),
        }
    }

    pub fn zero(&self) -> GroupElem {
        match self {
            AbelianGroup::Cyclic(_) => GroupElem::Int(0),
            AbelianGroup::FieldAdditive(f) => GroupElem::Field(f.zero()),
            AbelianGroup::Product(l, r) => GroupElem::pair(l.zero(), r.zero()),
        }
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        match (self, a, b) {
            (AbelianGroup::Cyclic(n), GroupElem::Int(x), GroupElem::Int(y)) => {
                self.check_int(*x)?;
                self.check_int(*y)?;
                Ok(GroupElem::Int((x + y) % n))
            }
            (AbelianGroup::FieldAdditive(f), GroupElem::Field(x), GroupElem::Field(y)) => {
                Ok(GroupElem::Field(f.add(*x, *y)))
            }
            (AbelianGroup::Product(l, r), GroupElem::Pair(a1, a2), GroupElem::Pair(b1, b2)) => Ok(
                GroupElem::pair(l.add(a1, b1)?, r.add(a2, b2)?),
            ),
            _ => Err(self.mismatch()),
        }
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        match (self, a) {
            (AbelianGroup::Cyclic(n), GroupElem::Int(x)) => {
                self.check_int(*x)?;
                Ok(GroupElem::Int((n - x) % n))
            }
            (AbelianGroup::FieldAdditive(f), GroupElem::Field(x)) => {
                Ok(GroupElem::Field(f.neg(*x)))
            }
            (AbelianGroup::Product(l, r), GroupElem::Pair(a1, a2)) => {
                Ok(GroupElem::pair(l.neg(a1)?, r.neg(a2)?))
            }
            _ => Err(self.mismatch()),
        }
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    /// Canonical index of an element, in 0..order().
    pub fn index_of(&self, a: &GroupElem) -> Result<u64> {
        match (self, a) {
            (AbelianGroup::Cyclic(_), GroupElem::Int(x)) => {
                self.check_int(*x)?;
                Ok(*x)
            }
            (AbelianGroup::FieldAdditive(_), GroupElem::Field(x)) => Ok(x.index()),
            (AbelianGroup::Product(l, r), GroupElem::Pair(a1, a2)) => {
                Ok(l.index_of(a1)? * r.order() + r.index_of(a2)?)
            }
            _ => Err(self.mismatch()),
        }
    }

    pub fn elem_at(&self, index: u64) -> Result<GroupElem> {
        if index >= self.order() {
            return Err(Error::ElementOutOfRange {
                index,
                order: self.order(),
            });
        }
        Ok(match self {
            AbelianGroup::Cyclic(_) => GroupElem::Int(index),
            AbelianGroup::FieldAdditive(f) => GroupElem::Field(f.elem(index)?),
            AbelianGroup::Product(l, r) => {
                let ro = r.order();
                GroupElem::pair(l.elem_at(index / ro)?, r.elem_at(index % ro)?)
            }
        })
    }

    /// Every element exactly once, in canonical order.
    pub fn enumerate(&self) -> impl Iterator<Item = GroupElem> + '_ {
        (0..self.order()).map(move |i| self.elem_at(i).expect("index in range"))
    }

    /// Checks that an element belongs to this group's encoding.
    pub fn validate(&self, a: &GroupElem) -> Result<()> {
        self.index_of(a).map(|_| ())
    }

    fn check_int(&self, x: u64) -> Result<()> {
        let n = self.order();
        if x < n {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange { index: x, order: n })
        }
    }

    fn mismatch(&self) -> Error {
        Error::EncodingMismatch {
            expected: match self {
                AbelianGroup::Cyclic(_) => "integer element of a cyclic group",
                AbelianGroup::FieldAdditive(_) => "field element",
                AbelianGroup::Product(_, _) => "pair element of a product group",
            },
        }
    }
}

/// Subgroup descriptor with membership testing; avoids materializing large
/// subgroups as element lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// {0}
    Trivial,
    /// The whole group.
    Whole,
    /// G1 x {0} inside a product.
    LeftFactor,
    /// {0} x G2 inside a product.
    RightFactor,
    /// Explicit small subgroup given by canonical indices.
    Elements(BTreeSet<u64>),
}

impl Subgroup {
    pub fn order(&self, group: &AbelianGroup) -> Result<u64> {
        Ok(match self {
            Subgroup::Trivial => 1,
            Subgroup::Whole => group.order(),
            Subgroup::LeftFactor => self.factor(group)?.0.order(),
            Subgroup::RightFactor => self.factor(group)?.1.order(),
            Subgroup::Elements(set) => set.len() as u64,
        })
    }

    pub fn contains(&self, group: &AbelianGroup, a: &GroupElem) -> Result<bool> {
        Ok(match self {
            Subgroup::Trivial => *a == group.zero(),
            Subgroup::Whole => {
                group.validate(a)?;
                true
            }
            Subgroup::LeftFactor => match (self.factor(group)?, a) {
                ((_, r), GroupElem::Pair(_, a2)) => **a2 == r.zero(),
                _ => return Err(group.mismatch()),
            },
            Subgroup::RightFactor => match (self.factor(group)?, a) {
                ((l, _), GroupElem::Pair(a1, _)) => **a1 == l.zero(),
                _ => return Err(group.mismatch()),
            },
            Subgroup::Elements(set) => set.contains(&group.index_of(a)?),
        })
    }

    /// The subgroup's elements in canonical order.
    pub fn elements(&self, group: &AbelianGroup) -> Result<Vec<GroupElem>> {
        Ok(match self {
            Subgroup::Trivial => vec![group.zero()],
            Subgroup::Whole => group.enumerate().collect(),
            Subgroup::LeftFactor => {
                let (l, r) = self.factor(group)?;
                l.enumerate()
                    .map(|x| GroupElem::pair(x, r.zero()))
                    .collect()
            }
            Subgroup::RightFactor => {
                let (l, r) = self.factor(group)?;
                r.enumerate()
                    .map(|x| GroupElem::pair(l.zero(), x))
                    .collect()
            }
            Subgroup::Elements(set) => {
                let elems: Vec<GroupElem> = set
                    .iter()
                    .map(|&i| group.elem_at(i))
                    .collect::<Result<_>>()?;
                // closure check keeps malformed file input from slipping through
                let zero = group.zero();
                if !elems.contains(&zero) {
                    return Err(Error::BadSubgroup("element set misses 0".into()));
                }
                for a in &elems {
                    for b in &elems {
                        let s = group.sub(a, b)?;
                        if !set.contains(&group.index_of(&s)?) {
                            return Err(Error::BadSubgroup(
                                "element set is not closed under subtraction".into(),
                            ));
                        }
                    }
                }
                elems
            }
        })
    }

    fn factor<'g>(&self, group: &'g AbelianGroup) -> Result<(&'g AbelianGroup, &'g AbelianGroup)> {
        match group {
            AbelianGroup::Product(l, r) => Ok((l, r)),
            _ => Err(Error::BadSubgroup(
                "factor subgroup requires a product group".into(),
            )),
        }
    }
}
