//! Strong difference families, relative difference families, 2-designs, and
//! the composition of the two latter into each other.
//!
//! Each of the three object tiers carries an independent verifier working
//! from first principles (full difference tally, full pair-coverage scan);
//! nothing is trusted from construction.

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::group::{AbelianGroup, GroupElem, Subgroup};

/// Multiplicity of every group element in a difference list, indexed by
/// canonical element index.
#[derive(Clone, Debug)]
pub struct DifferenceTally {
    pub group: AbelianGroup,
    pub counts: Vec<u64>,
}

impl DifferenceTally {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Tally of all ordered differences between distinct positions of each block.
/// Repeated entries generate differences too, including 0.
pub fn difference_multiset(group: &AbelianGroup, blocks: &[Vec<GroupElem>]) -> Result<DifferenceTally> {
    let mut counts = vec![0u64; group.order() as usize];
    for block in blocks {
        for (i, a) in block.iter().enumerate() {
            for (j, b) in block.iter().enumerate() {
                if i != j {
                    let d = group.sub(a, b)?;
                    counts[group.index_of(&d)? as usize] += 1;
                }
            }
        }
    }
    Ok(DifferenceTally {
        group: group.clone(),
        counts,
    })
}

#[derive(Clone, Debug)]
pub struct TallyViolation {
    pub element: GroupElem,
    pub observed: u64,
    pub expected: u64,
}

/// Multisets of size k over a group whose internal differences cover every
/// element exactly mu times.
#[derive(Clone, Debug)]
pub struct StrongDifferenceFamily {
    pub group: AbelianGroup,
    pub blocks: Vec<Vec<GroupElem>>,
    pub k: usize,
    pub mu: u64,
}

#[derive(Clone, Debug)]
pub struct SdfVerdict {
    pub ok: bool,
    pub mu_observed: u64,
    /// Proposition-level necessary conditions, reported independently.
    pub mu_even: bool,
    pub divisibility: bool,
    pub first_violation: Option<TallyViolation>,
}

impl StrongDifferenceFamily {
    /// Base blocks may repeat entries; every block must have exactly k of them.
    pub fn new(
        group: AbelianGroup,
        blocks: Vec<Vec<GroupElem>>,
        k: usize,
        mu: u64,
    ) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != k {
                return Err(Error::BlockSizeMismatch {
                    block: i,
                    expected: k,
                    got: b.len(),
                });
            }
            for e in b {
                group.validate(e)?;
            }
        }
        Ok(Self {
            group,
            blocks,
            k,
            mu,
        })
    }

    pub fn verify(&self) -> Result<SdfVerdict> {
        let tally = difference_multiset(&self.group, &self.blocks)?;
        let mut first_violation = None;
        for (i, &c) in tally.counts.iter().enumerate() {
            if c != self.mu {
                first_violation = Some(TallyViolation {
                    element: self.group.elem_at(i as u64)?,
                    observed: c,
                    expected: self.mu,
                });
                break;
            }
        }
        let g = self.group.order();
        let k = self.k as u64;
        Ok(SdfVerdict {
            ok: first_violation.is_none(),
            mu_observed: tally.counts[0],
            mu_even: self.mu % 2 == 0,
            divisibility: (self.mu * g) % (k * (k - 1)) == 0,
            first_violation,
        })
    }
}

/// k-subsets of G whose differences cover G minus N exactly lambda times and
/// never land in N.
#[derive(Clone, Debug)]
pub struct RelativeDifferenceFamily {
    pub group: AbelianGroup,
    pub subgroup: Subgroup,
    pub blocks: Vec<Vec<GroupElem>>,
    pub k: usize,
    pub lambda: u64,
}

#[derive(Clone, Debug)]
pub struct DfVerdict {
    pub ok: bool,
    pub first_violation: Option<TallyViolation>,
}

impl RelativeDifferenceFamily {
    /// Blocks are sets: repeated entries are rejected.
    pub fn new(
        group: AbelianGroup,
        subgroup: Subgroup,
        blocks: Vec<Vec<GroupElem>>,
        k: usize,
        lambda: u64,
    ) -> Result<Self> {
        subgroup.order(&group)?;
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != k {
                return Err(Error::BlockSizeMismatch {
                    block: i,
                    expected: k,
                    got: b.len(),
                });
            }
            let mut idx: Vec<u64> = b
                .iter()
                .map(|e| group.index_of(e))
                .collect::<Result<_>>()?;
            idx.sort_unstable();
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedBlockElement { block: i });
            }
        }
        Ok(Self {
            group,
            subgroup,
            blocks,
            k,
            lambda,
        })
    }

    /// Expected number of base blocks, lambda*(|G|-|N|)/(k(k-1)).
    pub fn expected_block_count(&self) -> Result<u64> {
        let g = self.group.order();
        let n = self.subgroup.order(&self.group)?;
        let k = self.k as u64;
        Ok(self.lambda * (g - n) / (k * (k - 1)))
    }

    pub fn verify(&self) -> Result<DfVerdict> {
        let tally = difference_multiset(&self.group, &self.blocks)?;
        let mut first_violation = None;
        for (i, &c) in tally.counts.iter().enumerate() {
            let elem = self.group.elem_at(i as u64)?;
            let expected = if self.subgroup.contains(&self.group, &elem)? {
                0
            } else {
                self.lambda
            };
            if c != expected {
                first_violation = Some(TallyViolation {
                    element: elem,
                    observed: c,
                    expected,
                });
                break;
            }
        }
        Ok(DfVerdict {
            ok: first_violation.is_none(),
            first_violation,
        })
    }
}

/// A 2-(v,k,lambda) design on points 0..v-1.
#[derive(Clone, Debug)]
pub struct Design {
    pub v: u64,
    pub k: usize,
    pub lambda: u64,
    pub blocks: Vec<Vec<u32>>,
}

#[derive(Clone, Debug)]
pub struct PairViolation {
    pub pair: (u32, u32),
    pub observed: u64,
    pub expected: u64,
}

#[derive(Clone, Debug)]
pub struct DesignVerdict {
    pub ok: bool,
    pub first_violation: Option<PairViolation>,
}

impl Design {
    pub fn new(v: u64, k: usize, lambda: u64, blocks: Vec<Vec<u32>>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            if b.len() != k {
                return Err(Error::BlockSizeMismatch {
                    block: i,
                    expected: k,
                    got: b.len(),
                });
            }
            let mut s = b.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedBlockElement { block: i });
            }
            if let Some(&m) = s.last() {
                if m as u64 >= v {
                    return Err(Error::ElementOutOfRange {
                        index: m as u64,
                        order: v,
                    });
                }
            }
        }
        Ok(Self {
            v,
            k,
            lambda,
            blocks,
        })
    }

    pub fn expected_block_count(&self) -> u64 {
        let k = self.k as u64;
        self.lambda * self.v * (self.v - 1) / (k * (k - 1))
    }

    /// Full pair-coverage scan: every unordered point pair must lie in
    /// exactly lambda blocks.
    pub fn verify(&self) -> DesignVerdict {
        let v = self.v as usize;
        let mut counts = vec![0u32; v * v];
        for block in &self.blocks {
            for (i, &a) in block.iter().enumerate() {
                for &b in &block[i + 1..] {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    counts[lo as usize * v + hi as usize] += 1;
                }
            }
        }
        for lo in 0..v {
            for hi in lo + 1..v {
                let c = counts[lo * v + hi] as u64;
                if c != self.lambda {
                    return DesignVerdict {
                        ok: false,
                        first_violation: Some(PairViolation {
                            pair: (lo as u32, hi as u32),
                            observed: c,
                            expected: self.lambda,
                        }),
                    };
                }
            }
        }
        DesignVerdict {
            ok: true,
            first_violation: None,
        }
    }
}

/// All translates B + g of every base block, for g over the whole group in
/// canonical order.
pub fn develop_df(df: &RelativeDifferenceFamily) -> Result<Vec<Vec<GroupElem>>> {
    let mut out = Vec::with_capacity(df.blocks.len() * df.group.order() as usize);
    for block in &df.blocks {
        for g in df.group.enumerate() {
            let translated: Vec<GroupElem> = block
                .iter()
                .map(|e| df.group.add(e, &g))
                .collect::<Result<_>>()?;
            out.push(translated);
        }
    }
    Ok(out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ComposeVariant {
    /// Fill each coset of N with a copy of a 2-(|N|,k,lambda) design.
    FillCosets,
    /// Adjoin a point at infinity and fill each coset plus infinity with a
    /// copy of a 2-(|N|+1,k,lambda) design. Ingredient point |N| maps to
    /// infinity.
    FillCosetsPlusInfinity,
}

impl ComposeVariant {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(ComposeVariant::FillCosets),
            2 => Ok(ComposeVariant::FillCosetsPlusInfinity),
            _ => Err(Error::ParamMismatch(format!("variant must be 1 or 2, got {n}"))),
        }
    }
}

/// Builds a 2-design from a relative difference family and an ingredient
/// design placed on the cosets of N (identified via the canonical coset
/// transversal in enumeration order).
pub fn compose_design(
    df: &RelativeDifferenceFamily,
    ingredient: &Design,
    variant: ComposeVariant,
) -> Result<Design> {
    let g_order = df.group.order();
    let n_order = df.subgroup.order(&df.group)?;
    if ingredient.k != df.k {
        return Err(Error::ParamMismatch(format!(
            "block sizes differ: df k={}, ingredient k={}",
            df.k, ingredient.k
        )));
    }
    if ingredient.lambda != df.lambda {
        return Err(Error::ParamMismatch(format!(
            "lambda differs: df {}, ingredient {}",
            df.lambda, ingredient.lambda
        )));
    }
    let expected_v = match variant {
        ComposeVariant::FillCosets => n_order,
        ComposeVariant::FillCosetsPlusInfinity => n_order + 1,
    };
    if ingredient.v != expected_v {
        return Err(Error::ParamMismatch(format!(
            "ingredient has v={}, expected {expected_v}",
            ingredient.v
        )));
    }

    let v = match variant {
        ComposeVariant::FillCosets => g_order,
        ComposeVariant::FillCosetsPlusInfinity => g_order + 1,
    };
    let infinity = g_order as u32;

    let mut blocks: Vec<Vec<u32>> = Vec::new();
    for block in develop_df(df)? {
        blocks.push(
            block
                .iter()
                .map(|e| df.group.index_of(e).map(|i| i as u32))
                .collect::<Result<_>>()?,
        );
    }

    // canonical coset transversal: first unseen element in enumeration order
    let n_elems = df.subgroup.elements(&df.group)?;
    let mut seen = vec![false; g_order as usize];
    for rep_idx in 0..g_order {
        if seen[rep_idx as usize] {
            continue;
        }
        let rep = df.group.elem_at(rep_idx)?;
        let mut coset = Vec::with_capacity(n_order as usize);
        for n in &n_elems {
            let x = df.group.add(n, &rep)?;
            let xi = df.group.index_of(&x)?;
            seen[xi as usize] = true;
            coset.push(xi as u32);
        }
        for ing_block in &ingredient.blocks {
            let mapped: Vec<u32> = ing_block
                .iter()
                .map(|&pt| {
                    if (pt as u64) < n_order {
                        coset[pt as usize]
                    } else {
                        infinity
                    }
                })
                .collect();
            blocks.push(mapped);
        }
    }

    Design::new(v, df.k, df.lambda, blocks)
}

/// lambda copies of the single block {0..n-1}.
pub fn trivial_design(n: u64, lambda: u64) -> Design {
    let block: Vec<u32> = (0..n as u32).collect();
    Design {
        v: n,
        k: n as usize,
        lambda,
        blocks: vec![block; lambda as usize],
    }
}

/// The affine plane AG(2,q): points F_q^2, blocks the q^2 + q lines; a
/// 2-(q^2, q, 1) design.
pub fn affine_plane(field: &FiniteField) -> Design {
    let q = field.q();
    let pt = |x: u64, y: u64| (x * q + y) as u32;
    let mut blocks = Vec::with_capacity((q * q + q) as usize);
    for m in field.elements() {
        for c in field.elements() {
            let line: Vec<u32> = field
                .elements()
                .map(|x| pt(x.index(), field.add(field.mul(m, x), c).index()))
                .collect();
            blocks.push(line);
        }
    }
    for c in field.elements() {
        let line: Vec<u32> = field.elements().map(|y| pt(c.index(), y.index())).collect();
        blocks.push(line);
    }
    Design {
        v: q * q,
        k: q as usize,
        lambda: 1,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic;

    fn ints(xs: &[u64]) -> Vec<GroupElem> {
        xs.iter().map(|&x| GroupElem::Int(x)).collect()
    }

    #[test]
    fn difference_multiset_with_repeats() {
        let g = make_cyclic(3);
        let t = difference_multiset(&g, &[ints(&[0, 1, 1])]).unwrap();
        assert_eq!(t.counts, vec![2, 2, 2]);
        assert_eq!(t.total(), 6);
        // second-type Paley shape at p=3
        let t = difference_multiset(&g, &[ints(&[0, 0, 1, 1])]).unwrap();
        assert_eq!(t.counts, vec![4, 4, 4]);
    }

    #[test]
    fn sdf_verdict_on_tiny_family() {
        let g = make_cyclic(3);
        let sdf = StrongDifferenceFamily::new(g, vec![ints(&[0, 1, 1])], 3, 2).unwrap();
        let v = sdf.verify().unwrap();
        assert!(v.ok);
        assert_eq!(v.mu_observed, 2);
        assert!(v.mu_even);
        assert!(v.divisibility);
    }

    #[test]
    fn sdf_mutation_detected() {
        // Z_63 family with one entry altered (58 -> 57) must fail
        let g = make_cyclic(63);
        let blocks = vec![
            ints(&[0, 4, 15, 23, 37, 58, 57]),
            ints(&[0, 1, 3, 7, 13, 25, 39]),
            ints(&[0, 1, 3, 11, 18, 34, 47]),
        ];
        let sdf = StrongDifferenceFamily::new(g, blocks, 7, 2).unwrap();
        let v = sdf.verify().unwrap();
        assert!(!v.ok);
        assert!(v.first_violation.is_some());
    }

    #[test]
    fn df_rejects_repeats_and_detects_double_difference() {
        let g = make_cyclic(9);
        assert!(matches!(
            RelativeDifferenceFamily::new(
                g.clone(),
                Subgroup::Trivial,
                vec![ints(&[0, 1, 1])],
                3,
                1
            ),
            Err(Error::RepeatedBlockElement { .. })
        ));
        // {0,1,2} in Z_9: difference 1 occurs twice
        let df =
            RelativeDifferenceFamily::new(g, Subgroup::Trivial, vec![ints(&[0, 1, 2])], 3, 1)
                .unwrap();
        let v = df.verify().unwrap();
        assert!(!v.ok);
        let viol = v.first_violation.unwrap();
        assert_eq!(viol.element, GroupElem::Int(1));
        assert_eq!(viol.observed, 2);
    }

    #[test]
    fn trivial_and_broken_designs() {
        let d = trivial_design(13, 1);
        assert!(d.verify().ok);
        assert_eq!(d.blocks.len(), 1);
        let d = trivial_design(18, 2);
        assert!(d.verify().ok);
        assert_eq!(d.blocks.len(), 2);

        // Fano plane, then drop a block
        let fano: Vec<Vec<u32>> = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        let full = Design::new(7, 3, 1, fano.clone()).unwrap();
        assert!(full.verify().ok);
        let broken = Design::new(7, 3, 1, fano[1..].to_vec()).unwrap();
        let v = broken.verify();
        assert!(!v.ok);
        assert_eq!(v.first_violation.unwrap().pair, (0, 1));
    }

    #[test]
    fn affine_planes_verify() {
        let ag3 = affine_plane(&FiniteField::prime(3).unwrap());
        assert_eq!((ag3.v, ag3.k, ag3.lambda), (9, 3, 1));
        assert_eq!(ag3.blocks.len(), 12);
        assert!(ag3.verify().ok);

        let ag8 = affine_plane(&FiniteField::new(2, 3, None).unwrap());
        assert_eq!((ag8.v, ag8.k), (64, 8));
        assert_eq!(ag8.blocks.len(), 72);
        assert!(ag8.verify().ok);

        let ag9 = affine_plane(&FiniteField::new(3, 2, None).unwrap());
        assert_eq!((ag9.v, ag9.k), (81, 9));
        assert_eq!(ag9.blocks.len(), 90);
        assert!(ag9.verify().ok);
    }

    #[test]
    fn develop_counts() {
        let g = make_cyclic(7);
        let df = RelativeDifferenceFamily::new(
            g,
            Subgroup::Trivial,
            vec![ints(&[0, 1, 3])],
            3,
            1,
        )
        .unwrap();
        assert!(df.verify().unwrap().ok);
        let dev = develop_df(&df).unwrap();
        assert_eq!(dev.len(), 7);
    }

    #[test]
    fn compose_rejects_mismatched_ingredient() {
        let g = make_cyclic(7);
        let df = RelativeDifferenceFamily::new(
            g,
            Subgroup::Trivial,
            vec![ints(&[0, 1, 3])],
            3,
            1,
        )
        .unwrap();
        let bad = trivial_design(5, 1);
        assert!(matches!(
            compose_design(&df, &bad, ComposeVariant::FillCosets),
            Err(Error::ParamMismatch(_))
        ));
    }

    #[test]
    fn fano_from_singer_difference_set() {
        // {0,1,3} is a (7,3,1) difference set; developing and filling the
        // trivial subgroup with the 1-point "design" is just the development
        let g = make_cyclic(7);
        let df = RelativeDifferenceFamily::new(
            g,
            Subgroup::Trivial,
            vec![ints(&[0, 1, 3])],
            3,
            1,
        )
        .unwrap();
        // variant 2 with the trivial 2-(2,...)? Not applicable at k=3; check
        // variant 1 with |N|=1: cannot exist (no 2-(1,3,1) design), so just
        // verify the development covers pairs once.
        let dev = develop_df(&df).unwrap();
        let blocks: Vec<Vec<u32>> = dev
            .iter()
            .map(|b| b.iter().map(|e| df.group.index_of(e).unwrap() as u32).collect())
            .collect();
        let d = Design::new(7, 3, 1, blocks).unwrap();
        assert!(d.verify().ok);
    }
}
