//! The fundamental lifting construction: an ordered SDF over G paired with
//! companion sequences over F_q becomes a relative difference family over
//! G x F_q relative to G x {0}.
//!
//! For each h in G the positional companion differences form T_h; the lift is
//! valid when every T_h factors as C_0^{e,q} * D_h with D_h a lambda-
//! transversal for the cosets of C_0^{d,q}. Expansion multiplies the
//! assembled blocks by (1, s) over the canonical representative system S for
//! the cosets of C_0^{e,q} in C_0^{d,q}.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::family::RelativeDifferenceFamily;
use crate::field::{FieldElem, FiniteField};
use crate::group::{make_field_additive, make_product, AbelianGroup, GroupElem, Subgroup};
use crate::symbolic::transversal_check;

/// An ordered SDF with companions, ready to lift. Alignment is positional:
/// repeated SDF entries pair with distinct companion values by position.
#[derive(Clone, Debug)]
pub struct LiftInput {
    pub group: AbelianGroup,
    pub field: FiniteField,
    pub e: u64,
    pub d: u64,
    pub lambda: u64,
    /// F_i sequences over `group`.
    pub f_blocks: Vec<Vec<GroupElem>>,
    /// Phi_i sequences over `field`; zeros permitted.
    pub phi_blocks: Vec<Vec<FieldElem>>,
}

impl LiftInput {
    pub fn new(
        group: AbelianGroup,
        field: FiniteField,
        e: u64,
        d: u64,
        lambda: u64,
        f_blocks: Vec<Vec<GroupElem>>,
        phi_blocks: Vec<Vec<FieldElem>>,
    ) -> Result<Self> {
        let q = field.q();
        if e == 0 || (q - 1) % e != 0 {
            return Err(Error::DivisibilityViolated {
                what: "e must divide q - 1",
                a: e,
                b: q - 1,
            });
        }
        if d == 0 || e % d != 0 {
            return Err(Error::DivisibilityViolated {
                what: "d must divide e",
                a: d,
                b: e,
            });
        }
        if f_blocks.len() != phi_blocks.len() || f_blocks.is_empty() {
            return Err(Error::ParamMismatch(format!(
                "{} F blocks vs {} Phi blocks",
                f_blocks.len(),
                phi_blocks.len()
            )));
        }
        let k = f_blocks[0].len();
        for (i, (fb, pb)) in f_blocks.iter().zip(&phi_blocks).enumerate() {
            if fb.len() != k {
                return Err(Error::BlockSizeMismatch {
                    block: i,
                    expected: k,
                    got: fb.len(),
                });
            }
            if pb.len() != k {
                return Err(Error::BlockSizeMismatch {
                    block: i,
                    expected: k,
                    got: pb.len(),
                });
            }
            for e in fb {
                group.validate(e)?;
            }
        }
        Ok(Self {
            group,
            field,
            e,
            d,
            lambda,
            f_blocks,
            phi_blocks,
        })
    }

    pub fn k(&self) -> usize {
        self.f_blocks[0].len()
    }

    /// mu forced by Lemma-style parameter bookkeeping: lambda*d*(q-1)/e.
    pub fn expected_mu(&self) -> u64 {
        self.lambda * self.d * (self.field.q() - 1) / self.e
    }
}

/// T_h and its factorization for every h in G (indexed canonically).
#[derive(Clone, Debug)]
pub struct DhFactorization {
    /// Raw positional companion differences per h.
    pub t_h: BTreeMap<u64, Vec<FieldElem>>,
    /// Orbit representatives with multiplicity: T_h = C_0^{e,q} * D_h.
    pub d_h: BTreeMap<u64, Vec<FieldElem>>,
}

/// Computes every T_h and greedily factors out C_0^{e,q}-orbits (orbits are
/// disjoint or equal, so greedy removal is canonical). Fails if some T_h
/// contains 0 or is not a union of uniformly repeated orbits.
pub fn compute_dh(input: &LiftInput) -> Result<DhFactorization> {
    let g_order = input.group.order();
    let fq = &input.field;
    let mut t_h: BTreeMap<u64, Vec<FieldElem>> = (0..g_order).map(|h| (h, Vec::new())).collect();
    for (fb, pb) in input.f_blocks.iter().zip(&input.phi_blocks) {
        for (a, (fa, pa)) in fb.iter().zip(pb).enumerate() {
            for (b, (fbv, pbv)) in fb.iter().zip(pb).enumerate() {
                if a == b {
                    continue;
                }
                let h = input.group.index_of(&input.group.sub(fa, fbv)?)?;
                t_h.get_mut(&h).unwrap().push(fq.sub(*pa, *pbv));
            }
        }
    }

    let orbit_gens: Vec<FieldElem> = (0..(fq.q() - 1) / input.e)
        .map(|j| fq.omega_pow(input.e * j))
        .collect();
    let mut d_h = BTreeMap::new();
    for (&h, vals) in &t_h {
        let mut tally: BTreeMap<FieldElem, u64> = BTreeMap::new();
        for &v in vals {
            if v.index() == 0 {
                return Err(Error::FactorizationFailed {
                    h: h.to_string(),
                    detail: "zero companion difference".into(),
                });
            }
            *tally.entry(v).or_insert(0) += 1;
        }
        let mut reps = Vec::new();
        while let Some((&x, &mult)) = tally.iter().next() {
            let orbit: Vec<FieldElem> = orbit_gens.iter().map(|&c| fq.mul(x, c)).collect();
            for &y in &orbit {
                match tally.remove(&y) {
                    Some(c) if c == mult => {}
                    other => {
                        return Err(Error::FactorizationFailed {
                            h: h.to_string(),
                            detail: format!(
                                "orbit of {} has multiplicity {:?}, expected {mult}",
                                x.index(),
                                other
                            ),
                        })
                    }
                }
            }
            for _ in 0..mult {
                reps.push(x);
            }
        }
        d_h.insert(h, reps);
    }
    Ok(DhFactorization { t_h, d_h })
}

/// Runs the full construction: factorization, transversal checks, block
/// assembly, and expansion by the representative system S.
pub fn lift(input: &LiftInput) -> Result<RelativeDifferenceFamily> {
    let fq = &input.field;
    let factorization = compute_dh(input)?;
    for (&h, reps) in &factorization.d_h {
        if !transversal_check(reps, fq, input.d, input.lambda)? {
            let mut counts = vec![0u64; input.d as usize];
            for &v in reps {
                if v.index() != 0 {
                    counts[fq.cyclo_index(input.d, v)? as usize] += 1;
                }
            }
            return Err(Error::TransversalFailed {
                h: h.to_string(),
                lambda: input.lambda,
                counts,
            });
        }
    }

    let product = make_product(input.group.clone(), make_field_additive(fq.clone()));
    let s = fq.representative_system(input.e, input.d)?;
    let k = input.k();
    let mut blocks = Vec::with_capacity(input.f_blocks.len() * s.len());
    for (i, (fb, pb)) in input.f_blocks.iter().zip(&input.phi_blocks).enumerate() {
        for &mult in &s {
            let block: Vec<GroupElem> = fb
                .iter()
                .zip(pb)
                .map(|(f, &phi)| GroupElem::pair(f.clone(), GroupElem::Field(fq.mul(phi, mult))))
                .collect();
            let mut sorted = block.clone();
            sorted.sort();
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::RepeatedBlockElement { block: i });
            }
            blocks.push(block);
        }
    }
    RelativeDifferenceFamily::new(product, Subgroup::LeftFactor, blocks, k, input.lambda)
}

/// Concatenates lambda-fold copies: two disjoint listings of the same base
/// blocks with the declared lambda doubled.
pub fn double(df: &RelativeDifferenceFamily) -> RelativeDifferenceFamily {
    let mut blocks = df.blocks.clone();
    blocks.extend(df.blocks.iter().cloned());
    RelativeDifferenceFamily {
        group: df.group.clone(),
        subgroup: df.subgroup.clone(),
        blocks,
        k: df.k,
        lambda: df.lambda * 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_cyclic;

    #[test]
    fn trivial_two_entry_block() {
        // single-block SDF [0,0] with Phi=(0,1): T_0 = {1,-1}
        let g = make_cyclic(1);
        let fq = FiniteField::prime(5).unwrap();
        let input = LiftInput::new(
            g.clone(),
            fq.clone(),
            4,
            1,
            2,
            vec![vec![GroupElem::Int(0), GroupElem::Int(0)]],
            vec![vec![fq.zero(), fq.one()]],
        )
        .unwrap();
        let f = compute_dh(&input).unwrap();
        let mut t0: Vec<u64> = f.t_h[&0].iter().map(|x| x.index()).collect();
        t0.sort_unstable();
        assert_eq!(t0, vec![1, 4]);
    }

    #[test]
    fn zero_difference_fails_factorization() {
        let g = make_cyclic(1);
        let fq = FiniteField::prime(5).unwrap();
        let input = LiftInput::new(
            g,
            fq.clone(),
            4,
            1,
            2,
            vec![vec![GroupElem::Int(0), GroupElem::Int(0)]],
            vec![vec![fq.one(), fq.one()]],
        )
        .unwrap();
        assert!(matches!(
            compute_dh(&input),
            Err(Error::FactorizationFailed { .. })
        ));
    }

    #[test]
    fn doubling_doubles_lambda_and_blocks() {
        let g = make_cyclic(7);
        let df = RelativeDifferenceFamily::new(
            g,
            Subgroup::Trivial,
            vec![vec![GroupElem::Int(0), GroupElem::Int(1), GroupElem::Int(3)]],
            3,
            1,
        )
        .unwrap();
        let d2 = double(&df);
        assert_eq!(d2.lambda, 2);
        assert_eq!(d2.blocks.len(), 2);
        assert!(d2.verify().unwrap().ok);
    }
}
