//! Property suites: group axioms, tally identities, the evaluation
//! equivalence oracle, development coverage, factorization consistency,
//! normalization soundness, and the greedy strategy.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use common::{assert_witness_sound, lifted_catalog_df, naive_search, quarter_problem};
use diff_forge::paley::{PhiSym, Unit};
use diff_forge::{
    build_scheme, catalog_entry, develop_df, difference_multiset, make_cyclic,
    make_field_additive, make_product, AbelianGroup, FiniteField, GroupElem, LiftInput,
    SchemeVariant, SearchProblem, SearchStatus,
};

fn group_pool() -> Vec<AbelianGroup> {
    let f9 = FiniteField::new(3, 2, None).unwrap();
    let f11 = FiniteField::prime(11).unwrap();
    vec![
        make_cyclic(1),
        make_cyclic(12),
        make_cyclic(63),
        make_field_additive(f9.clone()),
        make_product(make_cyclic(5), make_field_additive(f11)),
        make_product(make_field_additive(f9), make_cyclic(4)),
    ]
}

proptest! {
    #[test]
    fn group_axioms(gi in 0usize..6, xs in prop::array::uniform3(0u64..1000)) {
        let g = group_pool().swap_remove(gi);
        let n = g.order();
        let a = g.elem_at(xs[0] % n).unwrap();
        let b = g.elem_at(xs[1] % n).unwrap();
        let c = g.elem_at(xs[2] % n).unwrap();
        // commutativity, associativity, identity, inverses
        prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
        let ab_c = g.add(&g.add(&a, &b).unwrap(), &c).unwrap();
        let a_bc = g.add(&a, &g.add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert_eq!(g.add(&a, &g.zero()).unwrap(), a.clone());
        let na = g.neg(&a).unwrap();
        prop_assert_eq!(g.add(&a, &na).unwrap(), g.zero());
        // canonical index round trip
        prop_assert_eq!(g.elem_at(g.index_of(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn tally_total_is_sum_of_k_times_k_minus_1(
        sizes in prop::collection::vec(1usize..6, 1..4),
        seed in any::<u64>(),
    ) {
        let g = make_cyclic(30);
        let mut state = seed;
        let mut blocks = Vec::new();
        for k in &sizes {
            let mut b = Vec::new();
            for _ in 0..*k {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                b.push(GroupElem::Int((state >> 33) % 30));
            }
            blocks.push(b);
        }
        let tally = difference_multiset(&g, &blocks).unwrap();
        let expected: u64 = sizes.iter().map(|&k| (k * (k - 1)) as u64).sum();
        prop_assert_eq!(tally.total(), expected);
    }

    #[test]
    fn field_serialization_round_trip(p_i in 0usize..4, x in any::<u64>()) {
        let fields = [
            FiniteField::prime(13).unwrap(),
            FiniteField::prime(101).unwrap(),
            FiniteField::new(5, 2, Some(vec![3, 2, 1])).unwrap(),
            FiniteField::new(3, 4, None).unwrap(),
        ];
        let f = &fields[p_i];
        let e = f.elem(x % f.q()).unwrap();
        let json = diff_forge::formats::field_elem_to_json(f, e);
        prop_assert_eq!(diff_forge::formats::field_elem_from_json(f, &json).unwrap(), e);
    }
}

/// {units} * (evaluated D_h) must reproduce the raw positional difference
/// multiset T_h of the assembled lifted block, for random assignments.
#[test]
fn evaluation_matches_positional_differences() {
    let mut state = 0x5EEDu64;
    let mut next = move |m: u64| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) % m
    };
    for (p, q, variant) in [
        (13u64, 61u64, SchemeVariant::Quarter),
        (17, 17, SchemeVariant::Quarter),
        (11, 23, SchemeVariant::HalfFirst),
        (7, 17, SchemeVariant::HalfSecond),
    ] {
        let fp = FiniteField::prime(p).unwrap();
        let fq = FiniteField::prime(q).unwrap();
        let scheme = build_scheme(&fp, variant).unwrap();
        let table = diff_forge::symbolic_dh(&scheme).unwrap();
        let xi = if variant.uses_xi() {
            fq.primitive_fourth_root().unwrap()
        } else {
            fq.zero()
        };
        let units: Vec<_> = match variant {
            SchemeVariant::Quarter => vec![
                fq.one(),
                fq.neg(fq.one()),
                xi,
                fq.neg(xi),
            ],
            _ => vec![fq.one(), fq.neg(fq.one())],
        };

        'tries: for _ in 0..20 {
            let assign: BTreeMap<usize, diff_forge::FieldElem> = scheme
                .symbols
                .iter()
                .map(|&s| (s, fq.elem(1 + next(q - 1)).unwrap()))
                .collect();
            let evaluated = match diff_forge::evaluate_dh(&table, &assign, &fq, xi) {
                Ok(e) => e,
                Err(_) => continue 'tries, // degenerate random pick
            };
            // instantiate the template by hand, independently of assemble_lift_input
            let phi: Vec<diff_forge::FieldElem> = scheme
                .template
                .iter()
                .map(|slot| match slot {
                    PhiSym::Zero => fq.zero(),
                    PhiSym::Term { unit, sym } => {
                        let v = assign[sym];
                        match unit {
                            Unit::One => v,
                            Unit::MinusOne => fq.neg(v),
                            Unit::Xi => fq.mul(xi, v),
                            Unit::MinusXi => fq.neg(fq.mul(xi, v)),
                        }
                    }
                })
                .collect();
            let f_block: Vec<GroupElem> =
                scheme.base.iter().map(|&x| GroupElem::Field(x)).collect();
            let input = LiftInput::new(
                make_field_additive(fp.clone()),
                fq.clone(),
                (q - 1) / variant.unit_count(),
                1,
                1,
                vec![f_block],
                vec![phi],
            )
            .unwrap();
            let fact = diff_forge::compute_dh(&input).unwrap();
            for (h_idx, t_h) in &fact.t_h {
                let neg = fp.neg(fp.elem(*h_idx).unwrap()).index();
                let key = (*h_idx).min(neg);
                let mut expanded: Vec<u64> = evaluated[&key]
                    .iter()
                    .flat_map(|&v| units.iter().map(move |&u| (v, u)))
                    .map(|(v, u)| fq.mul(v, u).index())
                    .collect();
                expanded.sort_unstable();
                let mut raw: Vec<u64> = t_h.iter().map(|x| x.index()).collect();
                raw.sort_unstable();
                assert_eq!(expanded, raw, "p={p} q={q} h={h_idx}");
            }
        }
    }
}

/// Developed catalog DF: cross-coset pairs covered exactly lambda times,
/// same-coset pairs never.
#[test]
fn development_pair_coverage() {
    for tag in ["lemma-2.3", "lemma-2.11"] {
        let df = lifted_catalog_df(tag);
        let g = df.group.clone();
        let order = g.order() as usize;
        let dev = develop_df(&df).unwrap();
        assert_eq!(dev.len(), df.blocks.len() * order);
        let mut counts = vec![0u32; order * order];
        for block in &dev {
            let idx: Vec<usize> = block
                .iter()
                .map(|e| g.index_of(e).unwrap() as usize)
                .collect();
            for (i, &a) in idx.iter().enumerate() {
                for &b in &idx[i + 1..] {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    counts[lo * order + hi] += 1;
                }
            }
        }
        for lo in 0..order {
            let a = g.elem_at(lo as u64).unwrap();
            for hi in lo + 1..order {
                let b = g.elem_at(hi as u64).unwrap();
                let diff = g.sub(&a, &b).unwrap();
                let expected = if df.subgroup.contains(&g, &diff).unwrap() {
                    0
                } else {
                    df.lambda as u32
                };
                assert_eq!(
                    counts[lo * order + hi],
                    expected,
                    "{tag}: pair ({lo},{hi})"
                );
            }
        }
    }
}

/// Union over s in S of T_h * s equals the G x F_q difference tally
/// restricted to the coset {h} x F_q^*.
#[test]
fn factorization_consistency() {
    for tag in ["lemma-2.3", "lemma-2.16-p63"] {
        let entry = catalog_entry(tag).unwrap();
        let input = entry.as_lift().unwrap();
        let fq = &input.field;
        let fact = diff_forge::compute_dh(input).unwrap();
        let s = fq.representative_system(input.e, input.d).unwrap();
        let df = diff_forge::lift(input).unwrap();
        let tally = difference_multiset(&df.group, &df.blocks).unwrap();
        let q = fq.q();
        for (h, t_h) in &fact.t_h {
            let mut scaled: Vec<u64> = t_h
                .iter()
                .flat_map(|&v| s.iter().map(move |&m| (v, m)))
                .map(|(v, m)| fq.mul(v, m).index())
                .collect();
            scaled.sort_unstable();
            let mut from_tally = Vec::new();
            for x in 1..q {
                let idx = (h * q + x) as usize;
                for _ in 0..tally.counts[idx] {
                    from_tally.push(x);
                }
            }
            assert_eq!(scaled, from_tally, "{tag} at h={h}");
        }
    }
}

/// Restricting the first symbol to class representatives never converts a
/// found instance to exhausted.
#[test]
fn normalization_soundness_up_to_200() {
    for q in [13u64, 37, 61, 73, 97, 109, 157, 181, 193] {
        let unnormalized = quarter_problem(13, q, 3, 1).with_normalize(false);
        let normalized = quarter_problem(13, q, 3, 1).with_normalize(true);
        let full = diff_forge::search(&unnormalized, u64::MAX).unwrap();
        let norm = diff_forge::search(&normalized, u64::MAX).unwrap();
        assert_eq!(full.status, norm.status, "q={q}");
        if let Some(w) = &norm.witness {
            assert_witness_sound(&normalized, w);
        }
    }
}

/// The greedy stepwise strategy: incomplete at q=13 is acceptable, but any
/// witness it produces must be sound, and at the first admissible prime past
/// Q(3,5) it must succeed like the stepwise argument promises.
#[test]
fn greedy_strategy() {
    // q = 13: full search finds; greedy may fail (incomplete)
    let problem = quarter_problem(13, 13, 3, 1);
    let full = diff_forge::search(&problem, u64::MAX).unwrap();
    assert_eq!(full.status, SearchStatus::Found);
    match diff_forge::greedy_lift_search(&problem).unwrap() {
        diff_forge::GreedyOutcome::Found(r) => {
            assert_witness_sound(&problem, r.witness.as_ref().unwrap())
        }
        diff_forge::GreedyOutcome::StepFailed { .. }
        | diff_forge::GreedyOutcome::TableUnsatisfiable => {}
    }

    // 323473 is the first prime = 1 (mod 12) past Q(3,5) = 323433
    let problem = quarter_problem(13, 323473, 3, 1);
    match diff_forge::greedy_lift_search(&problem).unwrap() {
        diff_forge::GreedyOutcome::Found(r) => {
            assert_witness_sound(&problem, r.witness.as_ref().unwrap());
        }
        other => panic!("greedy failed at large prime: {other:?}"),
    }

    // empty condition table degenerates to the first admissible element
    let f13 = FiniteField::prime(13).unwrap();
    let x = diff_forge::find_constrained_element(&f13, 2, &[], &[]).unwrap();
    assert_eq!(x, Some(f13.zero()));
}

/// Half variants end to end: search, then the double oracle on the witness.
#[test]
fn half_variants_end_to_end() {
    // first type, p=5: 2*d*lambda = 4
    let f5 = FiniteField::prime(5).unwrap();
    let scheme = build_scheme(&f5, SchemeVariant::HalfFirst).unwrap();
    let fq = FiniteField::prime(13).unwrap();
    let problem = SearchProblem::new(scheme, fq, 2, 1).unwrap();
    let r = diff_forge::search(&problem, u64::MAX).unwrap();
    assert_eq!(r.status, SearchStatus::Found);
    assert_witness_sound(&problem, r.witness.as_ref().unwrap());

    // second type, p=7, k=8: 2*d*lambda = 8. q=17 is a genuine exhaustion
    // at this size; q=41 admits a witness.
    let f7 = FiniteField::prime(7).unwrap();
    let scheme = build_scheme(&f7, SchemeVariant::HalfSecond).unwrap();
    let fq = FiniteField::prime(17).unwrap();
    let problem = SearchProblem::new(scheme.clone(), fq, 4, 1).unwrap();
    let r = diff_forge::search(&problem, u64::MAX).unwrap();
    assert_eq!(r.status, SearchStatus::Exhausted);
    let fq = FiniteField::prime(41).unwrap();
    let problem = SearchProblem::new(scheme, fq, 4, 1).unwrap();
    let r = diff_forge::search(&problem, u64::MAX).unwrap();
    assert_eq!(r.status, SearchStatus::Found);
    assert_witness_sound(&problem, r.witness.as_ref().unwrap());

    // p=3 second type over q=9 exercises an extension companion field
    let f3 = FiniteField::prime(3).unwrap();
    let scheme = build_scheme(&f3, SchemeVariant::HalfSecond).unwrap();
    let f9 = FiniteField::new(3, 2, None).unwrap();
    let problem = SearchProblem::new(scheme, f9, 2, 1).unwrap();
    let r = diff_forge::search(&problem, u64::MAX).unwrap();
    if let Some(w) = &r.witness {
        assert_witness_sound(&problem, w);
    }
}

/// Emitted JSON re-parses and re-verifies identically.
#[test]
fn df_json_round_trip_reverifies() {
    let df = lifted_catalog_df("lemma-2.3");
    let json = diff_forge::formats::df_to_json(&df).unwrap();
    let back = diff_forge::formats::df_from_json(&json).unwrap();
    assert!(back.verify().unwrap().ok);
    assert_eq!(back.blocks, df.blocks);
}

/// The naive-enumeration completeness oracle on a small instance, checking
/// the lexicographically-least-witness contract as well as the status.
#[test]
fn naive_agrees_on_q13() {
    let problem = quarter_problem(13, 13, 3, 1).with_normalize(false);
    let fast = diff_forge::search(&problem, u64::MAX).unwrap();
    let slow = naive_search(&problem);
    assert_eq!(fast.status, SearchStatus::Found);
    assert_eq!(fast.witness, slow);
}
