//! Shared helpers for the integration suites: independent oracles that stay
//! off the implementation paths they check.

use diff_forge::{
    FieldElem, LiftInput, RelativeDifferenceFamily, SearchProblem, SymbolicDiff,
};

/// Full enumeration over (F_q^*)^n in lexicographic order, filtering on the
/// evaluated table directly; returns the first (least) witness. No pruning,
/// no normalization: this is the completeness oracle for the backtracking
/// search.
pub fn naive_search(problem: &SearchProblem) -> Option<Vec<(usize, FieldElem)>> {
    let fq = &problem.field;
    let q = fq.q();
    let d = problem.d;
    let lambda = problem.lambda;
    let xi = if problem.scheme.variant.uses_xi() {
        fq.primitive_fourth_root().unwrap()
    } else {
        fq.zero()
    };
    let symbols = problem.scheme.symbols.clone();
    let n = symbols.len();

    // class of every nonzero element, precomputed once
    let class_of: Vec<u8> = (0..q)
        .map(|i| {
            if i == 0 {
                u8::MAX
            } else {
                fq.cyclo_index(d, fq.elem(i).unwrap()).unwrap() as u8
            }
        })
        .collect();

    let entries: Vec<(usize, SymbolicDiff)> = problem
        .table
        .entries
        .values()
        .enumerate()
        .flat_map(|(slot, es)| es.iter().map(move |&e| (slot, e)))
        .collect();
    let slots = problem.table.entries.len();
    let mut pos_by_sym = vec![usize::MAX; symbols.iter().max().unwrap() + 1];
    for (pos, &s) in symbols.iter().enumerate() {
        pos_by_sym[s] = pos;
    }

    // odometer over (1..q)^n, last symbol fastest, i.e. lexicographic order
    let mut idx = vec![1u64; n];
    let mut counts = vec![0u16; slots * d as usize];
    loop {
        let values: Vec<FieldElem> = idx.iter().map(|&i| fq.elem(i).unwrap()).collect();
        counts.iter_mut().for_each(|c| *c = 0);
        let mut ok = true;
        for &(slot, e) in &entries {
            let v = |s: usize| values[pos_by_sym[s]];
            let val = match e {
                SymbolicDiff::Diff { hi, lo } => fq.sub(v(hi), v(lo)),
                SymbolicDiff::Sum { hi, lo } => fq.add(v(hi), v(lo)),
                SymbolicDiff::DiffXi { hi, lo } => fq.sub(v(hi), fq.mul(xi, v(lo))),
                SymbolicDiff::SumXi { hi, lo } => fq.add(v(hi), fq.mul(xi, v(lo))),
                SymbolicDiff::OneMinusXi { sym } => fq.mul(v(sym), fq.sub(fq.one(), xi)),
                SymbolicDiff::Single { sym } => v(sym),
                SymbolicDiff::Twice { sym } => fq.add(v(sym), v(sym)),
            };
            if val.index() == 0 {
                ok = false;
                break;
            }
            let c = class_of[val.index() as usize];
            let cell = &mut counts[slot * d as usize + c as usize];
            *cell += 1;
            if u64::from(*cell) > lambda {
                ok = false;
                break;
            }
        }
        if ok {
            return Some(symbols.iter().copied().zip(values).collect());
        }
        let mut l = n;
        loop {
            if l == 0 {
                return None;
            }
            l -= 1;
            idx[l] += 1;
            if idx[l] < q {
                break;
            }
            idx[l] = 1;
        }
    }
}

/// The soundness oracle: a found witness must evaluate to transversals AND
/// the assembled lift must pass the raw difference-family verifier.
pub fn assert_witness_sound(problem: &SearchProblem, witness: &[(usize, FieldElem)]) {
    let fq = &problem.field;
    let xi = if problem.scheme.variant.uses_xi() {
        fq.primitive_fourth_root().unwrap()
    } else {
        fq.zero()
    };
    let assign = witness.iter().copied().collect();
    let evaluated = diff_forge::evaluate_dh(&problem.table, &assign, fq, xi).expect("evaluates");
    for (h, vals) in &evaluated {
        assert!(
            diff_forge::transversal_check(vals, fq, problem.d, problem.lambda).unwrap(),
            "D_{h} not a {}-transversal",
            problem.lambda
        );
    }
    let input = diff_forge::assemble_lift_input(problem, witness).expect("assembles");
    let df = diff_forge::lift(&input).expect("lifts");
    let verdict = df.verify().expect("verifies");
    assert!(verdict.ok, "lifted family fails verify_df");
}

/// Lift a catalog entry and hand back the verified family.
pub fn lifted_catalog_df(tag: &str) -> RelativeDifferenceFamily {
    let entry = diff_forge::catalog_entry(tag).unwrap_or_else(|| panic!("no entry {tag}"));
    let input: &LiftInput = entry.as_lift().unwrap_or_else(|| panic!("{tag} not a lift"));
    let df = diff_forge::lift(input).expect("catalog entry lifts");
    assert!(df.verify().expect("verifies").ok, "{tag} fails verify_df");
    df
}

/// Build a quarter-variant search problem over prime fields.
pub fn quarter_problem(p: u64, q: u64, d: u64, lambda: u64) -> SearchProblem {
    let fp = diff_forge::FiniteField::prime(p).unwrap();
    let fq = diff_forge::FiniteField::prime(q).unwrap();
    let scheme = diff_forge::build_scheme(&fp, diff_forge::SchemeVariant::Quarter).unwrap();
    diff_forge::SearchProblem::new(scheme, fq, d, lambda).unwrap()
}
