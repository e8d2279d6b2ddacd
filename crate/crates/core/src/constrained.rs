//! Constrained-element finding and the stepwise (greedy) lift search.
//!
//! `find_constrained_element` scans F_q in canonical order for the least x
//! with x - b_i in the required class for every constraint. The greedy search
//! mirrors the stepwise existence argument: it first commits every symbol and
//! every two-term entry to a target class (the condition table), then fixes
//! symbols one at a time, each step being exactly one constrained-element
//! instance. It is incomplete: a failed step says nothing about exhaustion,
//! and the caller decides whether to fall back to the full search.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};
use crate::search::{SearchProblem, SearchResult, SearchStatus};
use crate::symbolic::{evaluate_dh, transversal_check, SymbolicDhTable, SymbolicDiff};

/// Require x - base in C_{class_index}^{d,q}.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CycloConstraint {
    pub base: FieldElem,
    pub class_index: u64,
}

/// Least x (canonical order) satisfying every constraint, skipping the
/// excluded set; `None` when the scan exhausts F_q.
pub fn find_constrained_element(
    fq: &FiniteField,
    d: u64,
    constraints: &[CycloConstraint],
    exclude: &[FieldElem],
) -> Result<Option<FieldElem>> {
    if d == 0 || (fq.q() - 1) % d != 0 {
        return Err(Error::DivisibilityViolated {
            what: "d must divide q - 1",
            a: d,
            b: fq.q() - 1,
        });
    }
    for c in constraints {
        if c.class_index >= d {
            return Err(Error::Format(format!(
                "class index {} out of range for d = {d}",
                c.class_index
            )));
        }
    }
    'scan: for x in fq.elements() {
        if exclude.contains(&x) {
            continue;
        }
        for c in constraints {
            let diff = fq.sub(x, c.base);
            if diff.index() == 0 || fq.cyclo_index(d, diff)? != c.class_index {
                continue 'scan;
            }
        }
        return Ok(Some(x));
    }
    Ok(None)
}

/// Class commitments driving the greedy search: one class per symbol, one
/// class per two-term entry, chosen so that every D_h comes out a
/// lambda-transversal if all commitments are met.
#[derive(Clone, Debug)]
pub struct ConditionTable {
    pub symbol_class: BTreeMap<usize, u64>,
    /// Keyed by (h key, entry); only two-term entries appear (single-symbol
    /// entries are determined by the symbol classes).
    pub entry_class: BTreeMap<(u64, SymbolicDiff), u64>,
}

/// Builds a condition table for the given class of (1 - xi), or `None` when
/// no symbol-class assignment is feasible.
///
/// Symbol classes must tile D_0 (lambda of each class, the common factor 2
/// dropping out), and within each D_h the determined entries (y_i at class
/// c_i, y_i(1-xi) at class c_i + a) must not overfill any class; free
/// two-term entries then cover whatever is missing, deterministically in
/// sorted order.
pub fn build_condition_table(
    table: &SymbolicDhTable,
    d: u64,
    lambda: u64,
    one_minus_xi_class: u64,
) -> Option<ConditionTable> {
    let symbols = table.symbols();
    let a = one_minus_xi_class % d;

    // fixed-class contributions of a symbol assignment within one D_h
    let fixed_class = |entry: &SymbolicDiff, classes: &BTreeMap<usize, u64>| -> Option<u64> {
        match entry {
            SymbolicDiff::Single { sym } => classes.get(sym).map(|&c| c),
            SymbolicDiff::OneMinusXi { sym } => classes.get(sym).map(|&c| (c + a) % d),
            _ => None,
        }
    };

    let feasible = |classes: &BTreeMap<usize, u64>| -> bool {
        // D_0: symbol classes themselves must not overfill
        let mut counts = vec![0u64; d as usize];
        for c in classes.values() {
            counts[*c as usize] += 1;
            if counts[*c as usize] > lambda {
                return false;
            }
        }
        for (h, entries) in &table.entries {
            if *h == 0 {
                continue;
            }
            let mut counts = vec![0u64; d as usize];
            for e in entries {
                if let Some(c) = fixed_class(e, classes) {
                    counts[c as usize] += 1;
                    if counts[c as usize] > lambda {
                        return false;
                    }
                }
            }
        }
        true
    };

    fn assign(
        symbols: &[usize],
        i: usize,
        d: u64,
        classes: &mut BTreeMap<usize, u64>,
        feasible: &dyn Fn(&BTreeMap<usize, u64>) -> bool,
    ) -> bool {
        if i == symbols.len() {
            return true;
        }
        for c in 0..d {
            classes.insert(symbols[i], c);
            if feasible(classes) && assign(symbols, i + 1, d, classes, feasible) {
                return true;
            }
        }
        classes.remove(&symbols[i]);
        false
    }

    let mut classes = BTreeMap::new();
    if !assign(&symbols, 0, d, &mut classes, &feasible) {
        return None;
    }

    let mut entry_class = BTreeMap::new();
    for (h, entries) in &table.entries {
        if *h == 0 {
            continue;
        }
        let mut need: Vec<u64> = vec![lambda; d as usize];
        let mut free = Vec::new();
        for e in entries {
            match fixed_class(e, &classes) {
                Some(c) => need[c as usize] -= 1,
                None => free.push(*e),
            }
        }
        free.sort_unstable();
        let mut fill = need
            .iter()
            .enumerate()
            .flat_map(|(c, &n)| std::iter::repeat(c as u64).take(n as usize));
        for e in free {
            entry_class.insert((*h, e), fill.next().expect("entry counts match"));
        }
    }

    Some(ConditionTable {
        symbol_class: classes,
        entry_class,
    })
}

#[derive(Clone, Debug)]
pub enum GreedyOutcome {
    Found(SearchResult),
    /// No symbol-class assignment satisfies the structural constraints.
    TableUnsatisfiable,
    /// The constrained-element scan came up empty at this symbol.
    StepFailed { symbol: usize },
}

/// Fixes symbols one at a time with `find_constrained_element` against a
/// condition table built on the fly. A found witness is re-verified against
/// the evaluated table before being returned.
pub fn greedy_lift_search(problem: &SearchProblem) -> Result<GreedyOutcome> {
    let start = std::time::Instant::now();
    let fq = &problem.field;
    let d = problem.d;
    let xi = if problem.scheme.variant.uses_xi() {
        fq.primitive_fourth_root()?
    } else {
        fq.zero()
    };
    let a = if problem.scheme.variant.uses_xi() {
        let one_minus_xi = fq.sub(fq.one(), xi);
        fq.cyclo_index(d, one_minus_xi)?
    } else {
        0
    };
    let Some(ct) = build_condition_table(&problem.table, d, problem.lambda, a) else {
        return Ok(GreedyOutcome::TableUnsatisfiable);
    };

    let mut assign: BTreeMap<usize, FieldElem> = BTreeMap::new();
    let mut nodes = 0u64;
    for &sym in &problem.scheme.symbols {
        let mut constraints = vec![CycloConstraint {
            base: fq.zero(),
            class_index: ct.symbol_class[&sym],
        }];
        for (&(_h, entry), &class_index) in &ct.entry_class {
            if entry.max_symbol() != sym {
                continue;
            }
            let base = match entry {
                SymbolicDiff::Diff { lo, .. } => assign[&lo],
                SymbolicDiff::Sum { lo, .. } => fq.neg(assign[&lo]),
                SymbolicDiff::DiffXi { lo, .. } => fq.mul(xi, assign[&lo]),
                SymbolicDiff::SumXi { lo, .. } => fq.neg(fq.mul(xi, assign[&lo])),
                _ => unreachable!("only two-term entries carry free classes"),
            };
            constraints.push(CycloConstraint { base, class_index });
        }
        nodes += 1;
        match find_constrained_element(fq, d, &constraints, &[])? {
            Some(x) => {
                assign.insert(sym, x);
            }
            None => return Ok(GreedyOutcome::StepFailed { symbol: sym }),
        }
    }

    // the table construction guarantees this, so a failure here is a bug
    let evaluated = evaluate_dh(&problem.table, &assign, fq, xi)?;
    for (h, vals) in &evaluated {
        if !transversal_check(vals, fq, d, problem.lambda)? {
            return Err(Error::InconsistentScheme(format!(
                "greedy witness fails transversality at h = {h}"
            )));
        }
    }

    let witness = problem
        .scheme
        .symbols
        .iter()
        .map(|&s| (s, assign[&s]))
        .collect();
    Ok(GreedyOutcome::Found(SearchResult {
        status: SearchStatus::Found,
        witness: Some(witness),
        nodes,
        elapsed: start.elapsed(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paley::{build_scheme, SchemeVariant};

    #[test]
    fn least_constrained_element() {
        let f13 = FiniteField::prime(13).unwrap();
        // x - 0 a square: 1 is the least
        let found = find_constrained_element(
            &f13,
            2,
            &[CycloConstraint {
                base: f13.zero(),
                class_index: 0,
            }],
            &[],
        )
        .unwrap();
        assert_eq!(found, Some(f13.one()));

        // x in C_0^{3,13} and x - 1 in C_1^{3,13}
        let found = find_constrained_element(
            &f13,
            3,
            &[
                CycloConstraint {
                    base: f13.zero(),
                    class_index: 0,
                },
                CycloConstraint {
                    base: f13.one(),
                    class_index: 1,
                },
            ],
            &[],
        )
        .unwrap()
        .unwrap();
        assert_eq!(f13.cyclo_index(3, found).unwrap(), 0);
        assert_eq!(f13.cyclo_index(3, f13.sub(found, f13.one())).unwrap(), 1);
        // it is the least such: nothing below it qualifies
        for x in f13.elements().take_while(|&x| x < found) {
            let dx = f13.sub(x, f13.one());
            let ok = x.index() != 0
                && dx.index() != 0
                && f13.cyclo_index(3, x).unwrap() == 0
                && f13.cyclo_index(3, dx).unwrap() == 1;
            assert!(!ok);
        }
    }

    #[test]
    fn exhausted_scan_on_tiny_field() {
        // q = 5, d = 4: demand x - b_i in four distinct classes; with only
        // four nonzero elements this may be unsatisfiable, which must come
        // back as None rather than an error.
        let f5 = FiniteField::prime(5).unwrap();
        let constraints: Vec<CycloConstraint> = (0..4)
            .map(|i| CycloConstraint {
                base: f5.elem(i).unwrap(),
                class_index: i,
            })
            .collect();
        let r = find_constrained_element(&f5, 4, &constraints, &[]).unwrap();
        if let Some(x) = r {
            for c in &constraints {
                assert_eq!(f5.cyclo_index(4, f5.sub(x, c.base)).unwrap(), c.class_index);
            }
        }
    }

    #[test]
    fn empty_constraints_yield_first_admissible() {
        let f13 = FiniteField::prime(13).unwrap();
        let r = find_constrained_element(&f13, 2, &[], &[]).unwrap();
        assert_eq!(r, Some(f13.zero()));
        let r = find_constrained_element(&f13, 2, &[], &[f13.zero()]).unwrap();
        assert_eq!(r, Some(f13.one()));
    }

    #[test]
    fn condition_table_p13() {
        let fp = FiniteField::prime(13).unwrap();
        let scheme = build_scheme(&fp, SchemeVariant::Quarter).unwrap();
        let table = crate::symbolic::symbolic_dh(&scheme).unwrap();
        for a in 0..3 {
            let ct = build_condition_table(&table, 3, 1, a).expect("satisfiable");
            // symbol classes are a permutation of {0,1,2}
            let mut classes: Vec<u64> = ct.symbol_class.values().copied().collect();
            classes.sort_unstable();
            assert_eq!(classes, vec![0, 1, 2]);
        }
    }
}
