//! Backtracking search for symbol assignments that make every evaluated D_h
//! a lambda-transversal, plus the range scanner that reproduces exception
//! sets at desk scale.
//!
//! Symbols are decided in the scheme's order (y first, then y1, y2, ...).
//! After a symbol is assigned, every table entry whose symbols are now all
//! known is evaluated and bucketed into per-(h, class) counters; any class
//! exceeding lambda prunes the branch, as does an entry evaluating to zero.
//! Because |D_h| = lambda*d for every h, a full assignment that never
//! overflows a counter is exactly a witness. Candidates are tried in
//! canonical element order, so the first hit is the lexicographically least
//! witness over the explored domain.
//!
//! Scaling an entire witness by a nonzero constant shifts every class index
//! inside each D_h uniformly, which preserves transversality; restricting the
//! first symbol to one representative per cyclotomic class (`normalize`) is
//! therefore sound for found/exhausted classification and is the default for
//! scans.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::arith::{is_prime, prime_power};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FiniteField};
use crate::group::{make_field_additive, GroupElem};
use crate::lifting::LiftInput;
use crate::paley::{build_scheme, PaleyScheme, PhiSym, SchemeVariant, Unit};
use crate::symbolic::{symbolic_dh, SymbolicDhTable, SymbolicDiff};

#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub scheme: PaleyScheme,
    pub table: SymbolicDhTable,
    pub field: FiniteField,
    pub d: u64,
    pub lambda: u64,
    /// Restrict the first symbol to one representative per class.
    pub normalize: bool,
}

impl SearchProblem {
    /// Validates the congruences binding p, q, d and lambda:
    /// unit_count * d * lambda must equal p-1 (p+1 for the half-second
    /// variant), and unit_count * d must divide q-1.
    pub fn new(
        scheme: PaleyScheme,
        field: FiniteField,
        d: u64,
        lambda: u64,
    ) -> Result<SearchProblem> {
        let p = scheme.p();
        let q = field.q();
        let units = scheme.variant.unit_count();
        let target = match scheme.variant {
            SchemeVariant::HalfSecond => p + 1,
            _ => p - 1,
        };
        if d == 0 || lambda == 0 || units * d * lambda != target {
            return Err(Error::CongruenceViolated(format!(
                "need {units}*d*lambda = {target}, got d={d} lambda={lambda}"
            )));
        }
        if (q - 1) % (units * d) != 0 {
            return Err(Error::CongruenceViolated(format!(
                "q = {q} is inadmissible: {units}*d = {} must divide q-1",
                units * d
            )));
        }
        let table = symbolic_dh(&scheme)?;
        Ok(SearchProblem {
            scheme,
            table,
            field,
            d,
            lambda,
            normalize: true,
        })
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

impl SearchStatus {
    pub fn name(self) -> &'static str {
        match self {
            SearchStatus::Found => "found",
            SearchStatus::Exhausted => "exhausted",
            SearchStatus::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// (symbol id, value) pairs in symbol order.
    pub witness: Option<Vec<(usize, FieldElem)>>,
    pub nodes: u64,
    pub elapsed: Duration,
}

/// Entry compiled against symbol positions instead of ids.
#[derive(Copy, Clone)]
enum Compiled {
    Diff(usize, usize),
    Sum(usize, usize),
    DiffXi(usize, usize),
    SumXi(usize, usize),
    OneMinusXi(usize),
    Single(usize),
    Twice(usize),
}

struct Engine<'a> {
    fq: &'a FiniteField,
    d: u64,
    lambda: u64,
    xi: FieldElem,
    /// activations[pos] = entries decidable once symbol position pos is set,
    /// tagged with their h slot.
    activations: Vec<Vec<(usize, Compiled)>>,
    counters: Vec<Vec<u32>>,
    values: Vec<FieldElem>,
    nodes: u64,
    budget: u64,
}

enum Outcome {
    Found,
    Exhausted,
    Budget,
}

impl<'a> Engine<'a> {
    fn evaluate(&self, entry: Compiled) -> FieldElem {
        let fq = self.fq;
        let v = &self.values;
        match entry {
            Compiled::Diff(hi, lo) => fq.sub(v[hi], v[lo]),
            Compiled::Sum(hi, lo) => fq.add(v[hi], v[lo]),
            Compiled::DiffXi(hi, lo) => fq.sub(v[hi], fq.mul(self.xi, v[lo])),
            Compiled::SumXi(hi, lo) => fq.add(v[hi], fq.mul(self.xi, v[lo])),
            Compiled::OneMinusXi(s) => fq.mul(v[s], fq.sub(fq.one(), self.xi)),
            Compiled::Single(s) => v[s],
            Compiled::Twice(s) => fq.add(v[s], v[s]),
        }
    }

    /// Applies all activations of `pos`; on overflow rolls back and reports
    /// how many were applied.
    fn push(&mut self, pos: usize) -> std::result::Result<(), usize> {
        for (done, &(slot, entry)) in self.activations[pos].iter().enumerate() {
            let val = self.evaluate(entry);
            if val.index() == 0 {
                return Err(done);
            }
            let class = self
                .fq
                .cyclo_index(self.d, val)
                .expect("nonzero value has a class") as usize;
            let c = &mut self.counters[slot][class];
            *c += 1;
            if u64::from(*c) > self.lambda {
                *c -= 1;
                return Err(done);
            }
        }
        Ok(())
    }

    fn pop(&mut self, pos: usize, upto: usize) {
        for &(slot, entry) in self.activations[pos][..upto].iter() {
            let val = self.evaluate(entry);
            let class = self
                .fq
                .cyclo_index(self.d, val)
                .expect("nonzero value has a class") as usize;
            self.counters[slot][class] -= 1;
        }
    }

    fn dfs(&mut self, pos: usize, domains: &[Vec<FieldElem>]) -> Outcome {
        if pos == self.values.len() {
            return Outcome::Found;
        }
        for &candidate in &domains[pos] {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Outcome::Budget;
            }
            self.values[pos] = candidate;
            match self.push(pos) {
                Ok(()) => {
                    match self.dfs(pos + 1, domains) {
                        Outcome::Found => return Outcome::Found,
                        Outcome::Budget => return Outcome::Budget,
                        Outcome::Exhausted => {}
                    }
                    let n = self.activations[pos].len();
                    self.pop(pos, n);
                }
                Err(done) => self.pop(pos, done),
            }
        }
        Outcome::Exhausted
    }
}

/// Depth-first search over symbol assignments. `budget` counts candidate
/// assignments tried (search-tree nodes); pass `u64::MAX` for no limit.
pub fn search(problem: &SearchProblem, budget: u64) -> Result<SearchResult> {
    let start = Instant::now();
    let fq = &problem.field;
    let symbols = &problem.scheme.symbols;
    let pos_of: BTreeMap<usize, usize> = symbols.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let xi = if problem.scheme.variant.uses_xi() {
        fq.primitive_fourth_root()?
    } else {
        fq.zero()
    };

    let slots: Vec<u64> = problem.table.entries.keys().copied().collect();
    let mut activations: Vec<Vec<(usize, Compiled)>> = vec![Vec::new(); symbols.len()];
    for (slot, (_h, entries)) in problem.table.entries.iter().enumerate() {
        for &e in entries {
            let compiled = match e {
                SymbolicDiff::Diff { hi, lo } => Compiled::Diff(pos_of[&hi], pos_of[&lo]),
                SymbolicDiff::Sum { hi, lo } => Compiled::Sum(pos_of[&hi], pos_of[&lo]),
                SymbolicDiff::DiffXi { hi, lo } => Compiled::DiffXi(pos_of[&hi], pos_of[&lo]),
                SymbolicDiff::SumXi { hi, lo } => Compiled::SumXi(pos_of[&hi], pos_of[&lo]),
                SymbolicDiff::OneMinusXi { sym } => Compiled::OneMinusXi(pos_of[&sym]),
                SymbolicDiff::Single { sym } => Compiled::Single(pos_of[&sym]),
                SymbolicDiff::Twice { sym } => Compiled::Twice(pos_of[&sym]),
            };
            activations[pos_of[&e.max_symbol()]].push((slot, compiled));
        }
    }

    let all_nonzero: Vec<FieldElem> = fq.nonzero_elements().collect();
    let mut domains: Vec<Vec<FieldElem>> = vec![all_nonzero; symbols.len()];
    if problem.normalize {
        domains[0] = fq.least_class_representatives(problem.d)?;
    }

    let mut engine = Engine {
        fq,
        d: problem.d,
        lambda: problem.lambda,
        xi,
        activations,
        counters: vec![vec![0; problem.d as usize]; slots.len()],
        values: vec![fq.zero(); symbols.len()],
        nodes: 0,
        budget,
    };

    let outcome = engine.dfs(0, &domains);
    let status = match outcome {
        Outcome::Found => SearchStatus::Found,
        Outcome::Exhausted => SearchStatus::Exhausted,
        Outcome::Budget => SearchStatus::BudgetExceeded,
    };
    let witness = match status {
        SearchStatus::Found => Some(
            symbols
                .iter()
                .zip(&engine.values)
                .map(|(&s, &v)| (s, v))
                .collect(),
        ),
        _ => None,
    };
    Ok(SearchResult {
        status,
        witness,
        nodes: engine.nodes,
        elapsed: start.elapsed(),
    })
}

/// Instantiates the scheme's template with a witness, producing the input of
/// the fundamental construction over F_p x F_q with e = (q-1)/unit_count.
pub fn assemble_lift_input(
    problem: &SearchProblem,
    witness: &[(usize, FieldElem)],
) -> Result<LiftInput> {
    let fq = &problem.field;
    let assign: BTreeMap<usize, FieldElem> = witness.iter().copied().collect();
    let xi = if problem.scheme.variant.uses_xi() {
        fq.primitive_fourth_root()?
    } else {
        fq.zero()
    };
    let phi: Vec<FieldElem> = problem
        .scheme
        .template
        .iter()
        .map(|slot| match slot {
            PhiSym::Zero => Ok(fq.zero()),
            PhiSym::Term { unit, sym } => {
                let v = *assign
                    .get(sym)
                    .ok_or_else(|| Error::Format(format!("witness misses symbol {sym}")))?;
                Ok(match unit {
                    Unit::One => v,
                    Unit::MinusOne => fq.neg(v),
                    Unit::Xi => fq.mul(xi, v),
                    Unit::MinusXi => fq.neg(fq.mul(xi, v)),
                })
            }
        })
        .collect::<Result<_>>()?;
    let f_block: Vec<GroupElem> = problem
        .scheme
        .base
        .iter()
        .map(|&x| GroupElem::Field(x))
        .collect();
    let e = (fq.q() - 1) / problem.scheme.variant.unit_count();
    LiftInput::new(
        make_field_additive(problem.scheme.field_p.clone()),
        fq.clone(),
        e,
        problem.d,
        problem.lambda,
        vec![f_block],
        vec![phi],
    )
}

#[derive(Clone, Debug)]
pub struct ScanRecord {
    pub q: u64,
    pub status: SearchStatus,
    pub witness: Option<Vec<(usize, FieldElem)>>,
    pub nodes: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub q_from: u64,
    pub q_to: u64,
    /// Node budget per q.
    pub budget: u64,
    /// Include prime powers, not just primes.
    pub prime_powers: bool,
    pub normalize: bool,
    pub jobs: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            q_from: 0,
            q_to: 0,
            budget: u64::MAX,
            prime_powers: false,
            normalize: true,
            jobs: 1,
        }
    }
}

/// The admissible q in range for this (variant, d): q prime (or prime power
/// when configured) with unit_count*d dividing q-1.
pub fn admissible_q(variant: SchemeVariant, d: u64, cfg: &ScanConfig) -> Vec<u64> {
    let step = variant.unit_count() * d;
    (cfg.q_from..=cfg.q_to)
        .filter(|&q| q >= 2 && (q - 1) % step == 0)
        .filter(|&q| {
            if cfg.prime_powers {
                prime_power(q).is_some()
            } else {
                is_prime(q)
            }
        })
        .collect()
}

/// Runs the search over every admissible q in range, in order. Workers split
/// the q list; records come back in q order regardless of job count.
pub fn scan_range(
    field_p: &FiniteField,
    variant: SchemeVariant,
    d: u64,
    lambda: u64,
    cfg: &ScanConfig,
) -> Result<Vec<ScanRecord>> {
    let scheme = build_scheme(field_p, variant)?;
    let qs = admissible_q(variant, d, cfg);
    let jobs = cfg.jobs.max(1).min(qs.len().max(1));

    let run_one = |q: u64| -> Result<ScanRecord> {
        let fq = FiniteField::new(prime_power(q).expect("admissible").0, prime_power(q).unwrap().1 as usize, None)?;
        let problem =
            SearchProblem::new(scheme.clone(), fq, d, lambda)?.with_normalize(cfg.normalize);
        let result = search(&problem, cfg.budget)?;
        Ok(ScanRecord {
            q,
            status: result.status,
            witness: result.witness,
            nodes: result.nodes,
            seconds: result.elapsed.as_secs_f64(),
        })
    };

    if jobs <= 1 {
        return qs.iter().map(|&q| run_one(q)).collect();
    }

    let mut slots: Vec<Option<Result<ScanRecord>>> = (0..qs.len()).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for _ in 0..jobs {
            handles.push(scope.spawn(|| {
                let mut mine = Vec::new();
                loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= qs.len() {
                        break;
                    }
                    mine.push((i, run_one(qs[i])));
                }
                mine
            }));
        }
        for h in handles {
            for (i, r) in h.join().expect("scan worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every q slot filled"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paley::build_scheme;

    fn quarter_problem(p: u64, q: u64, d: u64, lambda: u64) -> SearchProblem {
        let fp = FiniteField::prime(p).unwrap();
        let fq = FiniteField::prime(q).unwrap();
        let scheme = build_scheme(&fp, SchemeVariant::Quarter).unwrap();
        SearchProblem::new(scheme, fq, d, lambda).unwrap()
    }

    #[test]
    fn p13_q13_finds_frozen_witness() {
        let problem = quarter_problem(13, 13, 3, 1).with_normalize(false);
        let r = search(&problem, u64::MAX).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        // lexicographically least witness, frozen from full enumeration
        let w: Vec<u64> = r.witness.unwrap().iter().map(|(_, v)| v.index()).collect();
        assert_eq!(w, vec![1, 2, 4]);
    }

    #[test]
    fn p17_q17_lambda2_finds_frozen_witness() {
        let problem = quarter_problem(17, 17, 2, 2).with_normalize(false);
        let r = search(&problem, u64::MAX).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        let w: Vec<u64> = r.witness.unwrap().iter().map(|(_, v)| v.index()).collect();
        assert_eq!(w, vec![1, 3, 8, 7]);
    }

    #[test]
    fn p13_q37_exhausts() {
        let problem = quarter_problem(13, 37, 3, 1);
        let r = search(&problem, u64::MAX).unwrap();
        assert_eq!(r.status, SearchStatus::Exhausted);
        // and without normalization as the full certificate
        let problem = problem.with_normalize(false);
        let r = search(&problem, u64::MAX).unwrap();
        assert_eq!(r.status, SearchStatus::Exhausted);
    }

    #[test]
    fn budget_is_respected() {
        let problem = quarter_problem(13, 61, 3, 1);
        let r = search(&problem, 10).unwrap();
        assert_eq!(r.status, SearchStatus::BudgetExceeded);
        assert!(r.nodes >= 10);
    }

    #[test]
    fn p5_trivial_d1() {
        // d = 1: every nonzero multiset is a transversal, first candidate wins
        let problem = quarter_problem(5, 5, 1, 1).with_normalize(false);
        let r = search(&problem, u64::MAX).unwrap();
        assert_eq!(r.status, SearchStatus::Found);
        assert_eq!(r.nodes, 1);
        let w: Vec<u64> = r.witness.unwrap().iter().map(|(_, v)| v.index()).collect();
        assert_eq!(w, vec![1]);
    }

    #[test]
    fn rejects_inadmissible_q() {
        let fp = FiniteField::prime(13).unwrap();
        let fq = FiniteField::prime(17).unwrap(); // 12 does not divide 16
        let scheme = build_scheme(&fp, SchemeVariant::Quarter).unwrap();
        assert!(matches!(
            SearchProblem::new(scheme, fq, 3, 1),
            Err(Error::CongruenceViolated(_))
        ));
        let fp = FiniteField::prime(13).unwrap();
        let scheme = build_scheme(&fp, SchemeVariant::Quarter).unwrap();
        let fq = FiniteField::prime(13).unwrap();
        assert!(matches!(
            SearchProblem::new(scheme, fq, 2, 1),
            Err(Error::CongruenceViolated(_))
        ));
    }

    #[test]
    fn empty_scan_range() {
        let fp = FiniteField::prime(13).unwrap();
        let cfg = ScanConfig {
            q_from: 14,
            q_to: 20,
            ..Default::default()
        };
        let recs = scan_range(&fp, SchemeVariant::Quarter, 3, 1, &cfg).unwrap();
        assert!(recs.is_empty());
    }
}
