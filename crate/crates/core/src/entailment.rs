//! Scope-bounded entailment and satisfiability checking.
//!
//! Validity within scope is decided by brute force: enumerate every finite
//! interpretation whose domain sizes stay within the [`Scope`], and for each
//! one every assignment of the free variables, then evaluate. The
//! enumeration order is total (documented below) and deterministic, so
//! repeated runs return identical results and the first counterexample found
//! is minimal in total domain size.
//!
//! # Enumeration order
//!
//! - Domain-size vectors (one size per declared base sort, each in
//!   `1..=bound`) are visited grouped by **total size ascending**, ties
//!   broken lexicographically with the first-declared sort most significant.
//! - Within one size vector, interpretations form a mixed-radix counter over
//!   every table cell: symbols in declaration order (functions before
//!   predicates) with **later symbols varying fastest**, and within a table
//!   row 0 most significant (the **last row varies fastest**). Cell values
//!   count upward from 0 (element index, natural, set bit mask, or
//!   false-before-true), so the first interpretation is all-zero.
//! - Assignments enumerate free variables in name order, the last variable
//!   varying fastest, each ranging over its sort's values ascending.
//!
//! The checker counts one unit of work per (interpretation, assignment) pair
//! and stops with [`EntailmentResult::ResourceExhausted`] when the model
//! budget is spent.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{
    alpha_eq, evaluate, free_vars, Assignment, EvalError, Formula, Interpretation, Signature,
    Sort, Value,
};

/// Default per-sort domain bound.
pub const DEFAULT_SCOPE: usize = 3;
/// Default bound on the naturals (values `0..bound`).
pub const DEFAULT_NAT_BOUND: u64 = 4;
/// Default model budget: (interpretation, assignment) pairs examined.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Bounds for scope-bounded checking: a maximum domain size per base sort
/// plus the bound on `Nat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    bounds: BTreeMap<String, usize>,
    nat_bound: u64,
}

impl Scope {
    pub fn new(bounds: BTreeMap<String, usize>, nat_bound: u64) -> Scope {
        Scope { bounds, nat_bound }
    }

    /// The same bound for every base sort of the signature.
    pub fn uniform(sig: &Signature, bound: usize, nat_bound: u64) -> Scope {
        Scope {
            bounds: sig.sorts().iter().map(|s| (s.clone(), bound)).collect(),
            nat_bound,
        }
    }

    pub fn bound(&self, sort: &str) -> Option<usize> {
        self.bounds.get(sort).copied()
    }

    pub fn bounds(&self) -> &BTreeMap<String, usize> {
        &self.bounds
    }

    pub fn nat_bound(&self) -> u64 {
        self.nat_bound
    }

    /// Componentwise comparison: true when `self` is at most `other` in every
    /// sort bound and the nat bound.
    pub fn le(&self, other: &Scope) -> bool {
        self.nat_bound <= other.nat_bound
            && self
                .bounds
                .iter()
                .all(|(sort, b)| other.bound(sort).is_some_and(|ob| *b <= ob))
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sort, bound) in &self.bounds {
            write!(f, "{sort}<={bound}, ")?;
        }
        write!(f, "nat<{}", self.nat_bound)
    }
}

/// Options for a single check call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    /// Maximum (interpretation, assignment) pairs to examine.
    pub budget: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: DEFAULT_BUDGET }
    }
}

/// Error raised before any enumeration begins.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntailmentError {
    #[error("scope gives no bound for sort `{0}`")]
    MissingSort(String),
    #[error("formulas must be eventually-free here; strip the guarantee wrapper first")]
    EventuallyPresent,
    #[error("free variable `{name}` occurs with sorts {first} and {second}")]
    InconsistentVar { name: String, first: Sort, second: Sort },
    #[error("free variable `{name}` mentions sort `{sort}` not declared in the signature")]
    UnknownVarSort { name: String, sort: String },
    #[error("evaluation failed during enumeration: {0}")]
    Eval(#[from] EvalError),
}

/// A concrete (interpretation, assignment) pair: the model returned by
/// [`check_sat`] or the counterexample returned by [`check_entailment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub interpretation: Interpretation,
    pub assignment: Assignment,
    /// Sorts of the assigned variables, for rendering.
    pub var_sorts: BTreeMap<String, Sort>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.interpretation)?;
        if !self.assignment.is_empty() {
            write!(f, "{}", self.assignment.render(&self.interpretation, &self.var_sorts))?;
        }
        Ok(())
    }
}

/// Outcome of an entailment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntailmentResult {
    /// No enumerated pair makes all hypotheses true and the conclusion false.
    Valid,
    /// The first falsifying pair in enumeration order.
    Counterexample(Box<Witness>),
    /// The budget ran out before the space was exhausted.
    ResourceExhausted { examined: u64, budget: u64 },
}

/// Outcome of a satisfiability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// The first satisfying pair in enumeration order.
    Sat(Box<Witness>),
    /// No pair within scope satisfies the formula; the searched scope is
    /// echoed so reports can say how far the search went.
    UnsatWithinScope(Scope),
    /// The budget ran out before the space was exhausted.
    ResourceExhausted { examined: u64, budget: u64 },
}

/// Streaming enumerator over all interpretations of a signature within a
/// scope, in the documented order. Lending: each `next` yields a reference
/// to the internally updated interpretation.
pub struct InterpStream<'a> {
    sig: &'a Signature,
    nat_bound: u64,
    /// Size vectors in visit order (total ascending, then lexicographic).
    size_vectors: Vec<Vec<usize>>,
    vector_index: usize,
    current: Option<Interpretation>,
    started: bool,
}

impl<'a> InterpStream<'a> {
    pub fn new(sig: &'a Signature, scope: &Scope) -> Result<InterpStream<'a>, EntailmentError> {
        let mut per_sort_bounds = Vec::with_capacity(sig.sorts().len());
        for sort in sig.sorts() {
            let bound = scope
                .bound(sort)
                .ok_or_else(|| EntailmentError::MissingSort(sort.clone()))?;
            per_sort_bounds.push(bound.clamp(1, crate::logic::interp::MAX_DOMAIN_SIZE));
        }
        let mut size_vectors = vec![Vec::new()];
        for bound in &per_sort_bounds {
            let mut extended = Vec::new();
            for vector in &size_vectors {
                for size in 1..=*bound {
                    let mut v = vector.clone();
                    v.push(size);
                    extended.push(v);
                }
            }
            size_vectors = extended;
        }
        // Stable sort keeps the lexicographic order within equal totals.
        size_vectors.sort_by_key(|v| v.iter().sum::<usize>());
        Ok(InterpStream {
            sig,
            nat_bound: scope.nat_bound().max(1),
            size_vectors,
            vector_index: 0,
            current: None,
            started: false,
        })
    }

    fn interp_for_vector(&self, index: usize) -> Interpretation {
        let sizes: BTreeMap<String, usize> = self
            .sig
            .sorts()
            .iter()
            .cloned()
            .zip(self.size_vectors[index].iter().copied())
            .collect();
        Interpretation::new(self.sig, sizes, self.nat_bound)
            .expect("sizes within 1..=MAX_DOMAIN_SIZE are always accepted")
    }

    /// Advances the table odometer. Returns false when the current size
    /// vector is exhausted.
    fn increment_tables(&mut self) -> bool {
        let interp = self.current.as_mut().expect("increment after start");
        // Least significant digit first: last predicate's last row.
        let nat_bound = interp.nat_bound();
        let sizes = interp.sizes().clone();
        let card = |sort: &Sort| -> u64 {
            match sort {
                Sort::Base(s) => sizes[s] as u64,
                Sort::Nat => nat_bound,
                Sort::Set(s) => 1u64 << sizes[s],
            }
        };
        for decl in self.sig.preds().iter().rev() {
            let table = interp.pred_tables_mut().get_mut(&decl.name).expect("table exists");
            for row in (0..table.rows()).rev() {
                if table.cell(row) == 0 {
                    table.set_cell(row, 1);
                    return true;
                }
                table.set_cell(row, 0);
            }
        }
        for decl in self.sig.funcs().iter().rev() {
            let radix = card(&decl.result);
            let table = interp.func_tables_mut().get_mut(&decl.name).expect("table exists");
            for row in (0..table.rows()).rev() {
                let next = table.cell(row) + 1;
                if next < radix {
                    table.set_cell(row, next);
                    return true;
                }
                table.set_cell(row, 0);
            }
        }
        false
    }

    /// The next interpretation, or `None` when the scope is exhausted.
    pub fn next(&mut self) -> Option<&Interpretation> {
        if !self.started {
            self.started = true;
            if self.size_vectors.is_empty() {
                return None;
            }
            self.current = Some(self.interp_for_vector(0));
            return self.current.as_ref();
        }
        if self.current.is_none() {
            return None;
        }
        if self.increment_tables() {
            return self.current.as_ref();
        }
        self.vector_index += 1;
        if self.vector_index >= self.size_vectors.len() {
            self.current = None;
            return None;
        }
        self.current = Some(self.interp_for_vector(self.vector_index));
        self.current.as_ref()
    }
}

/// Collects up to `cap` interpretations. The boolean is true when the stream
/// was truncated by the cap.
pub fn enumerate_interpretations(
    sig: &Signature,
    scope: &Scope,
    cap: Option<u64>,
) -> Result<(Vec<Interpretation>, bool), EntailmentError> {
    let mut stream = InterpStream::new(sig, scope)?;
    let mut out = Vec::new();
    while let Some(interp) = stream.next() {
        if let Some(cap) = cap {
            if out.len() as u64 >= cap {
                return Ok((out, true));
            }
        }
        out.push(interp.clone());
    }
    Ok((out, false))
}

/// Free variables of a formula set, with consistency checking across
/// occurrences. Returned in name order.
fn collect_free_vars(
    formulas: &[&Formula],
    sig: &Signature,
) -> Result<BTreeMap<String, Sort>, EntailmentError> {
    let mut vars: BTreeMap<String, Sort> = BTreeMap::new();
    for formula in formulas {
        for var in free_vars(formula) {
            if !sig.sort_valid(&var.sort) {
                let sort = match &var.sort {
                    Sort::Base(s) | Sort::Set(s) => s.clone(),
                    Sort::Nat => unreachable!("Nat is always valid"),
                };
                return Err(EntailmentError::UnknownVarSort { name: var.name, sort });
            }
            match vars.get(&var.name) {
                None => {
                    vars.insert(var.name, var.sort);
                }
                Some(existing) if *existing == var.sort => {}
                Some(existing) => {
                    return Err(EntailmentError::InconsistentVar {
                        name: var.name,
                        first: existing.clone(),
                        second: var.sort,
                    })
                }
            }
        }
    }
    Ok(vars)
}

/// Enumerates assignments for the given variables over one interpretation,
/// lending a reference to the internally updated assignment.
struct AssignStream {
    domains: Vec<(String, Vec<Value>)>,
    indices: Vec<usize>,
    assignment: Assignment,
    started: bool,
    done: bool,
}

impl AssignStream {
    fn new(vars: &BTreeMap<String, Sort>, interp: &Interpretation) -> AssignStream {
        let domains: Vec<(String, Vec<Value>)> = vars
            .iter()
            .map(|(name, sort)| (name.clone(), interp.sort_values(sort)))
            .collect();
        let mut assignment = Assignment::new();
        for (name, values) in &domains {
            if let Some(first) = values.first() {
                assignment.insert(name.clone(), *first);
            }
        }
        let indices = vec![0; domains.len()];
        AssignStream { domains, indices, assignment, started: false, done: false }
    }

    fn next(&mut self) -> Option<&Assignment> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            // A variable with an empty domain cannot be assigned; domains are
            // never empty under valid interpretations.
            if self.domains.iter().any(|(_, values)| values.is_empty()) {
                self.done = true;
                return None;
            }
            return Some(&self.assignment);
        }
        // Increment from the last variable (least significant).
        for pos in (0..self.domains.len()).rev() {
            let (name, values) = &self.domains[pos];
            if self.indices[pos] + 1 < values.len() {
                self.indices[pos] += 1;
                self.assignment.insert(name.clone(), values[self.indices[pos]]);
                return Some(&self.assignment);
            }
            self.indices[pos] = 0;
            self.assignment.insert(name.clone(), values[0]);
        }
        self.done = true;
        None
    }
}

fn ensure_eventually_free(formulas: &[&Formula]) -> Result<(), EntailmentError> {
    if formulas.iter().any(|f| f.count_eventually() > 0) {
        return Err(EntailmentError::EventuallyPresent);
    }
    Ok(())
}

/// Checks whether the hypotheses entail the conclusion within scope.
///
/// Returns [`EntailmentResult::Valid`] exactly when no enumerated
/// (interpretation, assignment) pair makes every hypothesis true and the
/// conclusion false; otherwise the first falsifying pair in enumeration
/// order, which is minimal in total domain size.
///
/// Two sound shortcuts skip enumeration entirely: a conclusion that is
/// literally `true`, and a conclusion alpha-equivalent to one of the
/// hypotheses (or a hypothesis that is literally `false`). These hold at
/// every scope, so the verdict is unchanged.
pub fn check_entailment(
    hypotheses: &[Formula],
    conclusion: &Formula,
    sig: &Signature,
    scope: &Scope,
    options: &CheckOptions,
) -> Result<EntailmentResult, EntailmentError> {
    let mut all: Vec<&Formula> = hypotheses.iter().collect();
    all.push(conclusion);
    ensure_eventually_free(&all)?;
    let vars = collect_free_vars(&all, sig)?;
    // Scope validation happens even on the shortcut paths.
    let mut stream = InterpStream::new(sig, scope)?;

    if matches!(conclusion, Formula::True)
        || hypotheses.iter().any(|h| matches!(h, Formula::False) || alpha_eq(h, conclusion))
    {
        return Ok(EntailmentResult::Valid);
    }

    let mut examined: u64 = 0;
    while let Some(interp) = stream.next() {
        let mut assignments = AssignStream::new(&vars, interp);
        while let Some(assignment) = assignments.next() {
            if examined >= options.budget {
                return Ok(EntailmentResult::ResourceExhausted {
                    examined,
                    budget: options.budget,
                });
            }
            examined += 1;
            let mut hyps_hold = true;
            for hyp in hypotheses {
                if !evaluate(hyp, interp, assignment)? {
                    hyps_hold = false;
                    break;
                }
            }
            if hyps_hold && !evaluate(conclusion, interp, assignment)? {
                return Ok(EntailmentResult::Counterexample(Box::new(Witness {
                    interpretation: interp.clone(),
                    assignment: assignment.clone(),
                    var_sorts: vars.clone(),
                })));
            }
        }
    }
    Ok(EntailmentResult::Valid)
}

/// Searches for a model of the formula within scope.
pub fn check_sat(
    formula: &Formula,
    sig: &Signature,
    scope: &Scope,
    options: &CheckOptions,
) -> Result<SatResult, EntailmentError> {
    ensure_eventually_free(&[formula])?;
    let vars = collect_free_vars(&[formula], sig)?;
    let mut stream = InterpStream::new(sig, scope)?;
    let mut examined: u64 = 0;
    while let Some(interp) = stream.next() {
        let mut assignments = AssignStream::new(&vars, interp);
        while let Some(assignment) = assignments.next() {
            if examined >= options.budget {
                return Ok(SatResult::ResourceExhausted { examined, budget: options.budget });
            }
            examined += 1;
            if evaluate(formula, interp, assignment)? {
                return Ok(SatResult::Sat(Box::new(Witness {
                    interpretation: interp.clone(),
                    assignment: assignment.clone(),
                    var_sorts: vars.clone(),
                })));
            }
        }
    }
    Ok(SatResult::UnsatWithinScope(scope.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;

    fn single_sort_sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("S").unwrap();
        sig
    }

    #[test]
    fn bare_sort_counts_interpretations_per_size() {
        // No symbols: one interpretation per domain size 1..=3.
        let sig = single_sort_sig();
        let scope = Scope::uniform(&sig, 3, 4);
        let (interps, truncated) = enumerate_interpretations(&sig, &scope, None).unwrap();
        assert!(!truncated);
        assert_eq!(interps.len(), 3);
        let sizes: Vec<usize> = interps.iter().map(|i| i.size("S").unwrap()).collect();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn unary_predicate_at_scope_one_gives_two() {
        // 2^1 predicate tables over the single-element domain.
        let mut sig = single_sort_sig();
        sig.add_pred("P", vec![Sort::base("S")]).unwrap();
        let scope = Scope::uniform(&sig, 1, 4);
        let (interps, _) = enumerate_interpretations(&sig, &scope, None).unwrap();
        assert_eq!(interps.len(), 2);
    }

    #[test]
    fn unary_predicate_at_scope_two_gives_six() {
        // 2^1 tables at size 1 plus 2^2 at size 2.
        let mut sig = single_sort_sig();
        sig.add_pred("P", vec![Sort::base("S")]).unwrap();
        let scope = Scope::uniform(&sig, 2, 4);
        let (interps, _) = enumerate_interpretations(&sig, &scope, None).unwrap();
        assert_eq!(interps.len(), 6);
    }

    #[test]
    fn truncation_is_flagged() {
        let mut sig = single_sort_sig();
        sig.add_pred("P", vec![Sort::base("S")]).unwrap();
        let scope = Scope::uniform(&sig, 2, 4);
        let (interps, truncated) = enumerate_interpretations(&sig, &scope, Some(2)).unwrap();
        assert_eq!(interps.len(), 2);
        assert!(truncated);
    }

    #[test]
    fn size_vectors_ascend_by_total_then_lexicographically() {
        let mut sig = Signature::new();
        sig.add_sort("A").unwrap();
        sig.add_sort("B").unwrap();
        let scope = Scope::uniform(&sig, 2, 2);
        let (interps, _) = enumerate_interpretations(&sig, &scope, None).unwrap();
        let vectors: Vec<(usize, usize)> =
            interps.iter().map(|i| (i.size("A").unwrap(), i.size("B").unwrap())).collect();
        assert_eq!(vectors, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let mut sig = single_sort_sig();
        sig.add_pred("P", vec![Sort::base("S")]).unwrap();
        sig.add_func("f", vec![Sort::base("S")], Sort::base("S")).unwrap();
        let scope = Scope::uniform(&sig, 2, 2);
        let first = enumerate_interpretations(&sig, &scope, None).unwrap();
        let second = enumerate_interpretations(&sig, &scope, None).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn false_is_unsat_within_scope() {
        let sig = single_sort_sig();
        let scope = Scope::uniform(&sig, 2, 4);
        assert_eq!(
            check_sat(&Formula::False, &sig, &scope, &CheckOptions::default()).unwrap(),
            SatResult::UnsatWithinScope(scope)
        );
    }

    #[test]
    fn trivial_existential_has_a_minimal_model() {
        let sig = single_sort_sig();
        let scope = Scope::uniform(&sig, 3, 4);
        let f = Formula::exists(
            "x",
            Sort::base("S"),
            Formula::Eq(Term::var("x", Sort::base("S")), Term::var("x", Sort::base("S"))),
        );
        match check_sat(&f, &sig, &scope, &CheckOptions::default()).unwrap() {
            SatResult::Sat(witness) => assert_eq!(witness.interpretation.size("S"), Some(1)),
            other => panic!("expected a model, got {other:?}"),
        }
    }

    #[test]
    fn nat_window_finds_the_witness_value() {
        // x <= 2 and not (x <= 1) is satisfied first by x = 2.
        let sig = Signature::new();
        let scope = Scope::uniform(&sig, 3, 4);
        let x = Term::var("x", Sort::Nat);
        let f = Formula::Le(x.clone(), Term::Nat(2))
            .and(Formula::Le(x, Term::Nat(1)).not());
        match check_sat(&f, &sig, &scope, &CheckOptions::default()).unwrap() {
            SatResult::Sat(witness) => {
                assert_eq!(witness.assignment.get("x"), Some(Value::Nat(2)));
            }
            other => panic!("expected a model, got {other:?}"),
        }
    }

    /// Rover vocabulary used by the entailment examples.
    fn rover_sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("Location").unwrap();
        sig.add_sort("Plan").unwrap();
        sig.add_func("goal", vec![], Sort::base("Location")).unwrap();
        sig.add_pred("contains", vec![Sort::base("Plan"), Sort::base("Location")]).unwrap();
        sig
    }

    fn plan() -> Sort {
        Sort::base("Plan")
    }

    fn all_plans_reach_goal(set_var: &str) -> Formula {
        Formula::forall(
            "p",
            plan(),
            Formula::In(Term::var("p", plan()), Term::var(set_var, Sort::set("Plan")))
                .implies(Formula::pred(
                    "contains",
                    vec![Term::var("p", plan()), Term::cnst("goal")],
                )),
        )
    }

    #[test]
    fn identical_hypothesis_and_conclusion_are_valid() {
        let sig = rover_sig();
        let scope = Scope::uniform(&sig, 3, 4);
        let g = all_plans_reach_goal("plans");
        let result =
            check_entailment(&[g.clone()], &g, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(result, EntailmentResult::Valid);
    }

    #[test]
    fn weakened_existential_yields_a_size_minimal_counterexample() {
        // exists p in plans reaching goal does NOT entail all of them do; the
        // first counterexample needs only two plans and one location.
        let sig = rover_sig();
        let scope = Scope::uniform(&sig, 3, 4);
        let hyp = Formula::exists(
            "p",
            plan(),
            Formula::In(Term::var("p", plan()), Term::var("plans", Sort::set("Plan"))).and(
                Formula::pred("contains", vec![Term::var("p", plan()), Term::cnst("goal")]),
            ),
        );
        let concl = all_plans_reach_goal("plans");
        match check_entailment(&[hyp.clone()], &concl, &sig, &scope, &CheckOptions::default())
            .unwrap()
        {
            EntailmentResult::Counterexample(witness) => {
                assert!(witness.interpretation.size("Plan").unwrap() <= 2);
                assert_eq!(witness.interpretation.size("Location"), Some(1));
                // The witness genuinely falsifies the implication.
                assert_eq!(
                    evaluate(&hyp, &witness.interpretation, &witness.assignment),
                    Ok(true)
                );
                assert_eq!(
                    evaluate(&concl, &witness.interpretation, &witness.assignment),
                    Ok(false)
                );
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }

    #[test]
    fn exhausted_budget_reports_examined_pairs() {
        // A tautological but non-literal conclusion forces full enumeration;
        // a tiny budget must stop it and report exactly that many pairs.
        let sig = rover_sig();
        let scope = Scope::uniform(&sig, 3, 4);
        let plans = Term::var("plans", Sort::set("Plan"));
        let concl = Formula::Eq(plans.clone(), plans);
        let result =
            check_entailment(&[], &concl, &sig, &scope, &CheckOptions { budget: 10 }).unwrap();
        assert_eq!(result, EntailmentResult::ResourceExhausted { examined: 10, budget: 10 });
    }

    #[test]
    fn counterexamples_persist_at_larger_scopes() {
        // Monotonicity: a counterexample at scope 2 rules out Valid at 3.
        let sig = rover_sig();
        let hyp = Formula::True;
        let concl = all_plans_reach_goal("plans");
        for bound in [2, 3] {
            let scope = Scope::uniform(&sig, bound, 4);
            let result =
                check_entailment(&[hyp.clone()], &concl, &sig, &scope, &CheckOptions::default())
                    .unwrap();
            assert!(
                matches!(result, EntailmentResult::Counterexample(_)),
                "scope {bound}: {result:?}"
            );
        }
    }

    #[test]
    fn results_are_reproducible() {
        let sig = rover_sig();
        let scope = Scope::uniform(&sig, 2, 3);
        let concl = all_plans_reach_goal("plans");
        let first =
            check_entailment(&[], &concl, &sig, &scope, &CheckOptions::default()).unwrap();
        let second =
            check_entailment(&[], &concl, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn missing_scope_bound_is_an_error() {
        let sig = rover_sig();
        let scope = Scope::new([("Plan".to_string(), 2)].into(), 4);
        let err = check_entailment(&[], &Formula::False, &sig, &scope, &CheckOptions::default())
            .unwrap_err();
        assert_eq!(err, EntailmentError::MissingSort("Location".into()));
    }

    #[test]
    fn eventually_is_rejected_up_front() {
        let sig = rover_sig();
        let scope = Scope::uniform(&sig, 2, 2);
        let err = check_entailment(
            &[],
            &Formula::True.eventually(),
            &sig,
            &scope,
            &CheckOptions::default(),
        )
        .unwrap_err();
        assert_eq!(err, EntailmentError::EventuallyPresent);
    }
}
