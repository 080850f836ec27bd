//! Well-sortedness checking for terms and formulas.
//!
//! Checking collects every violation instead of stopping at the first, so a
//! caller can report them all at once.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::{Formula, Term};
use super::{Signature, Sort};

/// Sorts of the free variables a formula may mention (ports and other
/// ambient names). Quantifiers extend it locally.
pub type VarContext = BTreeMap<String, Sort>;

/// Where `eventually` may legally appear.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventuallyPolicy {
    /// No `eventually` anywhere (assumptions, obligation formulas).
    Forbidden,
    /// A single outermost `eventually` is allowed (composed guarantees).
    TopLevelOnly,
}

/// A single well-sortedness violation, with the offending subterm or
/// subformula rendered for the report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("unknown symbol `{name}` in `{at}`")]
    UnknownSymbol { name: String, at: String },
    #[error("`{name}` expects {expected} argument(s), got {got} in `{at}`")]
    Arity { name: String, expected: usize, got: usize, at: String },
    #[error("expected sort {expected}, got {got} in `{at}`")]
    Mismatch { expected: Sort, got: Sort, at: String },
    #[error("variable `{name}` has sort {found} here but {declared} in context")]
    VarSortConflict { name: String, found: Sort, declared: Sort },
    #[error("unbound variable `{name}` in `{at}`")]
    UnboundVar { name: String, at: String },
    #[error("{op} requires Nat operands, got {got} in `{at}`")]
    NotNat { op: &'static str, got: Sort, at: String },
    #[error("equality requires both sides of one sort, got {left} and {right} in `{at}`")]
    EqSortMismatch { left: Sort, right: Sort, at: String },
    #[error("`in` requires a set-of sort on the right, got {got} in `{at}`")]
    InNeedsSet { got: Sort, at: String },
    #[error("quantifier cannot bind `{name}` of set sort {sort}; sets are values, not domains")]
    QuantifierOverSet { name: String, sort: Sort },
    #[error("`eventually` is only legal as the outermost connective of a guarantee")]
    EventuallyPosition,
}

/// The sort of a term under a signature and a free-variable context.
///
/// Fails on unknown symbols, arity violations, argument sort mismatches, and
/// variables that disagree with the context.
pub fn term_sort(term: &Term, sig: &Signature, ctx: &VarContext) -> Result<Sort, SortError> {
    let mut errors = Vec::new();
    let sort = term_sort_collect(term, sig, ctx, &mut errors);
    match errors.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(sort.expect("no errors implies a sort")),
    }
}

/// Collecting variant used by formula checking: pushes violations and returns
/// the sort when one can still be determined.
fn term_sort_collect(
    term: &Term,
    sig: &Signature,
    ctx: &VarContext,
    errors: &mut Vec<SortError>,
) -> Option<Sort> {
    match term {
        Term::Nat(_) => Some(Sort::Nat),
        Term::Var(v) => match ctx.get(&v.name) {
            Some(declared) if *declared == v.sort => Some(v.sort.clone()),
            Some(declared) => {
                errors.push(SortError::VarSortConflict {
                    name: v.name.clone(),
                    found: v.sort.clone(),
                    declared: declared.clone(),
                });
                None
            }
            None => {
                errors.push(SortError::UnboundVar { name: v.name.clone(), at: term.to_string() });
                None
            }
        },
        Term::App(name, args) => {
            let Some(decl) = sig.func(name) else {
                errors.push(SortError::UnknownSymbol { name: name.clone(), at: term.to_string() });
                // Still walk the arguments so their own violations surface.
                for arg in args {
                    term_sort_collect(arg, sig, ctx, errors);
                }
                return None;
            };
            if decl.params.len() != args.len() {
                errors.push(SortError::Arity {
                    name: name.clone(),
                    expected: decl.params.len(),
                    got: args.len(),
                    at: term.to_string(),
                });
            }
            for (arg, expected) in args.iter().zip(&decl.params) {
                if let Some(got) = term_sort_collect(arg, sig, ctx, errors) {
                    if got != *expected {
                        errors.push(SortError::Mismatch {
                            expected: expected.clone(),
                            got,
                            at: term.to_string(),
                        });
                    }
                }
            }
            for arg in args.iter().skip(decl.params.len()) {
                term_sort_collect(arg, sig, ctx, errors);
            }
            Some(decl.result.clone())
        }
    }
}

fn check_formula(
    formula: &Formula,
    sig: &Signature,
    ctx: &mut VarContext,
    top: bool,
    policy: EventuallyPolicy,
    errors: &mut Vec<SortError>,
) {
    match formula {
        Formula::True | Formula::False => {}
        Formula::Pred(name, args) => {
            let Some(decl) = sig.pred(name) else {
                errors.push(SortError::UnknownSymbol {
                    name: name.clone(),
                    at: formula.to_string(),
                });
                for arg in args {
                    term_sort_collect(arg, sig, ctx, errors);
                }
                return;
            };
            if decl.params.len() != args.len() {
                errors.push(SortError::Arity {
                    name: name.clone(),
                    expected: decl.params.len(),
                    got: args.len(),
                    at: formula.to_string(),
                });
            }
            for (arg, expected) in args.iter().zip(&decl.params) {
                if let Some(got) = term_sort_collect(arg, sig, ctx, errors) {
                    if got != *expected {
                        errors.push(SortError::Mismatch {
                            expected: expected.clone(),
                            got,
                            at: formula.to_string(),
                        });
                    }
                }
            }
            for arg in args.iter().skip(decl.params.len()) {
                term_sort_collect(arg, sig, ctx, errors);
            }
        }
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let sa = term_sort_collect(a, sig, ctx, errors);
            let sb = term_sort_collect(b, sig, ctx, errors);
            if let (Some(sa), Some(sb)) = (sa, sb) {
                if sa != sb {
                    errors.push(SortError::EqSortMismatch {
                        left: sa,
                        right: sb,
                        at: formula.to_string(),
                    });
                }
            }
        }
        Formula::Le(a, b) | Formula::Lt(a, b) => {
            let op = if matches!(formula, Formula::Le(..)) { "<=" } else { "<" };
            for t in [a, b] {
                if let Some(sort) = term_sort_collect(t, sig, ctx, errors) {
                    if sort != Sort::Nat {
                        errors.push(SortError::NotNat { op, got: sort, at: formula.to_string() });
                    }
                }
            }
        }
        Formula::In(elem, set) => {
            let se = term_sort_collect(elem, sig, ctx, errors);
            let ss = term_sort_collect(set, sig, ctx, errors);
            match (se, ss) {
                (Some(se), Some(Sort::Set(elem_sort))) => {
                    if se != Sort::Base(elem_sort.clone()) {
                        errors.push(SortError::Mismatch {
                            expected: Sort::Base(elem_sort),
                            got: se,
                            at: formula.to_string(),
                        });
                    }
                }
                (_, Some(other)) => {
                    errors.push(SortError::InNeedsSet { got: other, at: formula.to_string() });
                }
                _ => {}
            }
        }
        Formula::Not(g) => check_formula(g, sig, ctx, false, policy, errors),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_formula(a, sig, ctx, false, policy, errors);
            check_formula(b, sig, ctx, false, policy, errors);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            if !v.sort.quantifiable() {
                errors.push(SortError::QuantifierOverSet {
                    name: v.name.clone(),
                    sort: v.sort.clone(),
                });
            }
            if let Sort::Base(s) | Sort::Set(s) = &v.sort {
                if !sig.has_sort(s) {
                    errors.push(SortError::UnknownSymbol {
                        name: s.clone(),
                        at: format!("binder `{} : {}`", v.name, v.sort),
                    });
                }
            }
            let shadowed = ctx.insert(v.name.clone(), v.sort.clone());
            check_formula(body, sig, ctx, false, policy, errors);
            match shadowed {
                Some(sort) => {
                    ctx.insert(v.name.clone(), sort);
                }
                None => {
                    ctx.remove(&v.name);
                }
            }
        }
        Formula::Eventually(g) => {
            if !(top && policy == EventuallyPolicy::TopLevelOnly) {
                errors.push(SortError::EventuallyPosition);
            }
            check_formula(g, sig, ctx, false, policy, errors);
        }
    }
}

/// Checks a formula against a signature and free-variable context, reporting
/// every violation. On success the formula is well-sorted as annotated.
pub fn check_well_sorted(
    formula: &Formula,
    sig: &Signature,
    ctx: &VarContext,
    policy: EventuallyPolicy,
) -> Result<(), Vec<SortError>> {
    let mut errors = Vec::new();
    let mut ctx = ctx.clone();
    check_formula(formula, sig, &mut ctx, true, policy, &mut errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}
