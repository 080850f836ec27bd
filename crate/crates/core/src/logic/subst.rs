//! Capture-avoiding substitution of terms for free variables.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ast::{free_vars, term_vars, Formula, Term, Var};
use super::check::{term_sort, VarContext};
use super::{Signature, Sort};

/// Error raised by [`substitute`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("replacement for `{var}` has sort {got}, expected {expected}")]
    SortMismatch { var: String, expected: Sort, got: Sort },
    #[error("replacement term for `{var}` is not well-sorted: {detail}")]
    BadTerm { var: String, detail: String },
}

/// A substitution: free-variable names mapped to replacement terms.
pub type Binding = BTreeMap<String, Term>;

fn subst_term(term: &Term, binding: &Binding, shadowed: &[String]) -> Term {
    match term {
        Term::Var(v) => {
            if shadowed.iter().any(|s| *s == v.name) {
                return term.clone();
            }
            match binding.get(&v.name) {
                Some(replacement) => replacement.clone(),
                None => term.clone(),
            }
        }
        Term::App(name, args) => Term::App(
            name.clone(),
            args.iter().map(|a| subst_term(a, binding, shadowed)).collect(),
        ),
        Term::Nat(n) => Term::Nat(*n),
    }
}

/// Picks a fresh name for `base` by appending the smallest numeric suffix
/// (starting at 1) not present in `avoid`.
fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    // Strip an existing numeric suffix so `p1` freshens to `p2`, not `p11`.
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    for i in 1u64.. {
        let candidate = format!("{stem}{i}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!("suffixes are unbounded");
}

fn subst_formula(
    formula: &Formula,
    binding: &Binding,
    shadowed: &mut Vec<String>,
) -> Formula {
    match formula {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Pred(name, args) => Formula::Pred(
            name.clone(),
            args.iter().map(|a| subst_term(a, binding, shadowed)).collect(),
        ),
        Formula::Eq(a, b) => Formula::Eq(
            subst_term(a, binding, shadowed),
            subst_term(b, binding, shadowed),
        ),
        Formula::Neq(a, b) => Formula::Neq(
            subst_term(a, binding, shadowed),
            subst_term(b, binding, shadowed),
        ),
        Formula::Le(a, b) => Formula::Le(
            subst_term(a, binding, shadowed),
            subst_term(b, binding, shadowed),
        ),
        Formula::Lt(a, b) => Formula::Lt(
            subst_term(a, binding, shadowed),
            subst_term(b, binding, shadowed),
        ),
        Formula::In(a, b) => Formula::In(
            subst_term(a, binding, shadowed),
            subst_term(b, binding, shadowed),
        ),
        Formula::Not(g) => subst_formula(g, binding, shadowed).not(),
        Formula::And(a, b) => {
            subst_formula(a, binding, shadowed).and(subst_formula(b, binding, shadowed))
        }
        Formula::Or(a, b) => {
            subst_formula(a, binding, shadowed).or(subst_formula(b, binding, shadowed))
        }
        Formula::Implies(a, b) => {
            subst_formula(a, binding, shadowed).implies(subst_formula(b, binding, shadowed))
        }
        Formula::Eventually(g) => Formula::Eventually(Box::new(subst_formula(g, binding, shadowed))),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            // Bindings for the bound name do not reach under the binder.
            let active: Vec<&Term> = binding
                .iter()
                .filter(|(name, _)| *name != &v.name && !shadowed.contains(name))
                .filter(|(name, _)| {
                    free_vars(body).iter().any(|fv| fv.name == **name)
                })
                .map(|(_, t)| t)
                .collect();
            // The binder captures a replacement exactly when its name occurs
            // free in an active replacement term; rename it first then.
            let captures = active
                .iter()
                .any(|t| term_vars(t).iter().any(|tv| tv.name == v.name));
            let (var, body) = if captures {
                let mut avoid: BTreeSet<String> =
                    free_vars(body).into_iter().map(|fv| fv.name).collect();
                for t in &active {
                    avoid.extend(term_vars(t).into_iter().map(|tv| tv.name));
                }
                avoid.extend(binding.keys().cloned());
                let fresh = fresh_name(&v.name, &avoid);
                let renamed = Var::new(fresh.clone(), v.sort.clone());
                let mut rename = Binding::new();
                rename.insert(v.name.clone(), Term::Var(renamed.clone()));
                let body = subst_formula(body, &rename, &mut Vec::new());
                (renamed, body)
            } else {
                (v.clone(), (**body).clone())
            };
            shadowed.push(var.name.clone());
            let body = subst_formula(&body, binding, shadowed);
            shadowed.pop();
            match formula {
                Formula::Forall(..) => Formula::Forall(var, Box::new(body)),
                _ => Formula::Exists(var, Box::new(body)),
            }
        }
    }
}

/// Replaces free occurrences of the bound names by their terms, renaming
/// binders (smallest unused numeric suffix) where a replacement would be
/// captured. Bound occurrences are never replaced.
///
/// Every replacement term must be well-sorted under `ctx` and match the sort
/// its variable has where it occurs; the check runs before any rewriting.
pub fn substitute(
    formula: &Formula,
    binding: &Binding,
    sig: &Signature,
    ctx: &VarContext,
) -> Result<Formula, SubstError> {
    let occurring = free_vars(formula);
    for (name, replacement) in binding {
        let Some(var) = occurring.iter().find(|v| v.name == *name) else {
            continue;
        };
        let got = term_sort(replacement, sig, ctx).map_err(|e| SubstError::BadTerm {
            var: name.clone(),
            detail: e.to_string(),
        })?;
        if got != var.sort {
            return Err(SubstError::SortMismatch {
                var: name.clone(),
                expected: var.sort.clone(),
                got,
            });
        }
    }
    Ok(subst_formula(formula, binding, &mut Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::free_vars;

    fn sig_with_plan() -> Signature {
        let mut sig = Signature::new();
        sig.add_sort("Plan").unwrap();
        sig
    }

    fn plan() -> Sort {
        Sort::base("Plan")
    }

    #[test]
    fn replaces_free_occurrences_only() {
        // (forall p . p in S) with p ↦ q leaves the bound p alone.
        let sig = sig_with_plan();
        let f = Formula::forall(
            "p",
            plan(),
            Formula::In(Term::var("p", plan()), Term::var("S", Sort::set("Plan"))),
        );
        let mut binding = Binding::new();
        binding.insert("p".into(), Term::var("q", plan()));
        let ctx: VarContext = [("q".to_string(), plan())].into();
        assert_eq!(substitute(&f, &binding, &sig, &ctx).unwrap(), f);
    }

    #[test]
    fn renames_binders_that_would_capture() {
        // (exists y . x = y)[x ↦ y]  ==>  exists y1 . y = y1
        let sig = sig_with_plan();
        let f = Formula::exists(
            "y",
            plan(),
            Formula::Eq(Term::var("x", plan()), Term::var("y", plan())),
        );
        let mut binding = Binding::new();
        binding.insert("x".into(), Term::var("y", plan()));
        let ctx: VarContext = [("y".to_string(), plan())].into();
        let got = substitute(&f, &binding, &sig, &ctx).unwrap();
        let expected = Formula::exists(
            "y1",
            plan(),
            Formula::Eq(Term::var("y", plan()), Term::var("y1", plan())),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn fresh_names_take_the_smallest_unused_suffix() {
        // (exists y . x = y and y1 = y1)[x ↦ y]: y1 is taken, so use y2.
        let sig = sig_with_plan();
        let f = Formula::exists(
            "y",
            plan(),
            Formula::Eq(Term::var("x", plan()), Term::var("y", plan()))
                .and(Formula::Eq(Term::var("y1", plan()), Term::var("y1", plan()))),
        );
        let mut binding = Binding::new();
        binding.insert("x".into(), Term::var("y", plan()));
        let ctx: VarContext =
            [("y".to_string(), plan()), ("y1".to_string(), plan())].into();
        let got = substitute(&f, &binding, &sig, &ctx).unwrap();
        let expected = Formula::exists(
            "y2",
            plan(),
            Formula::Eq(Term::var("y", plan()), Term::var("y2", plan()))
                .and(Formula::Eq(Term::var("y1", plan()), Term::var("y1", plan()))),
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn free_vars_after_substitution_follow_the_classic_law() {
        // free(f[x ↦ t]) = (free(f) \ {x}) ∪ free(t) when x occurs free.
        let sig = sig_with_plan();
        let f = Formula::In(Term::var("x", plan()), Term::var("S", Sort::set("Plan")));
        let mut binding = Binding::new();
        binding.insert("x".into(), Term::var("z", plan()));
        let ctx: VarContext = [("z".to_string(), plan())].into();
        let got = substitute(&f, &binding, &sig, &ctx).unwrap();
        let names: Vec<String> = free_vars(&got).into_iter().map(|v| v.name).collect();
        assert_eq!(names, vec!["S".to_string(), "z".to_string()]);
    }

    #[test]
    fn sort_mismatch_is_rejected_before_rewriting() {
        let sig = sig_with_plan();
        let f = Formula::Eq(Term::var("x", plan()), Term::var("x", plan()));
        let mut binding = Binding::new();
        binding.insert("x".into(), Term::Nat(3));
        let ctx = VarContext::new();
        assert_eq!(
            substitute(&f, &binding, &sig, &ctx),
            Err(SubstError::SortMismatch { var: "x".into(), expected: plan(), got: Sort::Nat })
        );
    }
}
