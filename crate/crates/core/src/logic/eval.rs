//! Ground evaluation of Eventually-free formulas against a finite
//! interpretation and an assignment of the free variables.

use thiserror::Error;

use super::ast::{Formula, Term, Var};
use super::interp::{Assignment, Interpretation, Value};
use super::Sort;

/// Error raised by [`evaluate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` has no assigned value")]
    UnassignedVar(String),
    #[error("`eventually` has no meaning in ground evaluation; monitors strip it first")]
    Eventually,
    #[error("symbol `{0}` has no table in this interpretation")]
    UnknownSymbol(String),
    #[error("value {value:?} does not fit where sort {sort} was expected (term `{at}`)")]
    SortConfusion { value: Value, sort: Sort, at: String },
}

struct Env<'a> {
    interp: &'a Interpretation,
    base: &'a Assignment,
    bound: Vec<(String, Value)>,
}

impl Env<'_> {
    fn lookup(&self, name: &str) -> Option<Value> {
        // Innermost binder wins; fall back to the fixed assignment.
        for (bound_name, value) in self.bound.iter().rev() {
            if bound_name == name {
                return Some(*value);
            }
        }
        self.base.get(name)
    }
}

fn eval_term(term: &Term, env: &Env<'_>) -> Result<Value, EvalError> {
    match term {
        Term::Nat(n) => Ok(Value::Nat(*n)),
        Term::Var(Var { name, .. }) => {
            env.lookup(name).ok_or_else(|| EvalError::UnassignedVar(name.clone()))
        }
        Term::App(name, args) => {
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval_term(arg, env)?);
            }
            // The result sort is read from the table itself so evaluation
            // needs no separate signature.
            let table = env
                .interp
                .func_table(name)
                .ok_or_else(|| EvalError::UnknownSymbol(name.clone()))?;
            let result = table.result().cloned().expect("function tables store a result sort");
            env.interp.func_value(name, &values, &result).ok_or_else(|| {
                EvalError::SortConfusion {
                    value: values.first().copied().unwrap_or(Value::Nat(0)),
                    sort: result.clone(),
                    at: term.to_string(),
                }
            })
        }
    }
}

fn expect_nat(term: &Term, env: &Env<'_>) -> Result<u64, EvalError> {
    match eval_term(term, env)? {
        Value::Nat(n) => Ok(n),
        other => Err(EvalError::SortConfusion {
            value: other,
            sort: Sort::Nat,
            at: term.to_string(),
        }),
    }
}

fn eval_formula(formula: &Formula, env: &mut Env<'_>) -> Result<bool, EvalError> {
    match formula {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Pred(name, args) => {
            let mut values = Vec::with_capacity(args.len());
            for arg in args {
                values.push(eval_term(arg, env)?);
            }
            env.interp
                .pred_holds(name, &values)
                .ok_or_else(|| EvalError::UnknownSymbol(name.clone()))
        }
        Formula::Eq(a, b) => Ok(eval_term(a, env)? == eval_term(b, env)?),
        Formula::Neq(a, b) => Ok(eval_term(a, env)? != eval_term(b, env)?),
        Formula::Le(a, b) => Ok(expect_nat(a, env)? <= expect_nat(b, env)?),
        Formula::Lt(a, b) => Ok(expect_nat(a, env)? < expect_nat(b, env)?),
        Formula::In(elem, set) => {
            let elem_value = eval_term(elem, env)?;
            let set_value = eval_term(set, env)?;
            match (elem_value, set_value) {
                (Value::Elem(i), Value::Set(mask)) => Ok(mask & (1 << i) != 0),
                (e, s) => Err(EvalError::SortConfusion {
                    value: if matches!(s, Value::Set(_)) { e } else { s },
                    sort: Sort::Set("?".into()),
                    at: formula.to_string(),
                }),
            }
        }
        Formula::Not(g) => Ok(!eval_formula(g, env)?),
        Formula::And(a, b) => Ok(eval_formula(a, env)? && eval_formula(b, env)?),
        Formula::Or(a, b) => Ok(eval_formula(a, env)? || eval_formula(b, env)?),
        Formula::Implies(a, b) => Ok(!eval_formula(a, env)? || eval_formula(b, env)?),
        Formula::Forall(var, body) => {
            for value in quantifier_domain(var, env.interp)? {
                env.bound.push((var.name.clone(), value));
                let holds = eval_formula(body, env);
                env.bound.pop();
                if !holds? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(var, body) => {
            for value in quantifier_domain(var, env.interp)? {
                env.bound.push((var.name.clone(), value));
                let holds = eval_formula(body, env);
                env.bound.pop();
                if holds? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Eventually(_) => Err(EvalError::Eventually),
    }
}

fn quantifier_domain(var: &Var, interp: &Interpretation) -> Result<Vec<Value>, EvalError> {
    if !var.sort.quantifiable() {
        return Err(EvalError::SortConfusion {
            value: Value::Set(0),
            sort: var.sort.clone(),
            at: var.name.clone(),
        });
    }
    match interp.cardinality(&var.sort) {
        Some(_) => Ok(interp.sort_values(&var.sort)),
        None => Err(EvalError::UnknownSymbol(match &var.sort {
            Sort::Base(s) | Sort::Set(s) => s.clone(),
            Sort::Nat => "Nat".into(),
        })),
    }
}

/// Evaluates an Eventually-free formula to a truth value. Quantifiers range
/// over the interpretation's finite domains; free variables read from the
/// assignment.
pub fn evaluate(
    formula: &Formula,
    interp: &Interpretation,
    assignment: &Assignment,
) -> Result<bool, EvalError> {
    let mut env = Env { interp, base: assignment, bound: Vec::new() };
    eval_formula(formula, &mut env)
}
