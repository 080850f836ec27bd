//! Terms and formulas, with precedence-aware printing, free-variable
//! computation, and alpha-equivalence.

use std::collections::BTreeSet;
use std::fmt;

use super::Sort;

/// A sorted variable. Port variables of a node are written qualified as
/// `Node.port`; quantifier-bound variables stay bare (`p`, `x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var { name: name.into(), sort }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// A first-order term: a sorted variable, a function application, or a
/// natural-number literal. A zero-argument application is a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(String, Vec<Term>),
    Nat(u64),
}

impl Term {
    pub fn var(name: impl Into<String>, sort: Sort) -> Self {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    /// A constant: a zero-argument function application.
    pub fn cnst(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn nat(value: u64) -> Self {
        Term::Nat(value)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{}", v.name),
            Term::App(name, args) if args.is_empty() => write!(f, "{name}"),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
            Term::Nat(n) => write!(f, "{n}"),
        }
    }
}

/// Quantifier kind, shared by [`Formula::Forall`] and [`Formula::Exists`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Forall => write!(f, "forall"),
            Quantifier::Exists => write!(f, "exists"),
        }
    }
}

/// A formula of the contract logic.
///
/// `Eventually` is the single temporal connective and is only legal as the
/// outermost connective of a composed guarantee; well-sortedness checking
/// rejects it anywhere else.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Neq(Term, Term),
    Le(Term, Term),
    Lt(Term, Term),
    /// Membership of a base-sort element in a set-sorted term.
    In(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Eventually(Box<Formula>),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn forall(name: impl Into<String>, sort: Sort, body: Formula) -> Self {
        Formula::Forall(Var::new(name, sort), Box::new(body))
    }

    pub fn exists(name: impl Into<String>, sort: Sort, body: Formula) -> Self {
        Formula::Exists(Var::new(name, sort), Box::new(body))
    }

    /// Wraps a formula in `eventually`, collapsing a nested `eventually` so
    /// the result carries exactly one.
    pub fn eventually(self) -> Self {
        match self {
            Formula::Eventually(inner) => Formula::Eventually(inner),
            other => Formula::Eventually(Box::new(other)),
        }
    }

    /// The formula under an outermost `eventually`, or the formula itself.
    pub fn strip_eventually(&self) -> &Formula {
        match self {
            Formula::Eventually(inner) => inner,
            other => other,
        }
    }

    /// Number of `eventually` connectives anywhere in the formula.
    pub fn count_eventually(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Pred(..)
            | Formula::Eq(..)
            | Formula::Neq(..)
            | Formula::Le(..)
            | Formula::Lt(..)
            | Formula::In(..) => 0,
            Formula::Not(g) => g.count_eventually(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.count_eventually() + b.count_eventually()
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) => g.count_eventually(),
            Formula::Eventually(g) => 1 + g.count_eventually(),
        }
    }

    /// Left-associated conjunction of the given formulas. An empty list is
    /// `true`; a singleton is returned unchanged.
    pub fn conjoin(formulas: Vec<Formula>) -> Formula {
        let mut iter = formulas.into_iter();
        match iter.next() {
            None => Formula::True,
            Some(first) => iter.fold(first, Formula::and),
        }
    }

    /// Left-associated disjunction of the given formulas. An empty list is
    /// `false`; a singleton is returned unchanged.
    pub fn disjoin(formulas: Vec<Formula>) -> Formula {
        let mut iter = formulas.into_iter();
        match iter.next() {
            None => Formula::False,
            Some(first) => iter.fold(first, Formula::or),
        }
    }
}

// Printing follows the surface syntax: `=>` binds loosest, then `or`, `and`,
// and the prefix connectives. Parentheses appear only where reparsing would
// otherwise change the tree; quantifier bodies extend maximally to the right,
// so a quantifier used as an operand is always parenthesized.
const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Forall(..) | Formula::Exists(..) => PREC_QUANT,
            Formula::Implies(..) => PREC_IMPLIES,
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            Formula::Not(..) | Formula::Eventually(..) => PREC_PREFIX,
            _ => PREC_ATOM,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Pred(name, args) => {
                write!(f, "{name}(")?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Neq(a, b) => write!(f, "{a} != {b}"),
            Formula::Le(a, b) => write!(f, "{a} <= {b}"),
            Formula::Lt(a, b) => write!(f, "{a} < {b}"),
            Formula::In(a, b) => write!(f, "{a} in {b}"),
            Formula::Not(g) => {
                write!(f, "not ")?;
                g.fmt_prec(f, PREC_PREFIX)
            }
            Formula::Eventually(g) => {
                write!(f, "eventually ")?;
                g.fmt_prec(f, PREC_PREFIX)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, PREC_AND)?;
                write!(f, " and ")?;
                b.fmt_prec(f, PREC_AND + 1)
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, PREC_OR)?;
                write!(f, " or ")?;
                b.fmt_prec(f, PREC_OR + 1)
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, PREC_IMPLIES + 1)?;
                write!(f, " => ")?;
                b.fmt_prec(f, PREC_IMPLIES)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let q = match self {
                    Formula::Forall(..) => "forall",
                    _ => "exists",
                };
                write!(f, "{q} {} : {} . ", v.name, v.sort)?;
                body.fmt_prec(f, PREC_QUANT)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

fn term_free_vars(term: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<Var>) {
    match term {
        Term::Var(v) => {
            if !bound.iter().any(|b| *b == v.name) {
                out.insert(v.clone());
            }
        }
        Term::App(_, args) => {
            for arg in args {
                term_free_vars(arg, bound, out);
            }
        }
        Term::Nat(_) => {}
    }
}

fn formula_free_vars(formula: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<Var>) {
    match formula {
        Formula::True | Formula::False => {}
        Formula::Pred(_, args) => {
            for arg in args {
                term_free_vars(arg, bound, out);
            }
        }
        Formula::Eq(a, b)
        | Formula::Neq(a, b)
        | Formula::Le(a, b)
        | Formula::Lt(a, b)
        | Formula::In(a, b) => {
            term_free_vars(a, bound, out);
            term_free_vars(b, bound, out);
        }
        Formula::Not(g) | Formula::Eventually(g) => formula_free_vars(g, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            formula_free_vars(a, bound, out);
            formula_free_vars(b, bound, out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            bound.push(v.name.clone());
            formula_free_vars(body, bound, out);
            bound.pop();
        }
    }
}

/// The free variables of a formula, with their sorts, in name order.
pub fn free_vars(formula: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    formula_free_vars(formula, &mut Vec::new(), &mut out);
    out
}

/// Free variables of a single term.
pub fn term_vars(term: &Term) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    term_free_vars(term, &mut Vec::new(), &mut out);
    out
}

fn term_alpha_eq(a: &Term, b: &Term, ctx: &[(String, String, Sort)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            // Walk the binder context innermost-first: a bound variable must
            // correspond positionally, a free one must match exactly.
            for (la, lb, sort) in ctx.iter().rev() {
                let hit_a = *la == x.name;
                let hit_b = *lb == y.name;
                if hit_a || hit_b {
                    return hit_a && hit_b && x.sort == *sort && y.sort == *sort;
                }
            }
            x == y
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, ctx))
        }
        (Term::Nat(m), Term::Nat(n)) => m == n,
        _ => false,
    }
}

fn formula_alpha_eq(a: &Formula, b: &Formula, ctx: &mut Vec<(String, String, Sort)>) -> bool {
    match (a, b) {
        (Formula::True, Formula::True) | (Formula::False, Formula::False) => true,
        (Formula::Pred(f, xs), Formula::Pred(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, ctx))
        }
        (Formula::Eq(x1, x2), Formula::Eq(y1, y2))
        | (Formula::Neq(x1, x2), Formula::Neq(y1, y2))
        | (Formula::Le(x1, x2), Formula::Le(y1, y2))
        | (Formula::Lt(x1, x2), Formula::Lt(y1, y2))
        | (Formula::In(x1, x2), Formula::In(y1, y2)) => {
            term_alpha_eq(x1, y1, ctx) && term_alpha_eq(x2, y2, ctx)
        }
        (Formula::Not(x), Formula::Not(y)) | (Formula::Eventually(x), Formula::Eventually(y)) => {
            formula_alpha_eq(x, y, ctx)
        }
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => {
            formula_alpha_eq(x1, y1, ctx) && formula_alpha_eq(x2, y2, ctx)
        }
        (Formula::Forall(v, x), Formula::Forall(w, y))
        | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            if v.sort != w.sort {
                return false;
            }
            ctx.push((v.name.clone(), w.name.clone(), v.sort.clone()));
            let eq = formula_alpha_eq(x, y, ctx);
            ctx.pop();
            eq
        }
        _ => false,
    }
}

/// Equality of formulas up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    formula_alpha_eq(a, b, &mut Vec::new())
}
