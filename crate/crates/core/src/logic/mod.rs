//! Many-sorted first-order logic with a bounded `Nat` and set-valued ports.
//!
//! The vocabulary of a specification is a [`Signature`]: declared base sorts
//! plus function and predicate symbols over them. Formulas and terms live in
//! [`ast`], well-sortedness checking in [`check`], capture-avoiding
//! substitution in [`subst`], finite interpretations in [`interp`], and
//! ground evaluation in [`eval`].

pub mod ast;
pub mod check;
pub mod eval;
pub mod interp;
pub mod subst;

pub use ast::{alpha_eq, free_vars, Formula, Term, Var};
pub use check::{check_well_sorted, term_sort, EventuallyPolicy, SortError, VarContext};
pub use eval::{evaluate, EvalError};
pub use interp::{Assignment, Interpretation, Table, Value};
pub use subst::{substitute, SubstError};

use std::fmt;

use thiserror::Error;

/// A sort: a declared base sort, the built-in bounded naturals, or a set of
/// elements drawn from a base sort.
///
/// Sets never nest and never hold naturals; `Set` therefore wraps a base-sort
/// name directly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// A declared base sort, referred to by name.
    Base(String),
    /// The built-in natural numbers, bounded by the ambient nat bound.
    Nat,
    /// A subset of the named base sort's domain.
    Set(String),
}

impl Sort {
    pub fn base(name: impl Into<String>) -> Self {
        Sort::Base(name.into())
    }

    pub fn set(element: impl Into<String>) -> Self {
        Sort::Set(element.into())
    }

    /// The base sort a set draws its elements from, if this is a set sort.
    pub fn element_sort(&self) -> Option<&str> {
        match self {
            Sort::Set(s) => Some(s),
            _ => None,
        }
    }

    /// True for sorts a quantifier may bind: base sorts and `Nat`. Sets are
    /// first-class values of ports and constants, not a quantifiable domain.
    pub fn quantifiable(&self) -> bool {
        !matches!(self, Sort::Set(_))
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Base(name) => write!(f, "{name}"),
            Sort::Nat => write!(f, "Nat"),
            Sort::Set(elem) => write!(f, "Set<{elem}>"),
        }
    }
}

/// Declaration of a function symbol: argument sorts and a result sort.
/// A zero-argument function is a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    pub params: Vec<Sort>,
    pub result: Sort,
}

/// Declaration of a predicate symbol: argument sorts only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub params: Vec<Sort>,
}

/// Error raised while building a [`Signature`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate sort `{0}`")]
    DuplicateSort(String),
    #[error("duplicate symbol `{0}` (functions and predicates share one namespace)")]
    DuplicateSymbol(String),
    #[error("symbol `{symbol}` mentions undeclared sort `{sort}`")]
    UnknownSort { symbol: String, sort: String },
}

/// The vocabulary of a specification: base sorts plus function and predicate
/// symbols. Declaration order is preserved; enumeration of interpretations
/// and all reports follow it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    funcs: Vec<FuncDecl>,
    preds: Vec<PredDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sort(&mut self, name: impl Into<String>) -> Result<(), SignatureError> {
        let name = name.into();
        if self.sorts.iter().any(|s| *s == name) {
            return Err(SignatureError::DuplicateSort(name));
        }
        self.sorts.push(name);
        Ok(())
    }

    pub fn add_func(
        &mut self,
        name: impl Into<String>,
        params: Vec<Sort>,
        result: Sort,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        self.check_symbol_free(&name)?;
        for sort in params.iter().chain([&result]) {
            self.check_sort_known(&name, sort)?;
        }
        self.funcs.push(FuncDecl { name, params, result });
        Ok(())
    }

    pub fn add_pred(
        &mut self,
        name: impl Into<String>,
        params: Vec<Sort>,
    ) -> Result<(), SignatureError> {
        let name = name.into();
        self.check_symbol_free(&name)?;
        for sort in &params {
            self.check_sort_known(&name, sort)?;
        }
        self.preds.push(PredDecl { name, params });
        Ok(())
    }

    fn check_symbol_free(&self, name: &str) -> Result<(), SignatureError> {
        if self.func(name).is_some() || self.pred(name).is_some() {
            return Err(SignatureError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    fn check_sort_known(&self, symbol: &str, sort: &Sort) -> Result<(), SignatureError> {
        let named = match sort {
            Sort::Base(s) | Sort::Set(s) => s,
            Sort::Nat => return Ok(()),
        };
        if !self.has_sort(named) {
            return Err(SignatureError::UnknownSort {
                symbol: symbol.to_string(),
                sort: named.clone(),
            });
        }
        Ok(())
    }

    /// Declared base sorts, in declaration order.
    pub fn sorts(&self) -> &[String] {
        &self.sorts
    }

    pub fn has_sort(&self, name: &str) -> bool {
        self.sorts.iter().any(|s| s == name)
    }

    /// Declared functions, in declaration order.
    pub fn funcs(&self) -> &[FuncDecl] {
        &self.funcs
    }

    /// Declared predicates, in declaration order.
    pub fn preds(&self) -> &[PredDecl] {
        &self.preds
    }

    pub fn func(&self, name: &str) -> Option<&FuncDecl> {
        self.funcs.iter().find(|f| f.name == name)
    }

    pub fn pred(&self, name: &str) -> Option<&PredDecl> {
        self.preds.iter().find(|p| p.name == name)
    }

    /// Checks that a sort reference is meaningful under this signature.
    pub fn sort_valid(&self, sort: &Sort) -> bool {
        match sort {
            Sort::Nat => true,
            Sort::Base(s) | Sort::Set(s) => self.has_sort(s),
        }
    }
}
