//! Finite interpretations: bounded domains, total function tables, predicate
//! tables, and assignments of values to free variables.
//!
//! Values are encoded compactly so exhaustive enumeration stays cheap:
//! elements and naturals as indices, sets as bit masks over the element
//! sort's domain. Base-sort domains are therefore capped at
//! [`MAX_DOMAIN_SIZE`] elements — far beyond anything scope-bounded checking
//! can exhaust anyway.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Signature, Sort};

/// Largest admissible base-sort domain (sets are u64 bit masks).
pub const MAX_DOMAIN_SIZE: usize = 63;

/// A ground value: a domain element (by index), a bounded natural, or a set
/// of domain elements (as a bit mask).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Elem(u64),
    Nat(u64),
    Set(u64),
}

impl Value {
    /// Builds a set value from element indices.
    pub fn set_of(elems: impl IntoIterator<Item = u64>) -> Value {
        let mut mask = 0u64;
        for e in elems {
            mask |= 1 << e;
        }
        Value::Set(mask)
    }

    /// The element indices of a set value, ascending.
    pub fn set_elems(self) -> Vec<u64> {
        match self {
            Value::Set(mask) => (0..64).filter(|i| mask & (1 << i) != 0).collect(),
            _ => Vec::new(),
        }
    }

    fn encode(self) -> u64 {
        match self {
            Value::Elem(i) | Value::Nat(i) | Value::Set(i) => i,
        }
    }

    fn decode(sort: &Sort, code: u64) -> Value {
        match sort {
            Sort::Base(_) => Value::Elem(code),
            Sort::Nat => Value::Nat(code),
            Sort::Set(_) => Value::Set(code),
        }
    }

    fn fits(self, sort: &Sort, sizes: &BTreeMap<String, usize>, nat_bound: u64) -> bool {
        match (self, sort) {
            (Value::Elem(i), Sort::Base(s)) => {
                sizes.get(s).is_some_and(|n| i < *n as u64)
            }
            (Value::Nat(n), Sort::Nat) => n < nat_bound,
            (Value::Set(mask), Sort::Set(s)) => sizes
                .get(s)
                .is_some_and(|n| *n >= 64 || mask < (1u64 << *n)),
            _ => false,
        }
    }
}

/// Error raised while building or editing an interpretation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("no domain size given for sort `{0}`")]
    MissingSort(String),
    #[error("domain of `{sort}` has size {size}; sizes must be 1..={max}", max = MAX_DOMAIN_SIZE)]
    BadDomainSize { sort: String, size: usize },
    #[error("nat bound must be at least 1")]
    BadNatBound,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` expects {expected} argument(s), got {got}")]
    Arity { symbol: String, expected: usize, got: usize },
    #[error("value {value:?} does not inhabit sort {sort} under this interpretation")]
    ValueOutOfSort { value: Value, sort: Sort },
}

/// A total table for one symbol: one encoded value per argument tuple.
///
/// Rows are ordered lexicographically with the first argument most
/// significant; the encoded cell value is the result (for functions) or 0/1
/// (for predicates, which carry no result sort).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    params: Vec<Sort>,
    result: Option<Sort>,
    radices: Vec<u64>,
    values: Vec<u64>,
}

impl Table {
    fn new(params: Vec<Sort>, result: Option<Sort>, radices: Vec<u64>) -> Table {
        let rows = radices.iter().product::<u64>() as usize;
        Table { params, result, radices, values: vec![0; rows] }
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn params(&self) -> &[Sort] {
        &self.params
    }

    /// The result sort for function tables; `None` for predicates.
    pub fn result(&self) -> Option<&Sort> {
        self.result.as_ref()
    }

    /// Decoded result value of row `i` (function tables only).
    pub fn row_value(&self, i: usize) -> Option<Value> {
        let result = self.result.as_ref()?;
        Some(Value::decode(result, self.values[i]))
    }

    /// Whether row `i` is in the relation (predicate tables).
    pub fn row_holds(&self, i: usize) -> bool {
        self.values[i] != 0
    }

    fn row_index(&self, args: &[Value]) -> usize {
        let mut index = 0u64;
        for (arg, radix) in args.iter().zip(&self.radices) {
            index = index * radix + arg.encode();
        }
        index as usize
    }

    /// Decodes row `i` back into argument values.
    pub fn row_args(&self, mut i: u64) -> Vec<Value> {
        let mut rev = Vec::with_capacity(self.params.len());
        for (sort, radix) in self.params.iter().zip(&self.radices).rev() {
            rev.push(Value::decode(sort, i % radix));
            i /= radix;
        }
        rev.reverse();
        rev
    }

    pub(crate) fn cell(&self, row: usize) -> u64 {
        self.values[row]
    }

    pub(crate) fn set_cell(&mut self, row: usize, value: u64) {
        self.values[row] = value;
    }
}

/// A finite interpretation of a signature: domain sizes per base sort, the
/// nat bound, and one total table per function and predicate symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    sizes: BTreeMap<String, usize>,
    nat_bound: u64,
    funcs: BTreeMap<String, Table>,
    preds: BTreeMap<String, Table>,
}

impl Interpretation {
    /// The all-zero interpretation: every function maps to element 0 / nat 0 /
    /// the empty set, every predicate is empty. This is the first
    /// interpretation in enumeration order for the given sizes.
    pub fn new(
        sig: &Signature,
        sizes: BTreeMap<String, usize>,
        nat_bound: u64,
    ) -> Result<Interpretation, InterpError> {
        for sort in sig.sorts() {
            match sizes.get(sort) {
                None => return Err(InterpError::MissingSort(sort.clone())),
                Some(&n) if n == 0 || n > MAX_DOMAIN_SIZE => {
                    return Err(InterpError::BadDomainSize { sort: sort.clone(), size: n })
                }
                Some(_) => {}
            }
        }
        if nat_bound == 0 {
            return Err(InterpError::BadNatBound);
        }
        let card = |sort: &Sort| -> u64 {
            match sort {
                Sort::Base(s) => sizes[s] as u64,
                Sort::Nat => nat_bound,
                Sort::Set(s) => 1u64 << sizes[s],
            }
        };
        let mut funcs = BTreeMap::new();
        for f in sig.funcs() {
            let radices = f.params.iter().map(&card).collect();
            funcs.insert(
                f.name.clone(),
                Table::new(f.params.clone(), Some(f.result.clone()), radices),
            );
        }
        let mut preds = BTreeMap::new();
        for p in sig.preds() {
            let radices = p.params.iter().map(&card).collect();
            preds.insert(p.name.clone(), Table::new(p.params.clone(), None, radices));
        }
        Ok(Interpretation { sizes, nat_bound, funcs, preds })
    }

    pub fn sizes(&self) -> &BTreeMap<String, usize> {
        &self.sizes
    }

    pub fn size(&self, sort: &str) -> Option<usize> {
        self.sizes.get(sort).copied()
    }

    pub fn nat_bound(&self) -> u64 {
        self.nat_bound
    }

    /// Total domain size: the sum of all base-sort domain sizes.
    pub fn total_size(&self) -> usize {
        self.sizes.values().sum()
    }

    /// Number of values inhabiting a sort under this interpretation.
    pub fn cardinality(&self, sort: &Sort) -> Option<u64> {
        Some(match sort {
            Sort::Base(s) => *self.sizes.get(s)? as u64,
            Sort::Nat => self.nat_bound,
            Sort::Set(s) => 1u64 << *self.sizes.get(s)?,
        })
    }

    /// All values of a sort, in enumeration order (indices, naturals, or set
    /// masks, each ascending).
    pub fn sort_values(&self, sort: &Sort) -> Vec<Value> {
        match self.cardinality(sort) {
            Some(card) => (0..card).map(|c| Value::decode(sort, c)).collect(),
            None => Vec::new(),
        }
    }

    pub fn func_table(&self, name: &str) -> Option<&Table> {
        self.funcs.get(name)
    }

    pub fn pred_table(&self, name: &str) -> Option<&Table> {
        self.preds.get(name)
    }

    pub(crate) fn func_tables_mut(&mut self) -> &mut BTreeMap<String, Table> {
        &mut self.funcs
    }

    pub(crate) fn pred_tables_mut(&mut self) -> &mut BTreeMap<String, Table> {
        &mut self.preds
    }

    fn check_args(&self, table: &Table, symbol: &str, args: &[Value]) -> Result<(), InterpError> {
        if args.len() != table.params.len() {
            return Err(InterpError::Arity {
                symbol: symbol.to_string(),
                expected: table.params.len(),
                got: args.len(),
            });
        }
        for (arg, sort) in args.iter().zip(&table.params) {
            if !arg.fits(sort, &self.sizes, self.nat_bound) {
                return Err(InterpError::ValueOutOfSort { value: *arg, sort: sort.clone() });
            }
        }
        Ok(())
    }

    /// Looks up a function value. `None` for unknown symbols or ill-fitting
    /// arguments (evaluation turns that into an error).
    pub fn func_value(&self, name: &str, args: &[Value], result: &Sort) -> Option<Value> {
        let table = self.funcs.get(name)?;
        self.check_args(table, name, args).ok()?;
        Some(Value::decode(result, table.cell(table.row_index(args))))
    }

    pub fn pred_holds(&self, name: &str, args: &[Value]) -> Option<bool> {
        let table = self.preds.get(name)?;
        self.check_args(table, name, args).ok()?;
        Some(table.cell(table.row_index(args)) != 0)
    }

    /// Sets one function-table row.
    pub fn set_func(
        &mut self,
        sig: &Signature,
        name: &str,
        args: &[Value],
        value: Value,
    ) -> Result<(), InterpError> {
        let decl =
            sig.func(name).ok_or_else(|| InterpError::UnknownSymbol(name.to_string()))?;
        let result = decl.result.clone();
        let Some(table) = self.funcs.get(name) else {
            return Err(InterpError::UnknownSymbol(name.to_string()));
        };
        self.check_args(table, name, args)?;
        if !value.fits(&result, &self.sizes, self.nat_bound) {
            return Err(InterpError::ValueOutOfSort { value, sort: result });
        }
        let table = self.funcs.get_mut(name).expect("checked above");
        let row = table.row_index(args);
        table.set_cell(row, value.encode());
        Ok(())
    }

    /// Sets one predicate-table row.
    pub fn set_pred(
        &mut self,
        name: &str,
        args: &[Value],
        holds: bool,
    ) -> Result<(), InterpError> {
        let Some(table) = self.preds.get(name) else {
            return Err(InterpError::UnknownSymbol(name.to_string()));
        };
        self.check_args(table, name, args)?;
        let table = self.preds.get_mut(name).expect("checked above");
        let row = table.row_index(args);
        table.set_cell(row, holds as u64);
        Ok(())
    }

    /// Synthetic display name for element `index` of a base sort:
    /// the lower-cased sort name followed by the index (`plan0`, `location1`).
    pub fn element_name(&self, sort: &str, index: u64) -> String {
        format!("{}{}", sort.to_lowercase(), index)
    }

    /// Renders a value of the given sort with synthetic element names.
    pub fn render_value(&self, sort: &Sort, value: Value) -> String {
        match (sort, value) {
            (Sort::Base(s), Value::Elem(i)) => self.element_name(s, i),
            (Sort::Nat, Value::Nat(n)) => n.to_string(),
            (Sort::Set(s), set @ Value::Set(_)) => {
                let elems: Vec<String> =
                    set.set_elems().into_iter().map(|i| self.element_name(s, i)).collect();
                format!("{{{}}}", elems.join(", "))
            }
            _ => format!("{value:?}"),
        }
    }
}

impl fmt::Display for Interpretation {
    /// Renders the interpretation as tables: per-sort domains, the nat bound,
    /// one line per function row, and each predicate's true tuples.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (sort, size) in &self.sizes {
            let elems: Vec<String> =
                (0..*size as u64).map(|i| self.element_name(sort, i)).collect();
            writeln!(f, "sort {sort} = {{{}}}", elems.join(", "))?;
        }
        writeln!(f, "nat bound = {}", self.nat_bound)?;
        for (name, table) in &self.funcs {
            let result = table.result.clone().expect("function tables store a result sort");
            for row in 0..table.rows() {
                let args = table.row_args(row as u64);
                let rendered: Vec<String> = args
                    .iter()
                    .zip(&table.params)
                    .map(|(v, s)| self.render_value(s, *v))
                    .collect();
                let value = self.render_value(&result, Value::decode(&result, table.cell(row)));
                if rendered.is_empty() {
                    writeln!(f, "{name} = {value}")?;
                } else {
                    writeln!(f, "{name}({}) = {value}", rendered.join(", "))?;
                }
            }
        }
        for (name, table) in &self.preds {
            let mut tuples = Vec::new();
            for row in 0..table.rows() {
                if table.cell(row) != 0 {
                    let args = table.row_args(row as u64);
                    let rendered: Vec<String> = args
                        .iter()
                        .zip(&table.params)
                        .map(|(v, s)| self.render_value(s, *v))
                        .collect();
                    tuples.push(format!("({})", rendered.join(", ")));
                }
            }
            writeln!(f, "{name} = {{{}}}", tuples.join(", "))?;
        }
        Ok(())
    }
}

/// Values for the free variables of a formula, keyed by variable name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Value>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: Value) {
        self.0.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<Value> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Renders `name = value` lines using an interpretation's element names.
    /// The sorts come from the caller since assignments do not store them.
    pub fn render(&self, interp: &Interpretation, sorts: &BTreeMap<String, Sort>) -> String {
        let mut out = String::new();
        for (name, value) in &self.0 {
            let rendered = match sorts.get(name) {
                Some(sort) => interp.render_value(sort, *value),
                None => format!("{value:?}"),
            };
            out.push_str(&format!("{name} = {rendered}\n"));
        }
        out
    }
}

impl FromIterator<(String, Value)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (String, Value)>>(iter: T) -> Self {
        Assignment(iter.into_iter().collect())
    }
}
