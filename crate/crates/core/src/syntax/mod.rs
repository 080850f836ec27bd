//! The textual contract-specification language: parser, pretty-printer, and
//! name resolver.
//!
//! A `.agspec` file is a sequence of declarations — `sort`, `func`, `pred`,
//! `node`, and `connect` — with `--` line comments. Nodes declare typed
//! `in`/`out` ports, an `assumes` formula over their in-ports, a
//! `guarantees` formula over all their ports, and optionally the evidence
//! techniques applied to them (`testing`, `simulation`, `formal`). Formulas
//! use `=>`, `or`, `and`, `not` (loosest to tightest), `forall`/`exists`
//! over named sorts or `Nat`, and the atoms `t = t`, `t != t`, `t <= t`,
//! `t < t`, `t in t`, predicate applications, `true`, and `false`.
//!
//! [`parse_spec`] produces a [`SpecFile`] or a list of [`Diagnostic`]s (the
//! parser recovers at declaration boundaries so several errors can be
//! reported at once); [`render_spec`] prints a file back in canonical form;
//! [`resolve`] lowers a parsed file to a [`Signature`](crate::logic::Signature)
//! and [`SystemGraph`](crate::graph::SystemGraph), qualifying port
//! references as `node.port` variables and checking contract discipline and
//! well-sortedness.

mod lexer;
mod parser;
mod printer;
mod resolver;

use std::fmt;

pub use parser::parse_spec;
pub use printer::render_spec;
pub use resolver::resolve;

/// A half-open slice of the source text, 1-based, measured in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub len: u32,
}

impl Span {
    pub fn new(line: u32, col: u32, len: u32) -> Span {
        Span { line, col, len }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// One reported problem, with a stable machine-readable code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>, span: Span) -> Diagnostic {
        Diagnostic { severity: Severity::Error, code: code.to_string(), message: message.into(), span }
    }

    pub fn warning(code: &str, message: impl Into<String>, span: Span) -> Diagnostic {
        Diagnostic {
            severity: Severity::Warning,
            code: code.to_string(),
            message: message.into(),
            span,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]: {} ({})", self.severity, self.code, self.message, self.span)
    }
}

/// A parsed specification file: declarations in source order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpecFile {
    pub decls: Vec<Decl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Sort(SortDecl),
    Func(FuncDecl),
    Pred(PredDecl),
    Node(NodeDecl),
    Connect(ConnectDecl),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortDecl {
    pub name: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuncDecl {
    pub name: String,
    pub params: Vec<TypeExpr>,
    pub result: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub params: Vec<TypeExpr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDecl {
    pub name: String,
    pub ports: Vec<PortDecl>,
    pub assumes: Formula,
    pub assumes_span: Span,
    pub guarantees: Formula,
    pub guarantees_span: Span,
    /// Technique keyword with its span, in source order, duplicates rejected
    /// at parse time.
    pub evidence: Vec<(crate::confidence::Technique, Span)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortDecl {
    pub direction: crate::graph::Direction,
    pub name: String,
    pub ty: TypeExpr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectDecl {
    pub from: (String, String),
    pub to: (String, String),
    pub span: Span,
}

/// A surface type annotation: a named sort (`Plan`, `Nat`) or a set of a
/// named sort (`Set<Plan>`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeExpr {
    pub kind: TypeExprKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TypeExprKind {
    Named(String),
    Set(String),
}

/// Surface formulas are sort-free; sorts are attached during [`resolve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Pred { name: String, name_span: Span, args: Vec<Term> },
    Cmp { op: CmpOp, lhs: Term, rhs: Term },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Quant {
        kind: QuantKind,
        var: String,
        var_span: Span,
        sort_name: String,
        sort_span: Span,
        body: Box<Formula>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Neq,
    Le,
    Lt,
    In,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "!=",
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::In => "in",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuantKind {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Ident { name: String, span: Span },
    App { name: String, span: Span, args: Vec<Term> },
    Nat { value: u64, span: Span },
}

impl Term {
    pub fn span(&self) -> Span {
        match self {
            Term::Ident { span, .. } | Term::App { span, .. } | Term::Nat { span, .. } => *span,
        }
    }
}
