//! Contract-based specification and verification for node pipelines.
//!
//! This crate implements a small many-sorted first-order contract language
//! together with the machinery needed to check it at desk scale:
//!
//! - [`logic`] — sorts, signatures, terms, formulas, finite interpretations,
//!   and ground evaluation.
//! - [`entailment`] — scope-bounded entailment and satisfiability checking by
//!   exhaustive enumeration of finite interpretations.
//! - [`syntax`] — the `.agspec` surface language: lexer, parser, canonical
//!   printer, and resolver producing a typed system graph.
//! - [`graph`] — nodes with assume-guarantee contracts, typed port wiring,
//!   structural validation, and topological ordering.
//! - [`compose`] — the composition calculus: sequential, join, branch, and
//!   loop rules, obligation generation, and end-to-end system contracts.
//! - [`monitor`] — finite-trace runtime monitors and a deterministic
//!   simulation harness that drives stubbed nodes against a scenario.
//! - [`confidence`] — evidence bookkeeping and the verification-confidence
//!   score over the techniques applied per node.
//!
//! Each node carries a contract `(A, G)` read as "if the assumption `A` holds
//! of the inputs, the guarantee `G` eventually holds of the outputs". The
//! composition rules turn a wired graph of such nodes into proof obligations
//! between neighbouring contracts plus one end-to-end contract whose guarantee
//! is wrapped in a single `eventually`.

pub mod compose;
pub mod confidence;
pub mod entailment;
pub mod graph;
pub mod logic;
pub mod monitor;
pub mod syntax;

#[cfg(test)]
pub(crate) mod testutil;
