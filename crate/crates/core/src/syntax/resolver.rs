//! Name resolution and semantic checking: lowers a parsed [`SpecFile`] to a
//! [`Signature`] and [`SystemGraph`].
//!
//! Sorts are collected first, then functions and predicates, so declaration
//! order among them does not matter. Inside a node's formulas a bare
//! identifier resolves, in order, to the innermost quantified variable, a
//! port of the node (qualified to the logic-level variable `node.port`),
//! or a zero-arity function; anything else is an error. Assumptions may
//! reference in-ports only; guarantees may reference any port. All
//! problems across the whole file are reported together.

use std::collections::BTreeMap;

use crate::graph::{
    port_var, Contract, Direction, Edge, EndpointRef, NodeSpec, Port, SystemGraph,
};
use crate::logic::{
    check_well_sorted, free_vars, EventuallyPolicy, Formula, Signature, Sort, Term, Var,
    VarContext,
};

use super::{
    CmpOp, Decl, Diagnostic, NodeDecl, QuantKind, Span, SpecFile, TypeExpr, TypeExprKind,
};

/// Lowers a parsed file. Returns every diagnostic found if any check fails.
pub fn resolve(spec: &SpecFile) -> Result<(Signature, SystemGraph), Vec<Diagnostic>> {
    let mut r = Resolver { sig: Signature::new(), diags: Vec::new() };

    // Sorts first so later declarations can reference them regardless of
    // their position in the file.
    for decl in &spec.decls {
        if let Decl::Sort(d) = decl {
            if let Err(err) = r.sig.add_sort(&d.name) {
                r.error("resolve-duplicate-symbol", err.to_string(), d.span);
            }
        }
    }
    for decl in &spec.decls {
        match decl {
            Decl::Func(d) => {
                let params: Vec<Option<Sort>> =
                    d.params.iter().map(|t| r.lower_type(t)).collect();
                let result = r.lower_type(&d.result);
                if let (Some(result), true) = (result, params.iter().all(Option::is_some)) {
                    let params = params.into_iter().flatten().collect();
                    if let Err(err) = r.sig.add_func(&d.name, params, result) {
                        r.error("resolve-duplicate-symbol", err.to_string(), d.span);
                    }
                }
            }
            Decl::Pred(d) => {
                let params: Vec<Option<Sort>> =
                    d.params.iter().map(|t| r.lower_type(t)).collect();
                if params.iter().all(Option::is_some) {
                    let params = params.into_iter().flatten().collect();
                    if let Err(err) = r.sig.add_pred(&d.name, params) {
                        r.error("resolve-duplicate-symbol", err.to_string(), d.span);
                    }
                }
            }
            _ => {}
        }
    }

    let mut nodes: Vec<NodeSpec> = Vec::new();
    for decl in &spec.decls {
        if let Decl::Node(d) = decl {
            if nodes.iter().any(|n| n.name == d.name) {
                r.error(
                    "resolve-duplicate-node",
                    format!("node `{}` is declared more than once", d.name),
                    d.span,
                );
                continue;
            }
            if let Some(node) = r.lower_node(d) {
                nodes.push(node);
            }
        }
    }

    let mut edges: Vec<Edge> = Vec::new();
    for decl in &spec.decls {
        if let Decl::Connect(d) = decl {
            if let Some(edge) = r.lower_connect(d, &nodes, &edges) {
                edges.push(edge);
            }
        }
    }

    if !r.diags.is_empty() {
        return Err(r.diags);
    }
    match SystemGraph::new(nodes, edges) {
        Ok(graph) => Ok((r.sig, graph)),
        Err(err) => Err(vec![Diagnostic::error(
            "resolve-invalid-graph",
            err.to_string(),
            Span::new(1, 1, 1),
        )]),
    }
}

struct Resolver {
    sig: Signature,
    diags: Vec<Diagnostic>,
}

impl Resolver {
    fn error(&mut self, code: &str, message: impl Into<String>, span: Span) {
        self.diags.push(Diagnostic::error(code, message, span));
    }

    fn lower_type(&mut self, ty: &TypeExpr) -> Option<Sort> {
        match &ty.kind {
            TypeExprKind::Named(name) if name == "Nat" => Some(Sort::Nat),
            TypeExprKind::Named(name) => {
                if self.sig.has_sort(name) {
                    Some(Sort::base(name))
                } else {
                    self.error(
                        "resolve-unknown-sort",
                        format!("unknown sort `{name}`"),
                        ty.span,
                    );
                    None
                }
            }
            TypeExprKind::Set(element) if element == "Nat" => {
                self.error(
                    "resolve-set-element",
                    "sets range over declared base sorts; `Set<Nat>` is not supported",
                    ty.span,
                );
                None
            }
            TypeExprKind::Set(element) => {
                if self.sig.has_sort(element) {
                    Some(Sort::set(element))
                } else {
                    self.error(
                        "resolve-unknown-sort",
                        format!("unknown sort `{element}`"),
                        ty.span,
                    );
                    None
                }
            }
        }
    }

    fn lower_node(&mut self, decl: &NodeDecl) -> Option<NodeSpec> {
        let before = self.diags.len();

        let mut ports: Vec<Port> = Vec::new();
        for port in &decl.ports {
            if ports.iter().any(|p| p.name == port.name) {
                self.error(
                    "resolve-duplicate-port",
                    format!("node `{}` declares port `{}` more than once", decl.name, port.name),
                    port.span,
                );
                continue;
            }
            if let Some(sort) = self.lower_type(&port.ty) {
                ports.push(Port::new(&port.name, port.direction, sort));
            }
        }
        if ports.is_empty() && self.diags.len() == before {
            self.error(
                "resolve-no-ports",
                format!("node `{}` declares no ports", decl.name),
                decl.span,
            );
        }
        if self.diags.len() > before {
            return None;
        }

        let port_sorts: BTreeMap<&str, &Port> =
            ports.iter().map(|p| (p.name.as_str(), p)).collect();
        let assumes = self.lower_formula(&decl.assumes, &decl.name, &port_sorts, &mut Vec::new());
        let guarantees =
            self.lower_formula(&decl.guarantees, &decl.name, &port_sorts, &mut Vec::new());
        let (Some(assumption), Some(guarantee)) = (assumes, guarantees) else {
            return None;
        };

        // Contract discipline: assumptions over in-ports only.
        let out_vars: Vec<Var> = ports
            .iter()
            .filter(|p| p.direction == Direction::Out)
            .map(|p| port_var(&decl.name, p))
            .collect();
        for var in free_vars(&assumption) {
            if out_vars.contains(&var) {
                self.error(
                    "resolve-assumption-over-output",
                    format!(
                        "assumption may reference in-ports only; `{}` is an out-port of `{}`",
                        var.name, decl.name
                    ),
                    decl.assumes_span,
                );
            }
        }

        // Well-sortedness, with every port variable in scope.
        let ctx: VarContext = ports
            .iter()
            .map(|p| (format!("{}.{}", decl.name, p.name), p.sort.clone()))
            .collect();
        for (formula, span) in
            [(&assumption, decl.assumes_span), (&guarantee, decl.guarantees_span)]
        {
            if let Err(errors) =
                check_well_sorted(formula, &self.sig, &ctx, EventuallyPolicy::Forbidden)
            {
                for err in errors {
                    self.error("resolve-ill-sorted", err.to_string(), span);
                }
            }
        }
        if self.diags.len() > before {
            return None;
        }

        let inputs: Vec<Var> = ports
            .iter()
            .filter(|p| p.direction == Direction::In)
            .map(|p| port_var(&decl.name, p))
            .collect();
        let contract = match Contract::new(assumption, guarantee, inputs, out_vars) {
            Ok(contract) => contract,
            Err(err) => {
                self.error("resolve-bad-contract", err.to_string(), decl.span);
                return None;
            }
        };
        let evidence = decl.evidence.iter().map(|(t, _)| *t).collect();
        match NodeSpec::new(&decl.name, ports, contract, evidence) {
            Ok(node) => Some(node),
            Err(err) => {
                self.error("resolve-bad-node", err.to_string(), decl.span);
                None
            }
        }
    }

    fn lower_formula(
        &mut self,
        f: &super::Formula,
        node: &str,
        ports: &BTreeMap<&str, &Port>,
        bound: &mut Vec<(String, Sort)>,
    ) -> Option<Formula> {
        match f {
            super::Formula::True => Some(Formula::True),
            super::Formula::False => Some(Formula::False),
            super::Formula::Pred { name, args, .. } => {
                let args: Vec<Option<Term>> =
                    args.iter().map(|a| self.lower_term(a, node, ports, bound)).collect();
                Some(Formula::Pred(name.clone(), args.into_iter().collect::<Option<_>>()?))
            }
            super::Formula::Cmp { op, lhs, rhs } => {
                let lhs = self.lower_term(lhs, node, ports, bound);
                let rhs = self.lower_term(rhs, node, ports, bound);
                let (lhs, rhs) = (lhs?, rhs?);
                Some(match op {
                    CmpOp::Eq => Formula::Eq(lhs, rhs),
                    CmpOp::Neq => Formula::Neq(lhs, rhs),
                    CmpOp::Le => Formula::Le(lhs, rhs),
                    CmpOp::Lt => Formula::Lt(lhs, rhs),
                    CmpOp::In => Formula::In(lhs, rhs),
                })
            }
            super::Formula::Not(body) => {
                Some(self.lower_formula(body, node, ports, bound)?.not())
            }
            super::Formula::And(a, b) => {
                let a = self.lower_formula(a, node, ports, bound);
                let b = self.lower_formula(b, node, ports, bound);
                Some(a?.and(b?))
            }
            super::Formula::Or(a, b) => {
                let a = self.lower_formula(a, node, ports, bound);
                let b = self.lower_formula(b, node, ports, bound);
                Some(a?.or(b?))
            }
            super::Formula::Implies(a, b) => {
                let a = self.lower_formula(a, node, ports, bound);
                let b = self.lower_formula(b, node, ports, bound);
                Some(a?.implies(b?))
            }
            super::Formula::Quant { kind, var, sort_name, sort_span, body, .. } => {
                let sort = if sort_name == "Nat" {
                    Sort::Nat
                } else if self.sig.has_sort(sort_name) {
                    Sort::base(sort_name)
                } else {
                    self.error(
                        "resolve-unknown-sort",
                        format!("unknown sort `{sort_name}` in quantifier"),
                        *sort_span,
                    );
                    return None;
                };
                bound.push((var.clone(), sort.clone()));
                let body = self.lower_formula(body, node, ports, bound);
                bound.pop();
                let body = Box::new(body?);
                Some(match kind {
                    QuantKind::Forall => Formula::Forall(Var::new(var.clone(), sort), body),
                    QuantKind::Exists => Formula::Exists(Var::new(var.clone(), sort), body),
                })
            }
        }
    }

    fn lower_term(
        &mut self,
        t: &super::Term,
        node: &str,
        ports: &BTreeMap<&str, &Port>,
        bound: &mut Vec<(String, Sort)>,
    ) -> Option<Term> {
        match t {
            super::Term::Ident { name, span } => {
                if let Some((_, sort)) = bound.iter().rev().find(|(n, _)| n == name) {
                    return Some(Term::var(name, sort.clone()));
                }
                if let Some(port) = ports.get(name.as_str()) {
                    return Some(Term::Var(port_var(node, port)));
                }
                if self.sig.func(name).is_some_and(|f| f.params.is_empty()) {
                    return Some(Term::cnst(name));
                }
                self.error(
                    "resolve-unknown-name",
                    format!(
                        "unknown name `{name}`: not a quantified variable, a port of \
                         `{node}`, or a constant"
                    ),
                    *span,
                );
                None
            }
            super::Term::App { name, args, .. } => {
                let args: Vec<Option<Term>> =
                    args.iter().map(|a| self.lower_term(a, node, ports, bound)).collect();
                Some(Term::app(name, args.into_iter().collect::<Option<_>>()?))
            }
            super::Term::Nat { value, .. } => Some(Term::Nat(*value)),
        }
    }

    fn lower_connect(
        &mut self,
        d: &super::ConnectDecl,
        nodes: &[NodeSpec],
        edges: &[Edge],
    ) -> Option<Edge> {
        let lookup = |r: &mut Resolver, name: &str, port: &str, expect: Direction| {
            let Some(node) = nodes.iter().find(|n| n.name == name) else {
                r.error(
                    "resolve-edge-endpoint",
                    format!("connect references unknown node `{name}`"),
                    d.span,
                );
                return None;
            };
            let Some(port) = node.port(port) else {
                r.error(
                    "resolve-edge-endpoint",
                    format!("node `{name}` has no port `{port}`"),
                    d.span,
                );
                return None;
            };
            if port.direction != expect {
                let (want, got) = match expect {
                    Direction::Out => ("leave an out-port", "an in-port"),
                    Direction::In => ("enter an in-port", "an out-port"),
                };
                r.error(
                    "resolve-edge-direction",
                    format!("connect must {want}, but `{name}.{}` is {got}", port.name),
                    d.span,
                );
                return None;
            }
            Some(port.clone())
        };
        let from = lookup(self, &d.from.0, &d.from.1, Direction::Out);
        let to = lookup(self, &d.to.0, &d.to.1, Direction::In);
        let (from_port, to_port) = (from?, to?);
        if from_port.sort != to_port.sort {
            self.error(
                "resolve-edge-sort-mismatch",
                format!(
                    "sort mismatch on connect: `{}.{}` has sort {} but `{}.{}` has sort {}",
                    d.from.0, d.from.1, from_port.sort, d.to.0, d.to.1, to_port.sort
                ),
                d.span,
            );
            return None;
        }
        let to_ref = EndpointRef::new(&d.to.0, &d.to.1);
        if edges.iter().any(|e| e.to == to_ref) {
            self.error(
                "resolve-fan-in",
                format!("in-port `{}.{}` already has an incoming connection", d.to.0, d.to.1),
                d.span,
            );
            return None;
        }
        Some(Edge::new(EndpointRef::new(&d.from.0, &d.from.1), to_ref))
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_spec;
    use super::*;
    use crate::logic::alpha_eq;
    use crate::testutil::{all_plans_contain_goal, qvar, rover_graph, rover_signature};

    const ROVER: &str = include_str!("../../../../specs/rover.agspec");
    const LOOP: &str = include_str!("../../../../specs/loop.agspec");
    const TYPE_ERRORS: &str = include_str!("../../../../specs/errors/type-error.agspec");

    fn resolve_str(src: &str) -> Result<(Signature, SystemGraph), Vec<Diagnostic>> {
        resolve(&parse_spec(src).expect("parse should succeed"))
    }

    fn codes(diags: &[Diagnostic]) -> Vec<&str> {
        diags.iter().map(|d| d.code.as_str()).collect()
    }

    #[test]
    fn rover_file_resolves_to_the_reference_pipeline() {
        let (sig, graph) = resolve_str(ROVER).expect("rover should resolve");
        assert_eq!(sig, rover_signature());
        assert_eq!(graph, rover_graph());
    }

    #[test]
    fn port_references_are_qualified_and_constants_resolved() {
        let (_, graph) = resolve_str(ROVER).unwrap();
        let agent = graph.node("Agent").unwrap();
        let expected = all_plans_contain_goal(&qvar("Agent", "PlanSet", Sort::set("Plan")));
        assert!(alpha_eq(&agent.contract.assumption, &expected));
    }

    #[test]
    fn self_loops_resolve_cleanly() {
        let (_, graph) = resolve_str(LOOP).expect("loop spec should resolve");
        assert_eq!(graph.edges().len(), 1);
        assert!(graph.edges()[0].is_self_loop());
    }

    #[test]
    fn assumption_over_an_out_port_and_bad_connect_are_both_reported() {
        let diags = resolve_str(TYPE_ERRORS).unwrap_err();
        let codes = codes(&diags);
        assert!(codes.contains(&"resolve-assumption-over-output"), "got {codes:?}");
        assert!(codes.contains(&"resolve-edge-sort-mismatch"), "got {codes:?}");
        assert!(diags
            .iter()
            .any(|d| d.message.contains("assumption may reference in-ports only")));
    }

    #[test]
    fn unknown_sorts_are_reported_where_used() {
        let diags =
            resolve_str("node n { in x: Pose assumes true guarantees true }").unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-unknown-sort"]);
        let diags = resolve_str(
            "sort A node n { out x: A assumes true guarantees forall p: B . p = p }",
        )
        .unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-unknown-sort"]);
    }

    #[test]
    fn duplicate_nodes_and_symbols_are_reported() {
        let src = "sort A sort A node n { out x: A assumes true guarantees true } \
                   node n { out x: A assumes true guarantees true }";
        let diags = resolve_str(src).unwrap_err();
        let codes = codes(&diags);
        assert!(codes.contains(&"resolve-duplicate-symbol"));
        assert!(codes.contains(&"resolve-duplicate-node"));
    }

    #[test]
    fn unknown_names_in_formulas_are_reported() {
        let diags =
            resolve_str("node n { out x: Nat assumes true guarantees x = missing }").unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-unknown-name"]);
    }

    #[test]
    fn ill_sorted_formulas_are_reported_with_the_clause() {
        let src = "sort Location sort Plan func length(Plan): Nat \
                   node n { out pose: Location assumes true guarantees length(pose) = 0 }";
        let diags = resolve_str(src).unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-ill-sorted"]);
        assert!(diags[0].message.contains("length"), "got {}", diags[0].message);
    }

    #[test]
    fn fan_in_to_one_port_is_rejected() {
        let src = "node a { out x: Nat assumes true guarantees true } \
                   node b { out x: Nat assumes true guarantees true } \
                   node c { in y: Nat assumes true guarantees true } \
                   connect a.x -> c.y connect b.x -> c.y";
        let diags = resolve_str(src).unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-fan-in"]);
    }

    #[test]
    fn connect_direction_violations_are_rejected() {
        let src = "node a { out x: Nat assumes true guarantees true } \
                   node b { in y: Nat assumes true guarantees true } \
                   connect b.y -> a.x";
        let diags = resolve_str(src).unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-edge-direction", "resolve-edge-direction"]);
    }

    #[test]
    fn set_of_nat_ports_are_rejected() {
        let diags =
            resolve_str("node n { in xs: Set<Nat> assumes true guarantees true }").unwrap_err();
        assert_eq!(codes(&diags), vec!["resolve-set-element"]);
    }

    #[test]
    fn evidence_sets_survive_resolution() {
        let (_, graph) = resolve_str(ROVER).unwrap();
        use crate::confidence::Technique;
        assert_eq!(
            graph.node("Vision").unwrap().evidence,
            [Technique::Testing].into_iter().collect()
        );
        assert_eq!(graph.node("Planner").unwrap().evidence.len(), 3);
        assert_eq!(graph.node("HardwareInterface").unwrap().evidence.len(), 2);
    }
}
