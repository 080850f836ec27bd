//! The composition calculus over assume-guarantee contracts.
//!
//! Wiring two contracts together creates a proof burden — the upstream
//! guarantee must establish the downstream assumption under the port
//! binding — and a composed contract for the combined unit. Four rules are
//! provided (sequential, join, branch, loop) plus [`system_contract`], which
//! folds a whole validated graph into one end-to-end contract and one
//! obligation per edge.
//!
//! Composed guarantees substitute bound input variables with the upstream
//! output variables that feed them, so a composed contract only mentions its
//! own boundary ports, and are wrapped in exactly one `eventually`
//! (`◊◊φ` collapses to `◊φ`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::entailment::{
    check_entailment, check_sat, CheckOptions, EntailmentError, EntailmentResult, SatResult,
    Scope, Witness,
};
use crate::graph::{firing_order, validate_graph, Contract, ContractError, EndpointRef, SystemGraph};
use crate::logic::subst::Binding;
use crate::logic::{substitute, Formula, Signature, SubstError, Term, Var, VarContext};

/// Unroll bound attached to loop contracts when no explicit bound is given.
pub const DEFAULT_LOOP_UNROLL: usize = 4;

/// Which composition rule produced a contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    Sequential,
    Join,
    Branch,
    Loop { unroll: usize },
    /// Whole-graph fold.
    System,
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Sequential => f.write_str("sequential"),
            Pattern::Join => f.write_str("join"),
            Pattern::Branch => f.write_str("branch"),
            Pattern::Loop { unroll } => write!(f, "loop(unroll={unroll})"),
            Pattern::System => f.write_str("system"),
        }
    }
}

/// Where an obligation came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// A graph edge (system fold).
    Edge { from: EndpointRef, to: EndpointRef },
    /// A node's self-loop (system fold).
    SelfLoop { node: String },
    /// A direct composition-rule call.
    Rule { pattern: Pattern },
}

impl Origin {
    pub fn from_label(&self) -> String {
        match self {
            Origin::Edge { from, .. } => from.to_string(),
            Origin::SelfLoop { node } => node.clone(),
            Origin::Rule { pattern } => pattern.to_string(),
        }
    }

    pub fn to_label(&self) -> String {
        match self {
            Origin::Edge { to, .. } => to.to_string(),
            Origin::SelfLoop { node } => node.clone(),
            Origin::Rule { pattern } => pattern.to_string(),
        }
    }
}

/// Discharge outcome of one obligation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObligationStatus {
    Pending,
    ValidWithinScope(Scope),
    Failed(Box<Witness>),
    Exhausted { examined: u64, budget: u64 },
}

impl ObligationStatus {
    pub fn label(&self) -> &'static str {
        match self {
            ObligationStatus::Pending => "pending",
            ObligationStatus::ValidWithinScope(_) => "valid-within-scope",
            ObligationStatus::Failed(_) => "failed",
            ObligationStatus::Exhausted { .. } => "exhausted",
        }
    }
}

/// One compatibility obligation: the hypotheses must entail the conclusion.
///
/// `binding` records, per bound downstream input variable, the upstream
/// output term substituted for it (the wiring the obligation was generated
/// under). After discharge, `vacuous_hypotheses` is `Some(true)` when the
/// conjoined hypotheses are unsatisfiable within the scope — the obligation
/// then holds only vacuously, which is surfaced as a warning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub id: String,
    pub hypotheses: Vec<Formula>,
    pub conclusion: Formula,
    pub binding: Binding,
    pub origin: Origin,
    pub status: ObligationStatus,
    pub vacuous_hypotheses: Option<bool>,
}

impl Obligation {
    fn pending(id: String, hypotheses: Vec<Formula>, conclusion: Formula, binding: Binding, origin: Origin) -> Obligation {
        Obligation {
            id,
            hypotheses,
            conclusion,
            binding,
            origin,
            status: ObligationStatus::Pending,
            vacuous_hypotheses: None,
        }
    }
}

/// A contract produced by composition. The guarantee carries exactly one
/// outermost `eventually`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposedContract {
    pub contract: Contract,
    pub pattern: Pattern,
    /// Node names, when the composition came from a graph fold.
    pub constituents: Vec<String>,
}

impl ComposedContract {
    pub fn assumption(&self) -> &Formula {
        &self.contract.assumption
    }

    pub fn guarantee(&self) -> &Formula {
        &self.contract.guarantee
    }
}

/// Downstream input variable name → upstream output variable name.
pub type PortBinding = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("binding names `{0}`, which is not an input variable of the downstream contract")]
    UnknownInputVar(String),
    #[error("binding names `{0}`, which is not an output variable of the upstream contract")]
    UnknownOutputVar(String),
    #[error("binding {input} <- {output} connects different sorts ({expected} vs {got})")]
    BindingSortMismatch { input: String, output: String, expected: String, got: String },
    #[error("input variable `{0}` is bound by more than one upstream")]
    OverlappingBindings(String),
    #[error("join requires at least one upstream contract")]
    NoUpstreams,
    #[error("join takes exactly one binding per upstream ({upstreams} upstreams, {bindings} bindings)")]
    BindingCountMismatch { upstreams: usize, bindings: usize },
    #[error("branch requires at least one branch contract")]
    NoBranches,
    #[error("branch guard references `{0}`, which is not an upstream output variable")]
    GuardBeyondUpstream(String),
    #[error("branch guards must not contain `eventually`")]
    EventuallyInGuard,
    #[error("loop composition requires a nonempty self-binding")]
    EmptySelfBinding,
    #[error("loop unroll bound must be at least 1")]
    ZeroUnroll,
    #[error("graph has structural violations; run validation first: {0}")]
    InvalidGraph(String),
    #[error("graph contains a multi-node cycle {0:?}; only self-loops are supported")]
    MultiNodeCycle(Vec<Vec<String>>),
    #[error(transparent)]
    Contract(#[from] ContractError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

fn var_context<'a>(groups: impl IntoIterator<Item = &'a [Var]>) -> VarContext {
    let mut ctx = VarContext::new();
    for group in groups {
        for var in group {
            ctx.insert(var.name.clone(), var.sort.clone());
        }
    }
    ctx
}

/// Validates a port binding against the two contracts and converts it to a
/// term-level substitution (input name → upstream output variable).
fn term_binding(
    downstream: &Contract,
    upstream: &Contract,
    binding: &PortBinding,
) -> Result<Binding, ComposeError> {
    let mut terms = Binding::new();
    for (in_name, out_name) in binding {
        let in_var = downstream
            .input(in_name)
            .ok_or_else(|| ComposeError::UnknownInputVar(in_name.clone()))?;
        let out_var = upstream
            .output(out_name)
            .ok_or_else(|| ComposeError::UnknownOutputVar(out_name.clone()))?;
        if in_var.sort != out_var.sort {
            return Err(ComposeError::BindingSortMismatch {
                input: in_name.clone(),
                output: out_name.clone(),
                expected: in_var.sort.to_string(),
                got: out_var.sort.to_string(),
            });
        }
        terms.insert(in_name.clone(), Term::Var(out_var.clone()));
    }
    Ok(terms)
}

fn sorted_vars(groups: impl IntoIterator<Item = Vec<Var>>) -> Vec<Var> {
    let set: BTreeSet<Var> = groups.into_iter().flatten().collect();
    set.into_iter().collect()
}

/// Sequential composition `c1 ; c2`.
///
/// The obligation demands that `c1`'s guarantee establish `c2`'s assumption
/// under the binding. The composed contract assumes what `c1` assumes and
/// eventually guarantees `c2`'s guarantee with bound inputs replaced by the
/// upstream outputs that feed them. Input ports of `c2` left unbound remain
/// environment-facing inputs of the composition.
pub fn compose_sequential(
    c1: &Contract,
    c2: &Contract,
    binding: &PortBinding,
    sig: &Signature,
) -> Result<(ComposedContract, Obligation), ComposeError> {
    let terms = term_binding(c2, c1, binding)?;
    let ctx = var_context([
        c1.inputs.as_slice(),
        c1.outputs.as_slice(),
        c2.inputs.as_slice(),
        c2.outputs.as_slice(),
    ]);
    let conclusion = substitute(&c2.assumption, &terms, sig, &ctx)?;
    let obligation = Obligation::pending(
        "sequential".to_string(),
        vec![c1.guarantee.strip_eventually().clone()],
        conclusion,
        terms.clone(),
        Origin::Rule { pattern: Pattern::Sequential },
    );

    let guarantee = substitute(c2.guarantee.strip_eventually(), &terms, sig, &ctx)?;
    let inputs = sorted_vars([
        c1.inputs.clone(),
        c2.inputs.iter().filter(|v| !terms.contains_key(&v.name)).cloned().collect(),
    ]);
    let outputs = sorted_vars([c1.outputs.clone(), c2.outputs.clone()]);
    let contract =
        Contract::new(c1.assumption.clone(), guarantee.eventually(), inputs, outputs)?;
    Ok((
        ComposedContract { contract, pattern: Pattern::Sequential, constituents: Vec::new() },
        obligation,
    ))
}

/// Join: several upstreams feed disjoint input ports of one downstream.
///
/// One obligation: all upstream guarantees together must establish the
/// downstream assumption under the combined binding. The composed contract
/// conjoins the upstream assumptions. A single-upstream join is exactly
/// sequential composition.
pub fn compose_join(
    upstreams: &[&Contract],
    downstream: &Contract,
    bindings: &[PortBinding],
    sig: &Signature,
) -> Result<(ComposedContract, Obligation), ComposeError> {
    if upstreams.is_empty() {
        return Err(ComposeError::NoUpstreams);
    }
    if upstreams.len() != bindings.len() {
        return Err(ComposeError::BindingCountMismatch {
            upstreams: upstreams.len(),
            bindings: bindings.len(),
        });
    }
    if upstreams.len() == 1 {
        return compose_sequential(upstreams[0], downstream, &bindings[0], sig);
    }
    let mut combined = Binding::new();
    for (upstream, binding) in upstreams.iter().zip(bindings) {
        for (name, term) in term_binding(downstream, upstream, binding)? {
            if combined.insert(name.clone(), term).is_some() {
                return Err(ComposeError::OverlappingBindings(name));
            }
        }
    }
    let mut ctx_groups: Vec<&[Var]> = vec![downstream.inputs.as_slice(), downstream.outputs.as_slice()];
    for u in upstreams {
        ctx_groups.push(u.inputs.as_slice());
        ctx_groups.push(u.outputs.as_slice());
    }
    let ctx = var_context(ctx_groups);
    let conclusion = substitute(&downstream.assumption, &combined, sig, &ctx)?;
    let hypotheses: Vec<Formula> =
        upstreams.iter().map(|u| u.guarantee.strip_eventually().clone()).collect();
    let obligation = Obligation::pending(
        "join".to_string(),
        hypotheses,
        conclusion,
        combined.clone(),
        Origin::Rule { pattern: Pattern::Join },
    );

    let assumption = Formula::conjoin(upstreams.iter().map(|u| u.assumption.clone()).collect());
    let guarantee = substitute(downstream.guarantee.strip_eventually(), &combined, sig, &ctx)?;
    let inputs = sorted_vars(
        upstreams
            .iter()
            .map(|u| u.inputs.clone())
            .chain([downstream
                .inputs
                .iter()
                .filter(|v| !combined.contains_key(&v.name))
                .cloned()
                .collect()]),
    );
    let outputs = sorted_vars(
        upstreams.iter().map(|u| u.outputs.clone()).chain([downstream.outputs.clone()]),
    );
    let contract = Contract::new(assumption, guarantee.eventually(), inputs, outputs)?;
    Ok((
        ComposedContract { contract, pattern: Pattern::Join, constituents: Vec::new() },
        obligation,
    ))
}

/// Branch: one upstream fans out to several downstream contracts, each
/// optionally guarded by a formula over the upstream's outputs.
///
/// One obligation per branch (the guard joins the hypotheses unless it is
/// literally `true`). When every guard is `true` — pure fan-out — the
/// composed guarantee is the conjunction of branch guarantees; otherwise it
/// is the disjunction of `guard and guarantee` per branch. A single branch
/// guarded by `true` is exactly sequential composition.
pub fn compose_branch(
    upstream: &Contract,
    branches: &[(Formula, &Contract)],
    bindings: &[PortBinding],
    sig: &Signature,
) -> Result<(ComposedContract, Vec<Obligation>), ComposeError> {
    if branches.is_empty() {
        return Err(ComposeError::NoBranches);
    }
    if branches.len() != bindings.len() {
        return Err(ComposeError::BindingCountMismatch {
            upstreams: branches.len(),
            bindings: bindings.len(),
        });
    }
    let upstream_outs: BTreeSet<&Var> = upstream.outputs.iter().collect();
    for (guard, _) in branches {
        if guard.count_eventually() > 0 {
            return Err(ComposeError::EventuallyInGuard);
        }
        if let Some(stray) =
            crate::logic::free_vars(guard).iter().find(|v| !upstream_outs.contains(v))
        {
            return Err(ComposeError::GuardBeyondUpstream(stray.name.clone()));
        }
    }
    if branches.len() == 1 && branches[0].0 == Formula::True {
        let (contract, obligation) =
            compose_sequential(upstream, branches[0].1, &bindings[0], sig)?;
        return Ok((contract, vec![obligation]));
    }

    let mut obligations = Vec::with_capacity(branches.len());
    let mut guarantees = Vec::with_capacity(branches.len());
    let mut input_groups = vec![upstream.inputs.clone()];
    let mut output_groups = vec![upstream.outputs.clone()];
    let pure_fan_out = branches.iter().all(|(guard, _)| *guard == Formula::True);
    for (i, ((guard, branch), binding)) in branches.iter().zip(bindings).enumerate() {
        let terms = term_binding(branch, upstream, binding)?;
        let ctx = var_context([
            upstream.inputs.as_slice(),
            upstream.outputs.as_slice(),
            branch.inputs.as_slice(),
            branch.outputs.as_slice(),
        ]);
        let conclusion = substitute(&branch.assumption, &terms, sig, &ctx)?;
        let mut hypotheses = vec![upstream.guarantee.strip_eventually().clone()];
        if *guard != Formula::True {
            hypotheses.push(guard.clone());
        }
        obligations.push(Obligation::pending(
            format!("branch[{i}]"),
            hypotheses,
            conclusion,
            terms.clone(),
            Origin::Rule { pattern: Pattern::Branch },
        ));
        let branch_guarantee = substitute(branch.guarantee.strip_eventually(), &terms, sig, &ctx)?;
        guarantees.push(if pure_fan_out {
            branch_guarantee
        } else {
            guard.clone().and(branch_guarantee)
        });
        input_groups
            .push(branch.inputs.iter().filter(|v| !terms.contains_key(&v.name)).cloned().collect());
        output_groups.push(branch.outputs.clone());
    }
    let guarantee = if pure_fan_out {
        Formula::conjoin(guarantees)
    } else {
        Formula::disjoin(guarantees)
    };
    let contract = Contract::new(
        upstream.assumption.clone(),
        guarantee.eventually(),
        sorted_vars(input_groups),
        sorted_vars(output_groups),
    )?;
    Ok((
        ComposedContract { contract, pattern: Pattern::Branch, constituents: Vec::new() },
        obligations,
    ))
}

/// Loop: some outputs of a contract feed its own inputs.
///
/// The consistency obligation demands that the guarantee re-establish the
/// assumption with each looped input replaced by the output that feeds it.
/// The composed contract is the node's own, annotated with the monitoring
/// unroll bound.
pub fn compose_loop(
    c: &Contract,
    self_binding: &PortBinding,
    unroll: usize,
    sig: &Signature,
) -> Result<(ComposedContract, Obligation), ComposeError> {
    if unroll == 0 {
        return Err(ComposeError::ZeroUnroll);
    }
    if self_binding.is_empty() {
        return Err(ComposeError::EmptySelfBinding);
    }
    let terms = term_binding(c, c, self_binding)?;
    let ctx = var_context([c.inputs.as_slice(), c.outputs.as_slice()]);
    let conclusion = substitute(&c.assumption, &terms, sig, &ctx)?;
    let obligation = Obligation::pending(
        "loop".to_string(),
        vec![c.guarantee.strip_eventually().clone()],
        conclusion,
        terms,
        Origin::Rule { pattern: Pattern::Loop { unroll } },
    );
    let contract = Contract::new(
        c.assumption.clone(),
        c.guarantee.strip_eventually().clone().eventually(),
        c.inputs.clone(),
        c.outputs.clone(),
    )?;
    Ok((
        ComposedContract {
            contract,
            pattern: Pattern::Loop { unroll },
            constituents: Vec::new(),
        },
        obligation,
    ))
}

/// Per-outcome counts from a discharge run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DischargeSummary {
    pub valid: usize,
    pub failed: usize,
    pub exhausted: usize,
    /// Obligations that passed with unsatisfiable hypotheses.
    pub vacuous: usize,
}

/// Runs every obligation through the entailment checker, recording statuses
/// and counterexamples. Obligations that pass are additionally probed for
/// vacuity: if their conjoined hypotheses are unsatisfiable within scope,
/// the pass is flagged so reports can warn about it.
pub fn discharge_obligations(
    mut obligations: Vec<Obligation>,
    sig: &Signature,
    scope: &Scope,
    options: &CheckOptions,
) -> Result<(Vec<Obligation>, DischargeSummary), EntailmentError> {
    let mut summary = DischargeSummary::default();
    for obligation in &mut obligations {
        let result =
            check_entailment(&obligation.hypotheses, &obligation.conclusion, sig, scope, options)?;
        obligation.status = match result {
            EntailmentResult::Valid => {
                summary.valid += 1;
                let hyps = Formula::conjoin(obligation.hypotheses.clone());
                obligation.vacuous_hypotheses = match check_sat(&hyps, sig, scope, options)? {
                    SatResult::Sat(_) => Some(false),
                    SatResult::UnsatWithinScope(_) => {
                        summary.vacuous += 1;
                        Some(true)
                    }
                    SatResult::ResourceExhausted { .. } => None,
                };
                ObligationStatus::ValidWithinScope(scope.clone())
            }
            EntailmentResult::Counterexample(witness) => {
                summary.failed += 1;
                ObligationStatus::Failed(witness)
            }
            EntailmentResult::ResourceExhausted { examined, budget } => {
                summary.exhausted += 1;
                ObligationStatus::Exhausted { examined, budget }
            }
        };
    }
    Ok((obligations, summary))
}

/// Folds the whole graph into an end-to-end contract plus one obligation per
/// edge.
///
/// For an edge `U.out -> D.in`, the obligation's hypotheses are the
/// guarantees of all of `D`'s direct upstream nodes and its conclusion is
/// `D`'s assumption under the full binding of its externally fed inputs. A
/// self-loop on `D` instead yields one `loop:D` obligation per node from
/// the loop rule. The system assumption conjoins the assumptions of source
/// nodes; the system guarantee is one `eventually` over the conjunction of
/// sink guarantees (each substituted under its own incoming binding).
///
/// The graph must be structurally valid and free of multi-node cycles.
pub fn system_contract(
    graph: &SystemGraph,
    sig: &Signature,
    unroll: usize,
) -> Result<(ComposedContract, Vec<Obligation>), ComposeError> {
    if unroll == 0 {
        return Err(ComposeError::ZeroUnroll);
    }
    let report = validate_graph(graph);
    if !report.is_valid() {
        let rendered: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(ComposeError::InvalidGraph(rendered.join("; ")));
    }
    let order = firing_order(graph).map_err(ComposeError::MultiNodeCycle)?;

    let qualify = |node: &str, port: &str| format!("{node}.{port}");
    let mut obligations = Vec::new();
    let mut has_loop = false;
    for name in &order {
        let node = graph.node(name).expect("order lists graph nodes");
        let mut external: Vec<&crate::graph::Edge> =
            graph.incoming(name).into_iter().filter(|e| !e.is_self_loop()).collect();
        external.sort_by(|a, b| a.to.port.cmp(&b.to.port));

        if !external.is_empty() {
            // Full binding of the externally fed inputs.
            let mut terms = Binding::new();
            let mut ctx = var_context([node.contract.inputs.as_slice(), node.contract.outputs.as_slice()]);
            let mut upstream_names: BTreeSet<&str> = BTreeSet::new();
            for edge in &external {
                let upstream = graph.node(&edge.from.node).expect("validated endpoint");
                let out_var = upstream
                    .contract
                    .output(&qualify(&edge.from.node, &edge.from.port))
                    .expect("validated out-port");
                terms.insert(
                    qualify(name, &edge.to.port),
                    Term::Var(out_var.clone()),
                );
                upstream_names.insert(edge.from.node.as_str());
                for var in upstream.contract.outputs.iter().chain(upstream.contract.inputs.iter())
                {
                    ctx.insert(var.name.clone(), var.sort.clone());
                }
            }
            let conclusion = substitute(&node.contract.assumption, &terms, sig, &ctx)?;
            let hypotheses: Vec<Formula> = upstream_names
                .iter()
                .map(|u| {
                    graph
                        .node(u)
                        .expect("validated endpoint")
                        .contract
                        .guarantee
                        .strip_eventually()
                        .clone()
                })
                .collect();
            for edge in &external {
                obligations.push(Obligation::pending(
                    format!("{}->{}", edge.from, edge.to),
                    hypotheses.clone(),
                    conclusion.clone(),
                    terms.clone(),
                    Origin::Edge { from: edge.from.clone(), to: edge.to.clone() },
                ));
            }
        }

        let mut self_edges: Vec<&crate::graph::Edge> =
            graph.incoming(name).into_iter().filter(|e| e.is_self_loop()).collect();
        self_edges.sort_by(|a, b| a.to.port.cmp(&b.to.port));
        if !self_edges.is_empty() {
            has_loop = true;
            let mut self_binding = PortBinding::new();
            for edge in &self_edges {
                self_binding
                    .insert(qualify(name, &edge.to.port), qualify(name, &edge.from.port));
            }
            let (_, mut obligation) =
                compose_loop(&node.contract, &self_binding, unroll, sig)?;
            obligation.id = format!("loop:{name}");
            obligation.origin = Origin::SelfLoop { node: name.clone() };
            obligations.push(obligation);
        }
    }

    // System assumption: the source nodes' assumptions, in firing order.
    let sources: BTreeSet<&str> = graph.sources().iter().map(|n| n.name.as_str()).collect();
    let assumption = Formula::conjoin(
        order
            .iter()
            .filter(|n| sources.contains(n.as_str()))
            .map(|n| graph.node(n).unwrap().contract.assumption.clone())
            .collect(),
    );

    // System guarantee: sink guarantees under their incoming bindings.
    let sinks: BTreeSet<&str> = graph.sinks().iter().map(|n| n.name.as_str()).collect();
    let mut sink_guarantees = Vec::new();
    for name in order.iter().filter(|n| sinks.contains(n.as_str())) {
        let node = graph.node(name).expect("order lists graph nodes");
        let mut terms = Binding::new();
        let mut ctx = var_context([node.contract.inputs.as_slice(), node.contract.outputs.as_slice()]);
        for edge in graph.incoming(name).into_iter().filter(|e| !e.is_self_loop()) {
            let upstream = graph.node(&edge.from.node).expect("validated endpoint");
            let out_var = upstream
                .contract
                .output(&qualify(&edge.from.node, &edge.from.port))
                .expect("validated out-port");
            terms.insert(qualify(name, &edge.to.port), Term::Var(out_var.clone()));
            for var in upstream.contract.outputs.iter() {
                ctx.insert(var.name.clone(), var.sort.clone());
            }
        }
        sink_guarantees
            .push(substitute(node.contract.guarantee.strip_eventually(), &terms, sig, &ctx)?);
    }
    let guarantee = Formula::conjoin(sink_guarantees).eventually();

    // Boundary ports: inputs are in-ports fed by the environment or by a
    // self-loop; outputs are every node's out-ports.
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for node in graph.nodes() {
        for port in node.in_ports() {
            let feeder = graph.edge_into(&node.name, &port.name);
            if feeder.is_none() || feeder.is_some_and(|e| e.is_self_loop()) {
                inputs.push(Var::new(qualify(&node.name, &port.name), port.sort.clone()));
            }
        }
        for port in node.out_ports() {
            outputs.push(Var::new(qualify(&node.name, &port.name), port.sort.clone()));
        }
    }
    let contract = Contract::new(assumption, guarantee, sorted_vars([inputs]), sorted_vars([outputs]))?;
    let pattern = if has_loop { Pattern::Loop { unroll } } else { Pattern::System };
    Ok((
        ComposedContract { contract, pattern, constituents: order },
        obligations,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entailment::{Scope, DEFAULT_NAT_BOUND, DEFAULT_SCOPE};
    use crate::graph::{Edge, EndpointRef, SystemGraph};
    use crate::logic::{alpha_eq, Sort};
    use crate::testutil::{
        all_plans_contain_goal, nat_node, qvar, rover_graph, rover_mutant_graph, rover_signature,
    };

    fn default_scope(sig: &Signature) -> Scope {
        Scope::uniform(sig, DEFAULT_SCOPE, DEFAULT_NAT_BOUND)
    }

    fn planner_contract(graph: &SystemGraph) -> Contract {
        graph.node("Planner").unwrap().contract.clone()
    }

    fn agent_contract(graph: &SystemGraph) -> Contract {
        graph.node("Agent").unwrap().contract.clone()
    }

    fn planner_agent_binding() -> PortBinding {
        [("Agent.PlanSet".to_string(), "Planner.plans".to_string())].into()
    }

    #[test]
    fn sequential_obligation_relates_the_neighbouring_contracts() {
        let graph = rover_graph();
        let sig = rover_signature();
        let planner = planner_contract(&graph);
        let agent = agent_contract(&graph);
        let (composed, obligation) =
            compose_sequential(&planner, &agent, &planner_agent_binding(), &sig).unwrap();
        assert_eq!(obligation.hypotheses, vec![planner.guarantee.clone()]);
        // The conclusion is the agent's assumption re-expressed over the
        // planner's output.
        let expected = all_plans_contain_goal(&qvar("Planner", "plans", Sort::set("Plan")));
        assert!(alpha_eq(&obligation.conclusion, &expected));
        assert_eq!(composed.assumption(), &planner.assumption);
        assert_eq!(composed.guarantee().count_eventually(), 1);
    }

    #[test]
    fn syntactically_matching_contracts_discharge_immediately() {
        let graph = rover_graph();
        let sig = rover_signature();
        let (_, obligation) = compose_sequential(
            &planner_contract(&graph),
            &agent_contract(&graph),
            &planner_agent_binding(),
            &sig,
        )
        .unwrap();
        let scope = Scope::uniform(&sig, 1, 2);
        let (done, summary) =
            discharge_obligations(vec![obligation], &sig, &scope, &CheckOptions::default())
                .unwrap();
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
        assert_eq!(summary.valid, 1);
        assert_eq!(done[0].vacuous_hypotheses, Some(false));
    }

    #[test]
    fn chained_composition_keeps_a_single_eventually() {
        let graph = rover_graph();
        let sig = rover_signature();
        let vision = graph.node("Vision").unwrap().contract.clone();
        let planner = planner_contract(&graph);
        let agent = agent_contract(&graph);
        let binding1: PortBinding =
            [("Planner.pose".to_string(), "Vision.pose".to_string())].into();
        let (vp, _) = compose_sequential(&vision, &planner, &binding1, &sig).unwrap();
        assert_eq!(vp.guarantee().count_eventually(), 1);
        let (vpa, _) =
            compose_sequential(&vp.contract, &agent, &planner_agent_binding(), &sig).unwrap();
        assert_eq!(vpa.guarantee().count_eventually(), 1);
        assert_eq!(vpa.assumption(), &Formula::True);
    }

    #[test]
    fn binding_sort_mismatch_is_rejected() {
        let graph = rover_graph();
        let sig = rover_signature();
        // Planner.pose (Location out? no — pose is an in-port; use plans into
        // HardwareInterface.cmd: Set<Plan> -> Plan).
        let planner = planner_contract(&graph);
        let hardware = graph.node("HardwareInterface").unwrap().contract.clone();
        let binding: PortBinding =
            [("HardwareInterface.cmd".to_string(), "Planner.plans".to_string())].into();
        let err = compose_sequential(&planner, &hardware, &binding, &sig).unwrap_err();
        assert!(matches!(err, ComposeError::BindingSortMismatch { .. }));
    }

    /// Two Nat producers feeding one consumer whose assumption is exactly the
    /// conjunction of their guarantees.
    fn join_fixture() -> (Contract, Contract, Contract) {
        let a_out = qvar("u", "a", Sort::Nat);
        let b_out = qvar("v", "b", Sort::Nat);
        let u = Contract::new(
            Formula::True,
            Formula::Le(Term::Var(a_out.clone()), Term::Nat(3)),
            vec![],
            vec![a_out],
        )
        .unwrap();
        let v = Contract::new(
            Formula::True,
            Formula::Le(Term::Var(b_out.clone()), Term::Nat(3)),
            vec![],
            vec![b_out],
        )
        .unwrap();
        let x = qvar("w", "x", Sort::Nat);
        let y = qvar("w", "y", Sort::Nat);
        let out = qvar("w", "o", Sort::Nat);
        let w = Contract::new(
            Formula::Le(Term::Var(x.clone()), Term::Nat(3))
                .and(Formula::Le(Term::Var(y.clone()), Term::Nat(3))),
            Formula::Eq(Term::Var(out.clone()), Term::Nat(0)),
            vec![x, y],
            vec![out],
        )
        .unwrap();
        (u, v, w)
    }

    #[test]
    fn join_collects_every_upstream_guarantee() {
        let sig = Signature::new();
        let (u, v, w) = join_fixture();
        let bindings = [
            PortBinding::from([("w.x".to_string(), "u.a".to_string())]),
            PortBinding::from([("w.y".to_string(), "v.b".to_string())]),
        ];
        let (composed, obligation) = compose_join(&[&u, &v], &w, &bindings, &sig).unwrap();
        assert_eq!(obligation.hypotheses.len(), 2);
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(vec![obligation], &sig, &scope, &CheckOptions::default())
                .unwrap();
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
        assert_eq!(summary.valid, 1);
        // Composed assumption conjoins the upstream assumptions.
        assert_eq!(composed.assumption(), &Formula::True.and(Formula::True));
    }

    #[test]
    fn contradictory_upstreams_pass_vacuously_with_a_warning() {
        let mut sig = Signature::new();
        sig.add_pred("P", vec![]).unwrap();
        let u_out = qvar("u", "a", Sort::Nat);
        let v_out = qvar("v", "b", Sort::Nat);
        let u = Contract::new(Formula::True, Formula::pred("P", vec![]), vec![], vec![u_out])
            .unwrap();
        let v = Contract::new(
            Formula::True,
            Formula::pred("P", vec![]).not(),
            vec![],
            vec![v_out],
        )
        .unwrap();
        let x = qvar("w", "x", Sort::Nat);
        let y = qvar("w", "y", Sort::Nat);
        let o = qvar("w", "o", Sort::Nat);
        let w = Contract::new(
            Formula::False,
            Formula::Eq(Term::Var(o.clone()), Term::Nat(0)),
            vec![x, y],
            vec![o],
        )
        .unwrap();
        let bindings = [
            PortBinding::from([("w.x".to_string(), "u.a".to_string())]),
            PortBinding::from([("w.y".to_string(), "v.b".to_string())]),
        ];
        let (_, obligation) = compose_join(&[&u, &v], &w, &bindings, &sig).unwrap();
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(vec![obligation], &sig, &scope, &CheckOptions::default())
                .unwrap();
        // Inconsistent hypotheses entail anything — but the pass is flagged.
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
        assert_eq!(done[0].vacuous_hypotheses, Some(true));
        assert_eq!(summary.vacuous, 1);
    }

    #[test]
    fn single_upstream_join_is_sequential() {
        let graph = rover_graph();
        let sig = rover_signature();
        let planner = planner_contract(&graph);
        let agent = agent_contract(&graph);
        let binding = planner_agent_binding();
        let joined = compose_join(&[&planner], &agent, &[binding.clone()], &sig).unwrap();
        let sequential = compose_sequential(&planner, &agent, &binding, &sig).unwrap();
        assert_eq!(joined, sequential);
    }

    #[test]
    fn single_true_branch_is_sequential() {
        let graph = rover_graph();
        let sig = rover_signature();
        let planner = planner_contract(&graph);
        let agent = agent_contract(&graph);
        let binding = planner_agent_binding();
        let branched = compose_branch(
            &planner,
            &[(Formula::True, &agent)],
            &[binding.clone()],
            &sig,
        )
        .unwrap();
        let sequential = compose_sequential(&planner, &agent, &binding, &sig).unwrap();
        assert_eq!(branched.0, sequential.0);
        assert_eq!(branched.1, vec![sequential.1]);
    }

    /// An upstream Nat producer with two Nat consumers for branch tests.
    fn branch_fixture() -> (Contract, Contract, Contract) {
        let s_out = qvar("s", "o", Sort::Nat);
        let s = Contract::new(
            Formula::True,
            Formula::Le(Term::Var(s_out.clone()), Term::Nat(3)),
            vec![],
            vec![s_out],
        )
        .unwrap();
        let mk_consumer = |name: &str| {
            let i = qvar(name, "i", Sort::Nat);
            let o = qvar(name, "o", Sort::Nat);
            Contract::new(
                Formula::Le(Term::Var(i.clone()), Term::Nat(3)),
                Formula::Eq(Term::Var(o.clone()), Term::Nat(0)),
                vec![i],
                vec![o],
            )
            .unwrap()
        };
        (s, mk_consumer("b1"), mk_consumer("b2"))
    }

    #[test]
    fn fan_out_conjoins_branch_guarantees() {
        let sig = Signature::new();
        let (s, b1, b2) = branch_fixture();
        let bindings = [
            PortBinding::from([("b1.i".to_string(), "s.o".to_string())]),
            PortBinding::from([("b2.i".to_string(), "s.o".to_string())]),
        ];
        let (composed, obligations) = compose_branch(
            &s,
            &[(Formula::True, &b1), (Formula::True, &b2)],
            &bindings,
            &sig,
        )
        .unwrap();
        assert_eq!(obligations.len(), 2);
        // Pure fan-out: guards stay out of the hypotheses.
        for o in &obligations {
            assert_eq!(o.hypotheses.len(), 1);
        }
        let expected = Formula::Eq(Term::Var(qvar("b1", "o", Sort::Nat)), Term::Nat(0))
            .and(Formula::Eq(Term::Var(qvar("b2", "o", Sort::Nat)), Term::Nat(0)))
            .eventually();
        assert_eq!(composed.guarantee(), &expected);
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(obligations, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(summary.valid, 2);
        assert!(done.iter().all(|o| matches!(o.status, ObligationStatus::ValidWithinScope(_))));
    }

    #[test]
    fn guarded_branches_disjoin_guard_and_guarantee() {
        let sig = Signature::new();
        let (s, b1, b2) = branch_fixture();
        let guard = Formula::Le(Term::Var(qvar("s", "o", Sort::Nat)), Term::Nat(1));
        let bindings = [
            PortBinding::from([("b1.i".to_string(), "s.o".to_string())]),
            PortBinding::from([("b2.i".to_string(), "s.o".to_string())]),
        ];
        let (composed, obligations) = compose_branch(
            &s,
            &[(guard.clone(), &b1), (guard.clone().not(), &b2)],
            &bindings,
            &sig,
        )
        .unwrap();
        // Guards join the hypotheses of their branch's obligation.
        assert_eq!(obligations[0].hypotheses.len(), 2);
        assert_eq!(obligations[1].hypotheses.len(), 2);
        let g1 = guard
            .clone()
            .and(Formula::Eq(Term::Var(qvar("b1", "o", Sort::Nat)), Term::Nat(0)));
        let g2 = guard
            .clone()
            .not()
            .and(Formula::Eq(Term::Var(qvar("b2", "o", Sort::Nat)), Term::Nat(0)));
        assert_eq!(composed.guarantee(), &g1.or(g2).eventually());
    }

    #[test]
    fn guard_over_foreign_variables_is_rejected() {
        let sig = Signature::new();
        let (s, b1, _) = branch_fixture();
        let foreign = Formula::Le(Term::Var(qvar("b1", "o", Sort::Nat)), Term::Nat(1));
        let bindings = [PortBinding::from([("b1.i".to_string(), "s.o".to_string())])];
        let err = compose_branch(&s, &[(foreign, &b1)], &bindings, &sig).unwrap_err();
        assert_eq!(err, ComposeError::GuardBeyondUpstream("b1.o".into()));
    }

    fn counter_contract() -> Contract {
        let x = qvar("Counter", "x", Sort::Nat);
        let y = qvar("Counter", "y", Sort::Nat);
        Contract::new(
            Formula::Le(Term::Var(x.clone()), Term::Nat(3)),
            Formula::Le(Term::Var(y.clone()), Term::Nat(3)),
            vec![x],
            vec![y],
        )
        .unwrap()
    }

    #[test]
    fn loop_consistency_holds_for_the_bounded_counter() {
        let sig = Signature::new();
        let c = counter_contract();
        let binding = PortBinding::from([("Counter.x".to_string(), "Counter.y".to_string())]);
        let (composed, obligation) = compose_loop(&c, &binding, 4, &sig).unwrap();
        // Conclusion is the assumption over the looped output: y <= 3.
        assert_eq!(
            obligation.conclusion,
            Formula::Le(Term::Var(qvar("Counter", "y", Sort::Nat)), Term::Nat(3))
        );
        let scope = Scope::uniform(&sig, 3, 5);
        let (done, _) =
            discharge_obligations(vec![obligation], &sig, &scope, &CheckOptions::default())
                .unwrap();
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
        assert_eq!(composed.pattern, Pattern::Loop { unroll: 4 });
    }

    #[test]
    fn false_guarantee_loops_pass_vacuously_with_a_warning() {
        let sig = Signature::new();
        let x = qvar("n", "x", Sort::Nat);
        let y = qvar("n", "y", Sort::Nat);
        let c = Contract::new(
            Formula::Le(Term::Var(x.clone()), Term::Nat(3)),
            Formula::False,
            vec![x],
            vec![y],
        )
        .unwrap();
        let binding = PortBinding::from([("n.x".to_string(), "n.y".to_string())]);
        let (_, obligation) = compose_loop(&c, &binding, 1, &sig).unwrap();
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(vec![obligation], &sig, &scope, &CheckOptions::default())
                .unwrap();
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
        assert_eq!(done[0].vacuous_hypotheses, Some(true));
        assert_eq!(summary.vacuous, 1);
    }

    #[test]
    fn degenerate_loop_parameters_are_rejected() {
        let sig = Signature::new();
        let c = counter_contract();
        let binding = PortBinding::from([("Counter.x".to_string(), "Counter.y".to_string())]);
        assert_eq!(compose_loop(&c, &binding, 0, &sig).unwrap_err(), ComposeError::ZeroUnroll);
        assert_eq!(
            compose_loop(&c, &PortBinding::new(), 1, &sig).unwrap_err(),
            ComposeError::EmptySelfBinding
        );
    }

    #[test]
    fn empty_discharge_is_empty() {
        let sig = Signature::new();
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(vec![], &sig, &scope, &CheckOptions::default()).unwrap();
        assert!(done.is_empty());
        assert_eq!(summary, DischargeSummary::default());
    }

    #[test]
    fn rover_system_contract_spans_source_to_sink() {
        let graph = rover_graph();
        let sig = rover_signature();
        let (composed, obligations) =
            system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        assert_eq!(composed.assumption(), &Formula::True);
        let expected_guarantee = Formula::Eq(
            Term::Var(qvar("HardwareInterface", "done", Sort::Nat)),
            Term::Nat(0),
        )
        .eventually();
        assert_eq!(composed.guarantee(), &expected_guarantee);
        assert_eq!(composed.guarantee().count_eventually(), 1);
        let ids: Vec<&str> = obligations.iter().map(|o| o.id.as_str()).collect();
        assert_eq!(
            ids,
            vec![
                "Vision.pose->Planner.pose",
                "Planner.plans->Agent.PlanSet",
                "Agent.plan->HardwareInterface.cmd",
            ]
        );
    }

    #[test]
    fn rover_obligations_discharge_at_default_scope() {
        let graph = rover_graph();
        let sig = rover_signature();
        let (_, obligations) = system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(obligations, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(summary.valid, 3);
        assert_eq!(summary.failed, 0);
        assert!(done.iter().all(|o| matches!(o.status, ObligationStatus::ValidWithinScope(_))));
    }

    #[test]
    fn weakened_planner_fails_its_obligation_with_a_small_counterexample() {
        let graph = rover_mutant_graph();
        let sig = rover_signature();
        let (_, obligations) = system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        let scope = default_scope(&sig);
        let (done, summary) =
            discharge_obligations(obligations, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(summary.failed, 1);
        let failed = done.iter().find(|o| o.id == "Planner.plans->Agent.PlanSet").unwrap();
        match &failed.status {
            ObligationStatus::Failed(witness) => {
                assert!(witness.interpretation.size("Plan").unwrap() <= 2);
            }
            other => panic!("expected failure, got {other:?}"),
        }
        // The neighbouring obligations still hold.
        assert_eq!(summary.valid, 2);
    }

    /// Source fans out to b1/b2 which join into sink: four edges, and the
    /// per-edge fold yields four obligations.
    fn diamond_graph() -> (SystemGraph, Signature) {
        let sig = Signature::new();
        let mk = |name: &str, ins: &[&str], outs: &[&str], a: Formula, g: Formula| {
            let ports: Vec<crate::graph::Port> = ins
                .iter()
                .map(|p| crate::graph::Port::new(*p, crate::graph::Direction::In, Sort::Nat))
                .chain(outs.iter().map(|p| {
                    crate::graph::Port::new(*p, crate::graph::Direction::Out, Sort::Nat)
                }))
                .collect();
            let inputs = ins.iter().map(|p| qvar(name, p, Sort::Nat)).collect();
            let outputs = outs.iter().map(|p| qvar(name, p, Sort::Nat)).collect();
            crate::graph::NodeSpec::new(
                name,
                ports,
                Contract::new(a, g, inputs, outputs).unwrap(),
                Default::default(),
            )
            .unwrap()
        };
        let le3 = |node: &str, port: &str| {
            Formula::Le(Term::Var(qvar(node, port, Sort::Nat)), Term::Nat(3))
        };
        let source = mk("source", &[], &["x"], Formula::True, le3("source", "x"));
        let b1 = mk("b1", &["i"], &["o"], le3("b1", "i"), le3("b1", "o"));
        let b2 = mk("b2", &["i"], &["o"], le3("b2", "i"), le3("b2", "o"));
        let sink = mk(
            "sink",
            &["l", "r"],
            &["d"],
            le3("sink", "l").and(le3("sink", "r")),
            Formula::Eq(Term::Var(qvar("sink", "d", Sort::Nat)), Term::Nat(0)),
        );
        let edge = |a: (&str, &str), b: (&str, &str)| {
            Edge::new(EndpointRef::new(a.0, a.1), EndpointRef::new(b.0, b.1))
        };
        let graph = SystemGraph::new(
            vec![source, b1, b2, sink],
            vec![
                edge(("source", "x"), ("b1", "i")),
                edge(("source", "x"), ("b2", "i")),
                edge(("b1", "o"), ("sink", "l")),
                edge(("b2", "o"), ("sink", "r")),
            ],
        )
        .unwrap();
        (graph, sig)
    }

    #[test]
    fn diamond_fold_yields_one_obligation_per_edge() {
        let (graph, sig) = diamond_graph();
        let (composed, obligations) =
            system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        assert_eq!(obligations.len(), 4);
        // Edges into the join carry both upstream guarantees as hypotheses.
        let into_sink: Vec<&Obligation> =
            obligations.iter().filter(|o| o.id.contains("->sink")).collect();
        assert_eq!(into_sink.len(), 2);
        for o in into_sink {
            assert_eq!(o.hypotheses.len(), 2);
        }
        assert_eq!(
            composed.guarantee(),
            &Formula::Eq(Term::Var(qvar("sink", "d", Sort::Nat)), Term::Nat(0)).eventually()
        );
        let scope = default_scope(&sig);
        let (_, summary) =
            discharge_obligations(obligations, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(summary.valid, 4);
    }

    #[test]
    fn self_loop_nodes_get_a_loop_obligation() {
        let sig = Signature::new();
        let node = {
            let x = qvar("Counter", "x", Sort::Nat);
            let y = qvar("Counter", "y", Sort::Nat);
            crate::graph::NodeSpec::new(
                "Counter",
                vec![
                    crate::graph::Port::new("x", crate::graph::Direction::In, Sort::Nat),
                    crate::graph::Port::new("y", crate::graph::Direction::Out, Sort::Nat),
                ],
                Contract::new(
                    Formula::Le(Term::Var(x.clone()), Term::Nat(3)),
                    Formula::Le(Term::Var(y.clone()), Term::Nat(3)),
                    vec![x],
                    vec![y],
                )
                .unwrap(),
                Default::default(),
            )
            .unwrap()
        };
        let graph = SystemGraph::new(
            vec![node],
            vec![Edge::new(EndpointRef::new("Counter", "y"), EndpointRef::new("Counter", "x"))],
        )
        .unwrap();
        let (composed, obligations) = system_contract(&graph, &sig, 3).unwrap();
        assert_eq!(obligations.len(), 1);
        assert_eq!(obligations[0].id, "loop:Counter");
        assert_eq!(composed.pattern, Pattern::Loop { unroll: 3 });
        // The loop keeps the node's own assumption.
        assert_eq!(
            composed.assumption(),
            &Formula::Le(Term::Var(qvar("Counter", "x", Sort::Nat)), Term::Nat(3))
        );
        let scope = Scope::uniform(&sig, 3, 5);
        let (done, summary) =
            discharge_obligations(obligations, &sig, &scope, &CheckOptions::default()).unwrap();
        assert_eq!(summary.valid, 1);
        assert!(matches!(done[0].status, ObligationStatus::ValidWithinScope(_)));
    }

    #[test]
    fn multi_node_cycles_are_rejected() {
        let sig = Signature::new();
        let nodes = vec![nat_node("a", &["i"], &["o"]), nat_node("b", &["i"], &["o"])];
        let edges = vec![
            Edge::new(EndpointRef::new("a", "o"), EndpointRef::new("b", "i")),
            Edge::new(EndpointRef::new("b", "o"), EndpointRef::new("a", "i")),
        ];
        let graph = SystemGraph::new(nodes, edges).unwrap();
        let err = system_contract(&graph, &sig, 1).unwrap_err();
        assert_eq!(
            err,
            ComposeError::MultiNodeCycle(vec![vec!["a".to_string(), "b".to_string()]])
        );
    }

    #[test]
    fn single_node_graph_is_its_own_contract() {
        let sig = Signature::new();
        let graph = SystemGraph::new(vec![nat_node("only", &["i"], &["o"])], vec![]).unwrap();
        let (composed, obligations) = system_contract(&graph, &sig, 1).unwrap();
        assert!(obligations.is_empty());
        assert_eq!(composed.assumption(), &Formula::True);
        assert_eq!(composed.guarantee(), &Formula::True.eventually());
        assert_eq!(composed.constituents, vec!["only".to_string()]);
    }

    #[test]
    fn system_fold_is_deterministic() {
        let graph = rover_graph();
        let sig = rover_signature();
        let first = system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        let second = system_contract(&graph, &sig, DEFAULT_LOOP_UNROLL).unwrap();
        assert_eq!(first, second);
    }
}
