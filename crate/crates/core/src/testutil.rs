//! Shared fixtures for unit tests: the four-node rover pipeline and small
//! helper builders.

use std::collections::BTreeSet;

use crate::confidence::Technique;
use crate::graph::{Contract, Direction, Edge, EndpointRef, NodeSpec, Port, SystemGraph};
use crate::logic::{Formula, Signature, Sort, Term, Var};

/// Qualified port variable `node.port`.
pub fn qvar(node: &str, port: &str, sort: Sort) -> Var {
    Var::new(format!("{node}.{port}"), sort)
}

/// The rover vocabulary: sorts Location and Plan, the goal constant, plan
/// length, membership of a location in a plan, and localization.
pub fn rover_signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_sort("Location").unwrap();
    sig.add_sort("Plan").unwrap();
    sig.add_func("goal", vec![], Sort::base("Location")).unwrap();
    sig.add_func("length", vec![Sort::base("Plan")], Sort::Nat).unwrap();
    sig.add_pred("contains", vec![Sort::base("Plan"), Sort::base("Location")]).unwrap();
    sig.add_pred("localized", vec![Sort::base("Location")]).unwrap();
    sig
}

fn plan() -> Sort {
    Sort::base("Plan")
}

fn location() -> Sort {
    Sort::base("Location")
}

/// `forall p : Plan . p in <set_var> => contains(p, goal)`.
pub fn all_plans_contain_goal(set_var: &Var) -> Formula {
    Formula::forall(
        "p",
        plan(),
        Formula::In(Term::var("p", plan()), Term::Var(set_var.clone()))
            .implies(Formula::pred("contains", vec![Term::var("p", plan()), Term::cnst("goal")])),
    )
}

/// `exists p : Plan . p in <set_var> and contains(p, goal)` — the weakened
/// planner guarantee used in counterexample tests.
pub fn some_plan_contains_goal(set_var: &Var) -> Formula {
    Formula::exists(
        "p",
        plan(),
        Formula::In(Term::var("p", plan()), Term::Var(set_var.clone()))
            .and(Formula::pred("contains", vec![Term::var("p", plan()), Term::cnst("goal")])),
    )
}

/// The shortest-plan selection guarantee over the given set/choice vars:
/// `chosen in set and forall p . (p in set and p != chosen) =>
/// length(chosen) <= length(p)`.
pub fn shortest_plan_guarantee(set_var: &Var, chosen: &Var) -> Formula {
    let p = Term::var("p", plan());
    Formula::In(Term::Var(chosen.clone()), Term::Var(set_var.clone())).and(Formula::forall(
        "p",
        plan(),
        Formula::In(p.clone(), Term::Var(set_var.clone()))
            .and(Formula::Neq(p.clone(), Term::Var(chosen.clone())))
            .implies(Formula::Le(
                Term::app("length", vec![Term::Var(chosen.clone())]),
                Term::app("length", vec![p]),
            )),
    ))
}

fn evidence(techs: &[Technique]) -> BTreeSet<Technique> {
    techs.iter().copied().collect()
}

fn vision_node() -> NodeSpec {
    let pose = qvar("Vision", "pose", location());
    NodeSpec::new(
        "Vision",
        vec![Port::new("pose", Direction::Out, location())],
        Contract::new(
            Formula::True,
            Formula::pred("localized", vec![Term::Var(pose.clone())]),
            vec![],
            vec![pose],
        )
        .unwrap(),
        evidence(&[Technique::Testing]),
    )
    .unwrap()
}

fn planner_node(weakened: bool) -> NodeSpec {
    let pose = qvar("Planner", "pose", location());
    let plans = qvar("Planner", "plans", Sort::set("Plan"));
    let guarantee = if weakened {
        some_plan_contains_goal(&plans)
    } else {
        all_plans_contain_goal(&plans)
    };
    NodeSpec::new(
        "Planner",
        vec![
            Port::new("pose", Direction::In, location()),
            Port::new("plans", Direction::Out, Sort::set("Plan")),
        ],
        Contract::new(
            Formula::pred("localized", vec![Term::Var(pose.clone())]),
            guarantee,
            vec![pose],
            vec![plans],
        )
        .unwrap(),
        evidence(&Technique::ALL),
    )
    .unwrap()
}

fn agent_node() -> NodeSpec {
    let plan_set = qvar("Agent", "PlanSet", Sort::set("Plan"));
    let chosen = qvar("Agent", "plan", plan());
    NodeSpec::new(
        "Agent",
        vec![
            Port::new("PlanSet", Direction::In, Sort::set("Plan")),
            Port::new("plan", Direction::Out, plan()),
        ],
        Contract::new(
            all_plans_contain_goal(&plan_set),
            shortest_plan_guarantee(&plan_set, &chosen),
            vec![plan_set],
            vec![chosen],
        )
        .unwrap(),
        evidence(&Technique::ALL),
    )
    .unwrap()
}

fn hardware_node() -> NodeSpec {
    let cmd = qvar("HardwareInterface", "cmd", plan());
    let done = qvar("HardwareInterface", "done", Sort::Nat);
    NodeSpec::new(
        "HardwareInterface",
        vec![
            Port::new("cmd", Direction::In, plan()),
            Port::new("done", Direction::Out, Sort::Nat),
        ],
        Contract::new(
            Formula::True,
            Formula::Eq(Term::Var(done.clone()), Term::Nat(0)),
            vec![cmd],
            vec![done],
        )
        .unwrap(),
        evidence(&[Technique::Testing, Technique::Simulation]),
    )
    .unwrap()
}

fn rover_edges() -> Vec<Edge> {
    vec![
        Edge::new(EndpointRef::new("Vision", "pose"), EndpointRef::new("Planner", "pose")),
        Edge::new(EndpointRef::new("Planner", "plans"), EndpointRef::new("Agent", "PlanSet")),
        Edge::new(EndpointRef::new("Agent", "plan"), EndpointRef::new("HardwareInterface", "cmd")),
    ]
}

/// The four-node rover pipeline with compatible contracts and the standard
/// evidence matrix.
pub fn rover_graph() -> SystemGraph {
    SystemGraph::new(
        vec![vision_node(), planner_node(false), agent_node(), hardware_node()],
        rover_edges(),
    )
    .unwrap()
}

/// The rover pipeline with the planner guarantee weakened to an existential,
/// breaking the Planner → Agent obligation.
pub fn rover_mutant_graph() -> SystemGraph {
    SystemGraph::new(
        vec![vision_node(), planner_node(true), agent_node(), hardware_node()],
        rover_edges(),
    )
    .unwrap()
}

/// A minimal node with the given Nat-sorted in/out ports and the trivial
/// contract (assumes true, guarantees true).
pub fn nat_node(name: &str, ins: &[&str], outs: &[&str]) -> NodeSpec {
    let mut ports = Vec::new();
    for p in ins {
        ports.push(Port::new(*p, Direction::In, Sort::Nat));
    }
    for p in outs {
        ports.push(Port::new(*p, Direction::Out, Sort::Nat));
    }
    let inputs = ins.iter().map(|p| qvar(name, p, Sort::Nat)).collect();
    let outputs = outs.iter().map(|p| qvar(name, p, Sort::Nat)).collect();
    NodeSpec::new(
        name,
        ports,
        Contract::new(Formula::True, Formula::True, inputs, outputs).unwrap(),
        BTreeSet::new(),
    )
    .unwrap()
}
