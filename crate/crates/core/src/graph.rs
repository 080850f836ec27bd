//! Typed node-and-edge model of a system architecture.
//!
//! Nodes carry typed ports and an assume-guarantee contract whose variables
//! are the node's qualified port names (`Node.port`); edges wire out-ports
//! to in-ports. Validation reports every structural violation (dangling
//! endpoints, sort mismatches, fan-in) and classifies the graph as acyclic
//! or lists its cycle components. Ordering functions are deterministic with
//! lexicographic tie-breaks so downstream reports are stable.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use thiserror::Error;

use crate::confidence::Technique;
use crate::logic::{free_vars, Formula, Sort, Var};

/// Port direction, from the owning node's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Direction {
    In,
    Out,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::In => "in",
            Direction::Out => "out",
        })
    }
}

/// A typed, directed port on a node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
    pub sort: Sort,
}

impl Port {
    pub fn new(name: impl Into<String>, direction: Direction, sort: Sort) -> Port {
        Port { name: name.into(), direction, sort }
    }
}

/// The variable a port contributes to its node's contract formulas:
/// `Node.port`, keeping variables from different nodes distinct under
/// composition.
pub fn port_var(node: &str, port: &Port) -> Var {
    Var::new(format!("{}.{}", node, port.name), port.sort.clone())
}

/// An assume-guarantee pair over a node's port variables.
///
/// The assumption ranges over input variables only; the guarantee over
/// inputs and outputs. Guarantees are stored without their implicit
/// top-level "eventually" (composition adds it explicitly).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contract {
    pub assumption: Formula,
    pub guarantee: Formula,
    pub inputs: Vec<Var>,
    pub outputs: Vec<Var>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("assumption references `{0}`, which is not an input variable")]
    AssumptionBeyondInputs(String),
    #[error("guarantee references `{0}`, which is neither an input nor an output variable")]
    GuaranteeBeyondPorts(String),
    #[error("assumptions must not contain `eventually`")]
    EventuallyInAssumption,
    #[error("`eventually` may only be the outermost connective of a guarantee")]
    NestedEventually,
}

impl Contract {
    pub fn new(
        assumption: Formula,
        guarantee: Formula,
        inputs: Vec<Var>,
        outputs: Vec<Var>,
    ) -> Result<Contract, ContractError> {
        if assumption.count_eventually() > 0 {
            return Err(ContractError::EventuallyInAssumption);
        }
        if guarantee.strip_eventually().count_eventually() > 0 {
            return Err(ContractError::NestedEventually);
        }
        let input_set: BTreeSet<&Var> = inputs.iter().collect();
        if let Some(stray) = free_vars(&assumption).iter().find(|v| !input_set.contains(v)) {
            return Err(ContractError::AssumptionBeyondInputs(stray.name.clone()));
        }
        let port_set: BTreeSet<&Var> = inputs.iter().chain(outputs.iter()).collect();
        if let Some(stray) = free_vars(&guarantee).iter().find(|v| !port_set.contains(v)) {
            return Err(ContractError::GuaranteeBeyondPorts(stray.name.clone()));
        }
        Ok(Contract { assumption, guarantee, inputs, outputs })
    }

    pub fn input(&self, name: &str) -> Option<&Var> {
        self.inputs.iter().find(|v| v.name == name)
    }

    pub fn output(&self, name: &str) -> Option<&Var> {
        self.outputs.iter().find(|v| v.name == name)
    }
}

/// A named node: ports, contract, and the verification techniques applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub name: String,
    pub ports: Vec<Port>,
    pub contract: Contract,
    pub evidence: BTreeSet<Technique>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NodeError {
    #[error("node `{0}` declares no ports")]
    NoPorts(String),
    #[error("node `{node}` declares port `{port}` more than once")]
    DuplicatePort { node: String, port: String },
    #[error("node `{0}`: contract variables do not match the node's qualified ports")]
    ContractPortsMismatch(String),
}

impl NodeSpec {
    pub fn new(
        name: impl Into<String>,
        ports: Vec<Port>,
        contract: Contract,
        evidence: BTreeSet<Technique>,
    ) -> Result<NodeSpec, NodeError> {
        let name = name.into();
        if ports.is_empty() {
            return Err(NodeError::NoPorts(name));
        }
        let mut seen = BTreeSet::new();
        for port in &ports {
            if !seen.insert(&port.name) {
                return Err(NodeError::DuplicatePort { node: name, port: port.name.clone() });
            }
        }
        let ins: BTreeSet<Var> = ports
            .iter()
            .filter(|p| p.direction == Direction::In)
            .map(|p| port_var(&name, p))
            .collect();
        let outs: BTreeSet<Var> = ports
            .iter()
            .filter(|p| p.direction == Direction::Out)
            .map(|p| port_var(&name, p))
            .collect();
        if ins != contract.inputs.iter().cloned().collect()
            || outs != contract.outputs.iter().cloned().collect()
        {
            return Err(NodeError::ContractPortsMismatch(name));
        }
        Ok(NodeSpec { name, ports, contract, evidence })
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn in_ports(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.direction == Direction::In)
    }

    pub fn out_ports(&self) -> impl Iterator<Item = &Port> {
        self.ports.iter().filter(|p| p.direction == Direction::Out)
    }
}

/// One side of an edge: a node name and one of its port names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EndpointRef {
    pub node: String,
    pub port: String,
}

impl EndpointRef {
    pub fn new(node: impl Into<String>, port: impl Into<String>) -> EndpointRef {
        EndpointRef { node: node.into(), port: port.into() }
    }
}

impl fmt::Display for EndpointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.node, self.port)
    }
}

/// A dataflow wire from an out-port to an in-port.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: EndpointRef,
    pub to: EndpointRef,
}

impl Edge {
    pub fn new(from: EndpointRef, to: EndpointRef) -> Edge {
        Edge { from, to }
    }

    pub fn is_self_loop(&self) -> bool {
        self.from.node == self.to.node
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node name `{0}` is declared more than once")]
    DuplicateNode(String),
}

/// Nodes plus wiring. Construction enforces only name uniqueness; all other
/// structural problems are surfaced by [`validate_graph`] so that a single
/// run can report every violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemGraph {
    nodes: Vec<NodeSpec>,
    edges: Vec<Edge>,
}

impl SystemGraph {
    pub fn new(nodes: Vec<NodeSpec>, edges: Vec<Edge>) -> Result<SystemGraph, GraphError> {
        let mut seen = BTreeSet::new();
        for node in &nodes {
            if !seen.insert(&node.name) {
                return Err(GraphError::DuplicateNode(node.name.clone()));
            }
        }
        Ok(SystemGraph { nodes, edges })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn node(&self, name: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.name == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn incoming(&self, node: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.to.node == node).collect()
    }

    pub fn outgoing(&self, node: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.from.node == node).collect()
    }

    /// The unique edge feeding an in-port, if any (fan-in is a violation).
    pub fn edge_into(&self, node: &str, port: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.to.node == node && e.to.port == port)
    }

    /// In-ports with no incoming edge: the system's environment-facing
    /// inputs, in node declaration order then port order.
    pub fn system_inputs(&self) -> Vec<EndpointRef> {
        let mut refs = Vec::new();
        for node in &self.nodes {
            for port in node.in_ports() {
                if self.edge_into(&node.name, &port.name).is_none() {
                    refs.push(EndpointRef::new(node.name.clone(), port.name.clone()));
                }
            }
        }
        refs
    }

    /// Out-ports with no outgoing edge: the system's observable outputs.
    pub fn system_outputs(&self) -> Vec<EndpointRef> {
        let mut refs = Vec::new();
        for node in &self.nodes {
            for port in node.out_ports() {
                let used = self
                    .edges
                    .iter()
                    .any(|e| e.from.node == node.name && e.from.port == port.name);
                if !used {
                    refs.push(EndpointRef::new(node.name.clone(), port.name.clone()));
                }
            }
        }
        refs
    }

    /// Nodes with no incoming edges from other nodes (self-loops ignored),
    /// in declaration order.
    pub fn sources(&self) -> Vec<&NodeSpec> {
        self.nodes
            .iter()
            .filter(|n| !self.edges.iter().any(|e| e.to.node == n.name && !e.is_self_loop()))
            .collect()
    }

    /// Nodes with no outgoing edges to other nodes (self-loops ignored),
    /// in declaration order.
    pub fn sinks(&self) -> Vec<&NodeSpec> {
        self.nodes
            .iter()
            .filter(|n| !self.edges.iter().any(|e| e.from.node == n.name && !e.is_self_loop()))
            .collect()
    }
}

/// One structural violation found by [`validate_graph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An edge endpoint names a node that does not exist.
    MissingNode { endpoint: EndpointRef },
    /// An edge endpoint names a port its node does not declare.
    MissingPort { endpoint: EndpointRef },
    /// An edge endpoint has the wrong direction for its role.
    WrongDirection { endpoint: EndpointRef, expected: Direction },
    /// An edge connects ports of different sorts.
    SortMismatch { from: EndpointRef, to: EndpointRef, from_sort: Sort, to_sort: Sort },
    /// An in-port with more than one incoming edge.
    FanIn { port: EndpointRef, incoming: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingNode { endpoint } => {
                write!(f, "edge endpoint {endpoint} names an unknown node")
            }
            Violation::MissingPort { endpoint } => {
                write!(f, "edge endpoint {endpoint} names an unknown port")
            }
            Violation::WrongDirection { endpoint, expected } => {
                write!(f, "edge endpoint {endpoint} must be an {expected}-port")
            }
            Violation::SortMismatch { from, to, from_sort, to_sort } => write!(
                f,
                "edge {from} -> {to} connects mismatched sorts {from_sort} and {to_sort}"
            ),
            Violation::FanIn { port, incoming } => {
                write!(f, "in-port {port} has {incoming} incoming edges (at most one allowed)")
            }
        }
    }
}

/// Everything [`validate_graph`] found: violations in stable order plus the
/// graph's cycle components (empty when acyclic). Self-loops count as
/// cycles of one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub cycles: Vec<Vec<String>>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// Checks every edge endpoint, sort, and fan-in rule, and computes cycle
/// components. Violations are report entries, never panics; entries appear
/// in edge order, then fan-in findings in port order.
pub fn validate_graph(graph: &SystemGraph) -> ValidationReport {
    let mut violations = Vec::new();
    for edge in graph.edges() {
        let mut from_sort = None;
        let mut to_sort = None;
        match graph.node(&edge.from.node) {
            None => violations.push(Violation::MissingNode { endpoint: edge.from.clone() }),
            Some(node) => match node.port(&edge.from.port) {
                None => violations.push(Violation::MissingPort { endpoint: edge.from.clone() }),
                Some(port) if port.direction != Direction::Out => {
                    violations.push(Violation::WrongDirection {
                        endpoint: edge.from.clone(),
                        expected: Direction::Out,
                    })
                }
                Some(port) => from_sort = Some(port.sort.clone()),
            },
        }
        match graph.node(&edge.to.node) {
            None => violations.push(Violation::MissingNode { endpoint: edge.to.clone() }),
            Some(node) => match node.port(&edge.to.port) {
                None => violations.push(Violation::MissingPort { endpoint: edge.to.clone() }),
                Some(port) if port.direction != Direction::In => {
                    violations.push(Violation::WrongDirection {
                        endpoint: edge.to.clone(),
                        expected: Direction::In,
                    })
                }
                Some(port) => to_sort = Some(port.sort.clone()),
            },
        }
        if let (Some(from_sort), Some(to_sort)) = (from_sort, to_sort) {
            if from_sort != to_sort {
                violations.push(Violation::SortMismatch {
                    from: edge.from.clone(),
                    to: edge.to.clone(),
                    from_sort,
                    to_sort,
                });
            }
        }
    }
    let mut fan_in: BTreeMap<EndpointRef, usize> = BTreeMap::new();
    for edge in graph.edges() {
        *fan_in.entry(edge.to.clone()).or_insert(0) += 1;
    }
    for (port, incoming) in fan_in {
        if incoming > 1 {
            violations.push(Violation::FanIn { port, incoming });
        }
    }
    ValidationReport { violations, cycles: cycle_components(graph, true) }
}

/// Strongly connected components that constitute cycles: components with
/// more than one node, plus single nodes with a self-loop (when
/// `include_self_loops`). Members and components are sorted by name.
fn cycle_components(graph: &SystemGraph, include_self_loops: bool) -> Vec<Vec<String>> {
    let names: Vec<&str> = graph.nodes().iter().map(|n| n.name.as_str()).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); names.len()];
    let mut has_self_loop = vec![false; names.len()];
    for edge in graph.edges() {
        if let (Some(&u), Some(&v)) = (index.get(edge.from.node.as_str()), index.get(edge.to.node.as_str()))
        {
            if u == v {
                has_self_loop[u] = true;
            } else {
                succ[u].insert(v);
            }
        }
    }
    let sccs = tarjan_sccs(&succ);
    let mut components: Vec<Vec<String>> = Vec::new();
    for scc in sccs {
        if scc.len() > 1 || (include_self_loops && has_self_loop[scc[0]]) {
            let mut names: Vec<String> = scc.iter().map(|&i| names[i].to_string()).collect();
            names.sort();
            components.push(names);
        }
    }
    components.sort();
    components
}

/// Iterative Tarjan over an index-based successor list; returns every SCC.
fn tarjan_sccs(succ: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut order = vec![usize::MAX; n]; // discovery index
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut sccs: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if order[root] != usize::MAX {
            continue;
        }
        // Each frame holds a node and an iterator position over successors.
        let mut frames: Vec<(usize, std::collections::btree_set::Iter<usize>)> = Vec::new();
        order[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, succ[root].iter()));
        while let Some((node, iter)) = frames.last_mut() {
            let node = *node;
            match iter.next() {
                Some(&next) => {
                    if order[next] == usize::MAX {
                        order[next] = next_index;
                        low[next] = next_index;
                        next_index += 1;
                        stack.push(next);
                        on_stack[next] = true;
                        frames.push((next, succ[next].iter()));
                    } else if on_stack[next] {
                        low[node] = low[node].min(order[next]);
                    }
                }
                None => {
                    frames.pop();
                    if let Some((parent, _)) = frames.last() {
                        low[*parent] = low[*parent].min(low[node]);
                    }
                    if low[node] == order[node] {
                        let mut scc = Vec::new();
                        loop {
                            let popped = stack.pop().expect("scc stack underflow");
                            on_stack[popped] = false;
                            scc.push(popped);
                            if popped == node {
                                break;
                            }
                        }
                        sccs.push(scc);
                    }
                }
            }
        }
    }
    sccs
}

/// Kahn's algorithm over the given edges, smallest node name first among
/// ready nodes. Returns the cycle components on failure.
fn kahn_order(graph: &SystemGraph, skip_self_loops: bool) -> Result<Vec<String>, Vec<Vec<String>>> {
    let names: Vec<&str> = graph.nodes().iter().map(|n| n.name.as_str()).collect();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut in_degree = vec![0usize; names.len()];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for edge in graph.edges() {
        if skip_self_loops && edge.is_self_loop() {
            continue;
        }
        if let (Some(&u), Some(&v)) = (index.get(edge.from.node.as_str()), index.get(edge.to.node.as_str()))
        {
            succ[u].push(v);
            in_degree[v] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<&str>> = names
        .iter()
        .enumerate()
        .filter(|(i, _)| in_degree[*i] == 0)
        .map(|(_, n)| Reverse(*n))
        .collect();
    let mut order = Vec::with_capacity(names.len());
    while let Some(Reverse(name)) = ready.pop() {
        order.push(name.to_string());
        let u = index[name];
        for &v in &succ[u] {
            in_degree[v] -= 1;
            if in_degree[v] == 0 {
                ready.push(Reverse(names[v]));
            }
        }
    }
    if order.len() == names.len() {
        Ok(order)
    } else {
        Err(cycle_components(graph, !skip_self_loops))
    }
}

/// Deterministic topological order of all nodes (lexicographic tie-break).
/// Any cycle — including a self-loop — yields the cycle components instead.
pub fn topological_order(graph: &SystemGraph) -> Result<Vec<String>, Vec<Vec<String>>> {
    kahn_order(graph, false)
}

/// The order nodes fire in during simulation: like [`topological_order`]
/// but self-loops are permitted (their outputs feed the next step), so only
/// multi-node cycles fail.
pub fn firing_order(graph: &SystemGraph) -> Result<Vec<String>, Vec<Vec<String>>> {
    kahn_order(graph, true)
}
