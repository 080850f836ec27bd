//! Finite-trace runtime monitors and a deterministic simulation harness.
//!
//! A monitor turns one contract `(A, G)` into a small state machine that
//! watches a trace of port-valuation events and reports, once the trace ends,
//! whether the contract was satisfied, violated, or never exercised:
//!
//! - `idle` — the assumption has not yet held at any input event;
//! - `obligated(since = s)` — `A` held at the input event of step `s`; the
//!   input values seen so far are frozen into the obligation, and the
//!   guarantee is now owed;
//! - `satisfied(at = s)` — while obligated, `G` evaluated to true at the
//!   output event of step `s` (over the frozen inputs plus current outputs);
//! - `violated` — the trace ended while still obligated;
//! - `vacuous` — the trace ended without the assumption ever holding.
//!
//! The last three states are verdicts and absorb all further events. The
//! temporal reading of a composed guarantee `eventually G` over a finite
//! trace is exactly "satisfied at some output event before the end"; the
//! monitor therefore strips the outermost `eventually` and judges the bare
//! formula at each output event. Quantifiers range over the closed, finite
//! universe declared by the scenario.
//!
//! Freezing matters when a node fires several times: the guarantee is judged
//! against the inputs that triggered the obligation, not against whatever the
//! inputs have drifted to by the time an output arrives.
//!
//! Traces are sequences of [`Event`]s with non-decreasing step numbers, the
//! input event of a firing preceding its output event. [`check_trace`]
//! replays recorded traces offline and agrees exactly with the verdicts the
//! live harness produced; [`Trace::to_json_lines`] serializes a trace one
//! JSON object per line, deterministically, so byte-equal traces certify
//! byte-equal runs.
//!
//! The harness itself lives in [`run_simulation`]: it fires stubbed nodes in
//! topological order, once per node per step, feeding self-loop outputs back
//! into the next step's inputs, and steps one monitor per node plus one for
//! the composed end-to-end contract.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::compose::ComposeError;
use crate::graph::{Contract, SystemGraph};
use crate::logic::{evaluate, free_vars, Assignment, EvalError, Formula, Sort, Value};

mod scenario;
mod sim;
mod stub;

pub use scenario::{parse_scenario, Scenario, ScenarioError, ScenarioUniverse};
pub use sim::{run_simulation, SimulationOutcome};
pub use stub::{NodeStub, StubBehavior};

/// Which half of a firing an event records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    /// The node's in-port values at the start of a firing.
    Input,
    /// The node's out-port values produced by the firing.
    Output,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Input => write!(f, "input"),
            Phase::Output => write!(f, "output"),
        }
    }
}

/// One observation: the values on one side of one node at one step.
///
/// `values` is keyed by bare port name; monitors qualify the keys with the
/// node name (`Agent.plan`) to match contract variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub step: usize,
    pub node: String,
    pub phase: Phase,
    pub values: BTreeMap<String, Value>,
}

impl Event {
    pub fn new(
        step: usize,
        node: impl Into<String>,
        phase: Phase,
        values: BTreeMap<String, Value>,
    ) -> Event {
        Event { step, node: node.into(), phase, values }
    }

    /// The event's values keyed by qualified variable name (`node.port`).
    fn qualified(&self) -> impl Iterator<Item = (String, Value)> + '_ {
        self.values.iter().map(|(port, &v)| (format!("{}.{}", self.node, port), v))
    }
}

/// An ordered record of events, as produced by the harness or read back from
/// a file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<Event>,
}

impl Trace {
    pub fn new(events: Vec<Event>) -> Trace {
        Trace { events }
    }

    /// Serializes the trace as JSON lines: one event object per line, keys in
    /// a fixed order, values rendered with the universe's element names (set
    /// values as arrays). The output is deterministic, so two traces are
    /// byte-equal exactly when they record the same events.
    pub fn to_json_lines(
        &self,
        graph: &SystemGraph,
        universe: &ScenarioUniverse,
    ) -> Result<String, MonitorError> {
        let mut out = String::new();
        for event in &self.events {
            let node = graph.node(&event.node).ok_or_else(|| {
                MonitorError::MalformedTrace(format!("event names unknown node `{}`", event.node))
            })?;
            let mut values = Vec::new();
            for (port_name, &value) in &event.values {
                let port = node.port(port_name).ok_or_else(|| {
                    MonitorError::MalformedTrace(format!(
                        "event names unknown port `{}.{}`",
                        event.node, port_name
                    ))
                })?;
                values.push(format!(
                    "{}:{}",
                    serde_json::Value::String(port_name.clone()),
                    universe.value_to_json(&port.sort, value)
                ));
            }
            // Keys are written in a fixed, readable order (step first), not
            // whatever order a JSON map implementation would impose.
            out.push_str(&format!(
                "{{\"step\":{},\"node\":{},\"phase\":\"{}\",\"values\":{{{}}}}}\n",
                event.step,
                serde_json::Value::String(event.node.clone()),
                event.phase,
                values.join(",")
            ));
        }
        Ok(out)
    }

    /// Parses a trace back from the JSON-lines form written by
    /// [`Trace::to_json_lines`].
    pub fn from_json_lines(
        text: &str,
        graph: &SystemGraph,
        universe: &ScenarioUniverse,
    ) -> Result<Trace, MonitorError> {
        let mut events = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| {
                MonitorError::MalformedTrace(format!("line {}: {what}", idx + 1))
            };
            let json: serde_json::Value =
                serde_json::from_str(line).map_err(|e| bad(&format!("not JSON ({e})")))?;
            let step = json["step"].as_u64().ok_or_else(|| bad("missing numeric `step`"))?;
            let node_name =
                json["node"].as_str().ok_or_else(|| bad("missing string `node`"))?.to_string();
            let phase = match json["phase"].as_str() {
                Some("input") => Phase::Input,
                Some("output") => Phase::Output,
                _ => return Err(bad("`phase` must be \"input\" or \"output\"")),
            };
            let node = graph
                .node(&node_name)
                .ok_or_else(|| bad(&format!("unknown node `{node_name}`")))?;
            let obj = json["values"]
                .as_object()
                .ok_or_else(|| bad("missing object `values`"))?;
            let mut values = BTreeMap::new();
            for (port_name, raw) in obj {
                let port = node
                    .port(port_name)
                    .ok_or_else(|| bad(&format!("unknown port `{node_name}.{port_name}`")))?;
                let value = universe
                    .value_from_json(&port.sort, raw)
                    .map_err(|e| bad(&format!("port `{node_name}.{port_name}`: {e}")))?;
                values.insert(port_name.clone(), value);
            }
            events.push(Event::new(step as usize, node_name, phase, values));
        }
        Ok(Trace::new(events))
    }
}

/// The state of one contract monitor. See the module docs for the machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MonitorState {
    Idle,
    Obligated { since: usize, frozen: Assignment },
    Satisfied { at: usize },
    Violated,
    Vacuous,
}

impl MonitorState {
    /// True for the three absorbing end states.
    pub fn is_verdict(&self) -> bool {
        matches!(
            self,
            MonitorState::Satisfied { .. } | MonitorState::Violated | MonitorState::Vacuous
        )
    }

    /// True when the trace ended without the assumption ever holding.
    pub fn is_vacuous(&self) -> bool {
        matches!(self, MonitorState::Vacuous)
    }

    /// True when the trace ended with an unmet obligation.
    pub fn is_violated(&self) -> bool {
        matches!(self, MonitorState::Violated)
    }
}

impl fmt::Display for MonitorState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonitorState::Idle => write!(f, "idle"),
            MonitorState::Obligated { since, .. } => write!(f, "obligated(since={since})"),
            MonitorState::Satisfied { at } => write!(f, "satisfied(at={at})"),
            MonitorState::Violated => write!(f, "violated"),
            MonitorState::Vacuous => write!(f, "vacuous"),
        }
    }
}

/// The input to one monitor step: either the next event or the end of the
/// trace, which forces every non-verdict state to a verdict.
#[derive(Debug, Clone, Copy)]
pub enum MonitorEvent<'a> {
    Step(&'a Event),
    End,
}

/// A running monitor: one contract plus the universe it is judged in.
///
/// The monitor accumulates every qualified binding it is fed, so it works
/// both per node (fed only that node's events) and for a composed contract
/// whose variables are scattered across several nodes (fed the whole trace).
#[derive(Debug, Clone)]
pub struct Monitor {
    assumption: Formula,
    /// The guarantee with its outermost `eventually` (if any) stripped; the
    /// monitor itself provides the temporal interpretation.
    guarantee: Formula,
    /// Names of the contract's input variables — the part frozen on
    /// obligation.
    input_vars: BTreeSet<String>,
    /// Sorts of the contract's port variables, for checking incoming values.
    var_sorts: BTreeMap<String, Sort>,
    universe: ScenarioUniverse,
    env: Assignment,
    state: MonitorState,
}

impl Monitor {
    pub fn state(&self) -> &MonitorState {
        &self.state
    }

    pub fn into_state(self) -> MonitorState {
        self.state
    }
}

/// Error raised by monitors and the simulation harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonitorError {
    #[error("the universe declares no sort `{0}`, which the contract mentions")]
    MissingSort(String),
    #[error("value {value:?} for `{var}` does not fit sort {sort} in this universe")]
    ValueOutsideUniverse { var: String, value: Value, sort: Sort },
    #[error("no stub provided for node `{0}`")]
    MissingStub(String),
    #[error("no environment input provided for system-level in-port `{0}`")]
    MissingInput(String),
    #[error("environment input `{key}` is invalid: {reason}")]
    BadInput { key: String, reason: String },
    #[error("stub for node `{node}` produced a bad output: {reason}")]
    StubOutput { node: String, reason: String },
    #[error("nodes form a cycle and cannot be fired in order: {}", render_cycles(.0))]
    Cycle(Vec<Vec<String>>),
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

fn render_cycles(cycles: &[Vec<String>]) -> String {
    cycles
        .iter()
        .map(|c| c.join(" -> "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Builds an idle monitor for `contract`, judged in `universe`.
///
/// Fails if the contract mentions a sort the universe does not declare, so a
/// monitor can never stall mid-trace on a missing domain.
pub fn instantiate_monitor(
    contract: &Contract,
    universe: &ScenarioUniverse,
) -> Result<Monitor, MonitorError> {
    let guarantee = contract.guarantee.strip_eventually().clone();
    for sort in contract_sorts(contract) {
        if universe.size(&sort).is_none() {
            return Err(MonitorError::MissingSort(sort));
        }
    }
    let var_sorts = contract
        .inputs
        .iter()
        .chain(&contract.outputs)
        .map(|v| (v.name.clone(), v.sort.clone()))
        .collect();
    Ok(Monitor {
        assumption: contract.assumption.clone(),
        guarantee,
        input_vars: contract.inputs.iter().map(|v| v.name.clone()).collect(),
        var_sorts,
        universe: universe.clone(),
        env: Assignment::new(),
        state: MonitorState::Idle,
    })
}

/// Every base-sort name the contract's variables or quantifiers mention.
fn contract_sorts(contract: &Contract) -> BTreeSet<String> {
    let mut sorts = BTreeSet::new();
    for var in contract.inputs.iter().chain(&contract.outputs) {
        add_sort(&var.sort, &mut sorts);
    }
    bound_sorts(&contract.assumption, &mut sorts);
    bound_sorts(&contract.guarantee, &mut sorts);
    sorts
}

fn add_sort(sort: &Sort, out: &mut BTreeSet<String>) {
    match sort {
        Sort::Base(s) | Sort::Set(s) => {
            out.insert(s.clone());
        }
        Sort::Nat => {}
    }
}

/// Collects the sorts of quantifier-bound variables.
fn bound_sorts(formula: &Formula, out: &mut BTreeSet<String>) {
    match formula {
        Formula::True | Formula::False => {}
        Formula::Pred(_, _)
        | Formula::Eq(_, _)
        | Formula::Neq(_, _)
        | Formula::Le(_, _)
        | Formula::Lt(_, _)
        | Formula::In(_, _) => {}
        Formula::Not(b) | Formula::Eventually(b) => bound_sorts(b, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            bound_sorts(l, out);
            bound_sorts(r, out);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            add_sort(&v.sort, out);
            bound_sorts(b, out);
        }
    }
}

/// Evaluates `formula` if all of its free variables are bound in `env`;
/// returns `None` when some are still missing (the formula is not yet
/// judgeable at this point in the trace).
fn try_evaluate(
    formula: &Formula,
    universe: &ScenarioUniverse,
    env: &Assignment,
) -> Result<Option<bool>, MonitorError> {
    if free_vars(formula).iter().any(|v| env.get(&v.name).is_none()) {
        return Ok(None);
    }
    Ok(Some(evaluate(formula, universe.interpretation(), env)?))
}

/// Advances `monitor` by one event or by the end-of-trace marker.
///
/// Transitions: at an input event where the assumption holds, `idle` becomes
/// `obligated` and the input values are frozen; at an output event where the
/// guarantee holds over the frozen inputs plus current outputs, `obligated`
/// becomes `satisfied`. The end of the trace forces `obligated` to `violated`
/// and `idle` to `vacuous`. Verdict states absorb everything.
///
/// Fails if an event carries a value outside the universe for one of the
/// contract's variables.
pub fn step_monitor(monitor: &mut Monitor, event: MonitorEvent<'_>) -> Result<(), MonitorError> {
    let event = match event {
        MonitorEvent::End => {
            monitor.state = match monitor.state {
                MonitorState::Idle => MonitorState::Vacuous,
                MonitorState::Obligated { .. } => MonitorState::Violated,
                ref verdict => verdict.clone(),
            };
            return Ok(());
        }
        MonitorEvent::Step(e) => e,
    };

    // Accumulate the event's bindings even in verdict states, so that a
    // monitor's environment stays a faithful record; verdicts still absorb.
    for (name, value) in event.qualified() {
        if let Some(sort) = monitor.var_sorts.get(&name) {
            if !monitor.universe.value_fits(value, sort) {
                return Err(MonitorError::ValueOutsideUniverse {
                    var: name,
                    value,
                    sort: sort.clone(),
                });
            }
        }
        monitor.env.insert(name, value);
    }
    if monitor.state.is_verdict() {
        return Ok(());
    }

    match (monitor.state.clone(), event.phase) {
        (MonitorState::Idle, Phase::Input) => {
            if try_evaluate(&monitor.assumption, &monitor.universe, &monitor.env)?
                == Some(true)
            {
                let frozen: Assignment = monitor
                    .env
                    .iter()
                    .filter(|(name, _)| monitor.input_vars.contains(*name))
                    .map(|(name, &value)| (name.clone(), value))
                    .collect();
                monitor.state = MonitorState::Obligated { since: event.step, frozen };
            }
        }
        (MonitorState::Obligated { frozen, .. }, Phase::Output) => {
            // Current bindings, with the frozen triggering inputs winning.
            let mut judged = monitor.env.clone();
            for (name, &value) in frozen.iter() {
                judged.insert(name.clone(), value);
            }
            if try_evaluate(&monitor.guarantee, &monitor.universe, &judged)? == Some(true) {
                monitor.state = MonitorState::Satisfied { at: event.step };
            }
        }
        _ => {}
    }
    Ok(())
}

/// Checks that a trace is well-formed: steps non-decreasing overall, and per
/// node the phases alternate starting with an input (each firing's input
/// precedes its output).
fn validate_trace(trace: &Trace) -> Result<(), MonitorError> {
    let mut last_step = 0usize;
    let mut last_phase: BTreeMap<&str, Phase> = BTreeMap::new();
    for (idx, event) in trace.events.iter().enumerate() {
        if event.step < last_step {
            return Err(MonitorError::MalformedTrace(format!(
                "event {idx} steps backwards from {last_step} to {}",
                event.step
            )));
        }
        last_step = event.step;
        let previous = last_phase.insert(&event.node, event.phase);
        let expected = match previous {
            None | Some(Phase::Output) => Phase::Input,
            Some(Phase::Input) => Phase::Output,
        };
        if event.phase != expected {
            return Err(MonitorError::MalformedTrace(format!(
                "event {idx}: node `{}` has an {} event where an {} event was expected",
                event.node, event.phase, expected
            )));
        }
    }
    Ok(())
}

/// Replays a recorded trace against per-node contracts, offline.
///
/// Each contract gets a fresh monitor fed exactly its node's events, then the
/// end-of-trace marker. The verdicts agree with what live monitors reported
/// during the run that recorded the trace.
pub fn check_trace(
    trace: &Trace,
    contracts: &BTreeMap<String, Contract>,
    universe: &ScenarioUniverse,
) -> Result<BTreeMap<String, MonitorState>, MonitorError> {
    validate_trace(trace)?;
    let mut monitors: BTreeMap<&str, Monitor> = BTreeMap::new();
    for (node, contract) in contracts {
        monitors.insert(node, instantiate_monitor(contract, universe)?);
    }
    for event in &trace.events {
        if let Some(monitor) = monitors.get_mut(event.node.as_str()) {
            step_monitor(monitor, MonitorEvent::Step(event))?;
        }
    }
    let mut verdicts = BTreeMap::new();
    for (node, mut monitor) in monitors {
        step_monitor(&mut monitor, MonitorEvent::End)?;
        verdicts.insert(node.to_string(), monitor.into_state());
    }
    Ok(verdicts)
}

/// Replays a recorded trace against one contract spanning several nodes —
/// typically a composed end-to-end contract — feeding it every event.
pub fn check_composed_trace(
    trace: &Trace,
    contract: &Contract,
    universe: &ScenarioUniverse,
) -> Result<MonitorState, MonitorError> {
    validate_trace(trace)?;
    let mut monitor = instantiate_monitor(contract, universe)?;
    for event in &trace.events {
        step_monitor(&mut monitor, MonitorEvent::Step(event))?;
    }
    step_monitor(&mut monitor, MonitorEvent::End)?;
    Ok(monitor.into_state())
}
