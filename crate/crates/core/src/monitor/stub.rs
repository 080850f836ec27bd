//! Deterministic node stubs for simulation.
//!
//! A stub stands in for a node's real implementation: given the node's
//! current input values, the run seed, and the step number, it produces one
//! value per out-port. Stubs are pure functions of those three things, which
//! is what makes whole simulation runs replayable byte for byte.
//!
//! Ports a behavior says nothing about get the sort's default value: the
//! first domain element, `0`, or the empty set.

use std::collections::BTreeMap;

use crate::graph::{Direction, NodeSpec, Port};
use crate::logic::{Sort, Value};

use super::scenario::ScenarioUniverse;
use super::MonitorError;

/// What a stubbed node does each time it fires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StubBehavior {
    /// Emit fixed values on the listed out-ports.
    Emit(BTreeMap<String, Value>),
    /// From the node's set-sorted in-port, choose the element minimizing the
    /// universe's unary length measure (ties to the smallest index) and emit
    /// it on the matching element-sorted out-port.
    ShortestPlan,
    /// Like `ShortestPlan`, but maximize the measure.
    LongestPlan,
    /// Copy each in-port to the out-ports of the same sort.
    Copy,
    /// Emit the first natural in-port plus one, wrapping at the nat bound.
    Incr,
    /// Emit seeded pseudo-random values, deterministic in (seed, step,
    /// node, port).
    Pick,
}

/// A stand-in implementation for one node, driving it during simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeStub {
    behavior: StubBehavior,
}

impl NodeStub {
    pub fn emit(values: BTreeMap<String, Value>) -> NodeStub {
        NodeStub { behavior: StubBehavior::Emit(values) }
    }

    pub fn shortest_plan() -> NodeStub {
        NodeStub { behavior: StubBehavior::ShortestPlan }
    }

    pub fn longest_plan() -> NodeStub {
        NodeStub { behavior: StubBehavior::LongestPlan }
    }

    pub fn copy() -> NodeStub {
        NodeStub { behavior: StubBehavior::Copy }
    }

    pub fn incr() -> NodeStub {
        NodeStub { behavior: StubBehavior::Incr }
    }

    pub fn pick() -> NodeStub {
        NodeStub { behavior: StubBehavior::Pick }
    }

    pub fn behavior(&self) -> &StubBehavior {
        &self.behavior
    }

    /// The scenario-file name of the behavior.
    pub fn label(&self) -> &'static str {
        match self.behavior {
            StubBehavior::Emit(_) => "emit",
            StubBehavior::ShortestPlan => "shortest-plan",
            StubBehavior::LongestPlan => "longest-plan",
            StubBehavior::Copy => "copy",
            StubBehavior::Incr => "incr",
            StubBehavior::Pick => "pick",
        }
    }

    /// Produces the node's out-port values for one firing.
    ///
    /// `inputs` must carry a value for every in-port; the result carries a
    /// value for every out-port, each checked against the universe.
    pub fn fire(
        &self,
        node: &NodeSpec,
        inputs: &BTreeMap<String, Value>,
        universe: &ScenarioUniverse,
        seed: u64,
        step: usize,
    ) -> Result<BTreeMap<String, Value>, MonitorError> {
        let bad = |reason: String| MonitorError::StubOutput { node: node.name.clone(), reason };
        let in_ports: Vec<&Port> =
            node.ports.iter().filter(|p| p.direction == Direction::In).collect();
        let out_ports: Vec<&Port> =
            node.ports.iter().filter(|p| p.direction == Direction::Out).collect();
        for port in &in_ports {
            if !inputs.contains_key(&port.name) {
                return Err(bad(format!("no value arrived on in-port `{}`", port.name)));
            }
        }

        let mut outputs: BTreeMap<String, Value> = out_ports
            .iter()
            .map(|p| (p.name.clone(), default_value(&p.sort)))
            .collect();

        match &self.behavior {
            StubBehavior::Emit(values) => {
                for (port_name, &value) in values {
                    match out_ports.iter().find(|p| p.name == *port_name) {
                        Some(_) => {
                            outputs.insert(port_name.clone(), value);
                        }
                        None => {
                            return Err(bad(format!(
                                "emit names `{port_name}`, which is not an out-port"
                            )))
                        }
                    }
                }
            }
            StubBehavior::ShortestPlan | StubBehavior::LongestPlan => {
                let longest = matches!(self.behavior, StubBehavior::LongestPlan);
                let set_port = in_ports
                    .iter()
                    .find(|p| matches!(p.sort, Sort::Set(_)))
                    .ok_or_else(|| {
                        bad("choosing a plan needs a set-sorted in-port".to_string())
                    })?;
                let Sort::Set(elem_sort) = &set_port.sort else { unreachable!() };
                let Value::Set(_) = inputs[&set_port.name] else {
                    return Err(bad(format!(
                        "in-port `{}` carried a non-set value",
                        set_port.name
                    )));
                };
                let measure = universe
                    .signature()
                    .funcs()
                    .iter()
                    .find(|f| {
                        f.params == [Sort::base(elem_sort.clone())] && f.result == Sort::Nat
                    })
                    .ok_or_else(|| {
                        bad(format!(
                            "no unary natural-valued measure over sort {elem_sort} to rank by"
                        ))
                    })?
                    .name
                    .clone();
                // Empty set: fall back to element 0 (the guarantee monitor
                // will judge the choice on its merits).
                let mut chosen = 0u64;
                let mut chosen_len: Option<u64> = None;
                for elem in inputs[&set_port.name].set_elems() {
                    let len = match universe.interpretation().func_value(
                        &measure,
                        &[Value::Elem(elem)],
                        &Sort::Nat,
                    ) {
                        Some(Value::Nat(n)) => n,
                        _ => return Err(bad(format!("no `{measure}` row for element {elem}"))),
                    };
                    // set_elems is ascending, so strict comparison keeps the
                    // smallest index on ties.
                    let better = match chosen_len {
                        None => true,
                        Some(best) if longest => len > best,
                        Some(best) => len < best,
                    };
                    if better {
                        chosen = elem;
                        chosen_len = Some(len);
                    }
                }
                for port in &out_ports {
                    if port.sort == Sort::base(elem_sort.clone()) {
                        outputs.insert(port.name.clone(), Value::Elem(chosen));
                    }
                }
            }
            StubBehavior::Copy => {
                for port in &out_ports {
                    if let Some(source) = in_ports.iter().find(|p| p.sort == port.sort) {
                        outputs.insert(port.name.clone(), inputs[&source.name]);
                    }
                }
            }
            StubBehavior::Incr => {
                let source = in_ports.iter().find(|p| p.sort == Sort::Nat);
                if let Some(source) = source {
                    let Value::Nat(n) = inputs[&source.name] else {
                        return Err(bad(format!(
                            "in-port `{}` carried a non-natural value",
                            source.name
                        )));
                    };
                    let next = (n + 1) % universe.nat_bound();
                    for port in &out_ports {
                        if port.sort == Sort::Nat {
                            outputs.insert(port.name.clone(), Value::Nat(next));
                        }
                    }
                }
            }
            StubBehavior::Pick => {
                for port in &out_ports {
                    let h = splitmix64(
                        seed ^ splitmix64(step as u64 ^ name_hash(&node.name, &port.name)),
                    );
                    let value = match &port.sort {
                        Sort::Base(s) => {
                            let n = universe.size(s).ok_or_else(|| {
                                bad(format!("the universe has no sort `{s}`"))
                            })? as u64;
                            Value::Elem(h % n)
                        }
                        Sort::Nat => Value::Nat(h % universe.nat_bound()),
                        Sort::Set(s) => {
                            let n = universe.size(s).ok_or_else(|| {
                                bad(format!("the universe has no sort `{s}`"))
                            })?;
                            Value::Set(h & ((1u64 << n) - 1))
                        }
                    };
                    outputs.insert(port.name.clone(), value);
                }
            }
        }

        for port in &out_ports {
            let value = outputs[&port.name];
            if !universe.value_fits(value, &port.sort) {
                return Err(bad(format!(
                    "value {value:?} on out-port `{}` does not fit sort {} in this universe",
                    port.name, port.sort
                )));
            }
        }
        Ok(outputs)
    }
}

/// The zero of each sort: first element, 0, or the empty set.
pub(crate) fn default_value(sort: &Sort) -> Value {
    match sort {
        Sort::Base(_) => Value::Elem(0),
        Sort::Nat => Value::Nat(0),
        Sort::Set(_) => Value::Set(0),
    }
}

/// SplitMix64: a tiny, well-distributed mixer; plenty for stub choices.
fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over `node.port`, to give every port its own pick stream.
fn name_hash(node: &str, port: &str) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    for byte in node.bytes().chain([b'.']).chain(port.bytes()) {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}
