//! The simulation harness: firing stubbed nodes and monitoring every
//! contract, live.
//!
//! Each step fires every node once, in topological order over the non-loop
//! edges, so a value produced upstream is consumed downstream within the
//! same step. A self-loop instead carries its value across steps: the output
//! becomes the next step's input on the looped port, whose step-0 value
//! comes from the environment inputs. One monitor runs per node, fed only
//! that node's events; one more runs the composed end-to-end contract, fed
//! the entire event stream.

use std::collections::BTreeMap;

use crate::compose::system_contract;
use crate::graph::{firing_order, Direction, SystemGraph};
use crate::logic::Value;

use super::scenario::ScenarioUniverse;
use super::stub::NodeStub;
use super::{
    instantiate_monitor, step_monitor, Event, Monitor, MonitorError, MonitorEvent, MonitorState,
    Phase, Trace,
};

/// Everything one simulation run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationOutcome {
    pub trace: Trace,
    /// Final monitor state per node, in node-name order.
    pub node_verdicts: BTreeMap<String, MonitorState>,
    /// Final state of the composed end-to-end contract's monitor.
    pub composed_verdict: MonitorState,
}

/// Runs `graph` for `max_steps` steps with one stub per node, monitoring
/// every node contract and the composed system contract.
///
/// `env_inputs` (keyed `Node.port`) must give a value to every system-level
/// in-port: ports with no incoming edge, plus self-loop-fed ports, which
/// need a step-0 value before their back-edge first delivers. `seed` feeds
/// the `pick` stubs. The run is a pure function of its arguments: identical
/// arguments give identical traces, byte for byte once serialized.
///
/// With `max_steps = 0` nothing fires and every monitor reports `vacuous`.
pub fn run_simulation(
    graph: &SystemGraph,
    stubs: &BTreeMap<String, NodeStub>,
    universe: &ScenarioUniverse,
    env_inputs: &BTreeMap<String, Value>,
    seed: u64,
    max_steps: usize,
) -> Result<SimulationOutcome, MonitorError> {
    let order = firing_order(graph).map_err(MonitorError::Cycle)?;

    // The end-to-end contract; its loop annotation mirrors the run length,
    // since the harness applies self-loop feedback on every step it runs.
    let (composed, _obligations) =
        system_contract(graph, universe.signature(), max_steps.max(1))?;
    let mut composed_monitor = instantiate_monitor(&composed.contract, universe)?;

    let mut monitors: BTreeMap<String, Monitor> = BTreeMap::new();
    for node in graph.nodes() {
        if !stubs.contains_key(&node.name) {
            return Err(MonitorError::MissingStub(node.name.clone()));
        }
        monitors.insert(node.name.clone(), instantiate_monitor(&node.contract, universe)?);
    }

    // Current value of every in-port, keyed `Node.port`. Environment-fed and
    // self-loop-fed ports start from env_inputs; edge-fed ports are written
    // by their upstream node earlier in the same step's firing order.
    let mut current: BTreeMap<String, Value> = BTreeMap::new();
    for node in graph.nodes() {
        for port in node.ports.iter().filter(|p| p.direction == Direction::In) {
            let key = format!("{}.{}", node.name, port.name);
            let edge = graph.edge_into(&node.name, &port.name);
            let self_fed = edge.is_some_and(|e| e.from.node == node.name);
            if edge.is_some() && !self_fed {
                continue;
            }
            let Some(&value) = env_inputs.get(&key) else {
                return Err(MonitorError::MissingInput(key));
            };
            if !universe.value_fits(value, &port.sort) {
                return Err(MonitorError::BadInput {
                    key,
                    reason: format!(
                        "value {value:?} does not fit sort {} in this universe",
                        port.sort
                    ),
                });
            }
            current.insert(key, value);
        }
    }
    for key in env_inputs.keys() {
        if !current.contains_key(key) {
            return Err(MonitorError::BadInput {
                key: key.clone(),
                reason: "not a system-level in-port (unconnected or self-loop-fed)".to_string(),
            });
        }
    }

    let mut trace = Trace::default();
    for step in 0..max_steps {
        // Self-loop deliveries for the NEXT step, applied once the whole
        // step has fired so every monitor sees this step consistently.
        let mut looped: Vec<(String, Value)> = Vec::new();
        for name in &order {
            let node = graph.node(name).expect("firing order lists known nodes");
            let mut inputs: BTreeMap<String, Value> = BTreeMap::new();
            for port in node.ports.iter().filter(|p| p.direction == Direction::In) {
                let value = current
                    .get(&format!("{name}.{}", port.name))
                    .copied()
                    .expect("upstream nodes fire earlier in the step");
                inputs.insert(port.name.clone(), value);
            }

            let event = Event::new(step, name.clone(), Phase::Input, inputs.clone());
            step_monitor(monitors.get_mut(name).expect("one monitor per node"), MonitorEvent::Step(&event))?;
            step_monitor(&mut composed_monitor, MonitorEvent::Step(&event))?;
            trace.events.push(event);

            let outputs = stubs[name].fire(node, &inputs, universe, seed, step)?;

            let event = Event::new(step, name.clone(), Phase::Output, outputs.clone());
            step_monitor(monitors.get_mut(name).expect("one monitor per node"), MonitorEvent::Step(&event))?;
            step_monitor(&mut composed_monitor, MonitorEvent::Step(&event))?;
            trace.events.push(event);

            for edge in graph.outgoing(name) {
                let value = outputs[&edge.from.port];
                let key = format!("{}.{}", edge.to.node, edge.to.port);
                if edge.to.node == *name {
                    looped.push((key, value));
                } else {
                    current.insert(key, value);
                }
            }
        }
        for (key, value) in looped {
            current.insert(key, value);
        }
    }

    let mut node_verdicts = BTreeMap::new();
    for (name, mut monitor) in monitors {
        step_monitor(&mut monitor, MonitorEvent::End)?;
        node_verdicts.insert(name, monitor.into_state());
    }
    step_monitor(&mut composed_monitor, MonitorEvent::End)?;

    Ok(SimulationOutcome {
        trace,
        node_verdicts,
        composed_verdict: composed_monitor.into_state(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Contract, Edge, EndpointRef, NodeSpec, Port};
    use crate::logic::{Formula, Signature, Sort, Term};
    use crate::monitor::{check_composed_trace, check_trace, parse_scenario, Scenario};
    use crate::testutil::{qvar, rover_graph, rover_signature};

    fn rover_scenario(src: &str) -> Scenario {
        parse_scenario(src, &rover_graph(), &rover_signature()).unwrap()
    }

    fn run(scenario: &Scenario) -> SimulationOutcome {
        run_simulation(
            &rover_graph(),
            &scenario.stubs,
            &scenario.universe,
            &scenario.inputs,
            scenario.seed,
            scenario.steps,
        )
        .unwrap()
    }

    const SHORTEST: &str = include_str!("../../../../specs/rover.agsim");
    const LONGEST: &str = include_str!("../../../../specs/rover-longest.agsim");

    #[test]
    fn the_shortest_plan_rover_run_satisfies_every_contract() {
        let outcome = run(&rover_scenario(SHORTEST));
        for (node, verdict) in &outcome.node_verdicts {
            assert_eq!(
                *verdict,
                MonitorState::Satisfied { at: 0 },
                "node {node} ended {verdict}"
            );
        }
        assert_eq!(outcome.composed_verdict, MonitorState::Satisfied { at: 0 });
        assert_eq!(outcome.trace.events.len(), 8); // 4 nodes × input + output
    }

    #[test]
    fn the_longest_plan_rover_run_violates_exactly_the_agent() {
        let outcome = run(&rover_scenario(LONGEST));
        let violated: Vec<&str> = outcome
            .node_verdicts
            .iter()
            .filter(|(_, v)| v.is_violated())
            .map(|(n, _)| n.as_str())
            .collect();
        assert_eq!(violated, vec!["Agent"]);
        // The downstream contract doesn't care which plan arrived.
        assert_eq!(
            outcome.node_verdicts["HardwareInterface"],
            MonitorState::Satisfied { at: 0 }
        );
        assert_eq!(outcome.composed_verdict, MonitorState::Satisfied { at: 0 });
    }

    #[test]
    fn zero_steps_fires_nothing_and_everything_is_vacuous() {
        let scenario = rover_scenario(SHORTEST);
        let outcome = run_simulation(
            &rover_graph(),
            &scenario.stubs,
            &scenario.universe,
            &scenario.inputs,
            scenario.seed,
            0,
        )
        .unwrap();
        assert!(outcome.trace.events.is_empty());
        assert!(outcome.node_verdicts.values().all(|v| v.is_vacuous()));
        assert!(outcome.composed_verdict.is_vacuous());
    }

    #[test]
    fn a_missing_stub_is_rejected_up_front() {
        let scenario = rover_scenario(SHORTEST);
        let mut stubs = scenario.stubs.clone();
        stubs.remove("Planner");
        let err = run_simulation(
            &rover_graph(),
            &stubs,
            &scenario.universe,
            &scenario.inputs,
            0,
            1,
        )
        .unwrap_err();
        assert_eq!(err, MonitorError::MissingStub("Planner".to_string()));
    }

    /// A single node `Counter` with `in x`, `out y`, `y` looped back to `x`,
    /// contract `x <= 2 ⇒ y <= 2` over naturals bounded at 4.
    fn counter_graph() -> (SystemGraph, Signature) {
        let sig = Signature::default();
        let x = qvar("Counter", "x", Sort::Nat);
        let y = qvar("Counter", "y", Sort::Nat);
        let node = NodeSpec::new(
            "Counter",
            vec![
                Port::new("x", Direction::In, Sort::Nat),
                Port::new("y", Direction::Out, Sort::Nat),
            ],
            Contract::new(
                Formula::Le(Term::Var(x), Term::Nat(2)),
                Formula::Le(Term::Var(y), Term::Nat(2)),
                vec![qvar("Counter", "x", Sort::Nat)],
                vec![qvar("Counter", "y", Sort::Nat)],
            )
            .unwrap(),
            Default::default(),
        )
        .unwrap();
        let graph = SystemGraph::new(
            vec![node],
            vec![Edge::new(
                EndpointRef::new("Counter", "y"),
                EndpointRef::new("Counter", "x"),
            )],
        )
        .unwrap();
        (graph, sig)
    }

    #[test]
    fn self_loop_outputs_feed_the_next_steps_inputs() {
        let (graph, sig) = counter_graph();
        let universe = ScenarioUniverse::new(&sig, BTreeMap::new(), 4).unwrap();
        let stubs = BTreeMap::from([("Counter".to_string(), NodeStub::incr())]);
        let inputs = BTreeMap::from([("Counter.x".to_string(), Value::Nat(0))]);
        let outcome =
            run_simulation(&graph, &stubs, &universe, &inputs, 0, 3).unwrap();
        // x starts at 0 and each step consumes the previous step's y.
        let xs: Vec<Value> = outcome
            .trace
            .events
            .iter()
            .filter(|e| e.phase == Phase::Input)
            .map(|e| e.values["x"])
            .collect();
        assert_eq!(xs, vec![Value::Nat(0), Value::Nat(1), Value::Nat(2)]);
        // The obligation from step 0 (x = 0) was met immediately (y = 1).
        assert_eq!(
            outcome.node_verdicts["Counter"],
            MonitorState::Satisfied { at: 0 }
        );
    }

    #[test]
    fn a_self_loop_fed_port_needs_a_starting_value() {
        let (graph, sig) = counter_graph();
        let universe = ScenarioUniverse::new(&sig, BTreeMap::new(), 4).unwrap();
        let stubs = BTreeMap::from([("Counter".to_string(), NodeStub::incr())]);
        let err =
            run_simulation(&graph, &stubs, &universe, &BTreeMap::new(), 0, 1).unwrap_err();
        assert_eq!(err, MonitorError::MissingInput("Counter.x".to_string()));
    }

    #[test]
    fn an_env_input_for_a_connected_port_is_rejected() {
        let scenario = rover_scenario(SHORTEST);
        let inputs = BTreeMap::from([("Agent.PlanSet".to_string(), Value::set_of([0]))]);
        let err = run_simulation(
            &rover_graph(),
            &scenario.stubs,
            &scenario.universe,
            &inputs,
            0,
            1,
        )
        .unwrap_err();
        assert!(matches!(err, MonitorError::BadInput { .. }));
    }

    #[test]
    fn identical_runs_serialize_to_identical_bytes() {
        let scenario = rover_scenario(SHORTEST);
        let graph = rover_graph();
        let a = run(&scenario).trace.to_json_lines(&graph, &scenario.universe).unwrap();
        let b = run(&scenario).trace.to_json_lines(&graph, &scenario.universe).unwrap();
        let c = run(&scenario).trace.to_json_lines(&graph, &scenario.universe).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
        assert_eq!(a.lines().count(), 8);
    }

    #[test]
    fn offline_replay_agrees_with_the_live_monitors() {
        for src in [SHORTEST, LONGEST] {
            let scenario = rover_scenario(src);
            let outcome = run(&scenario);
            let contracts: BTreeMap<String, Contract> = rover_graph()
                .nodes()
                .iter()
                .map(|n| (n.name.clone(), n.contract.clone()))
                .collect();
            let replayed =
                check_trace(&outcome.trace, &contracts, &scenario.universe).unwrap();
            assert_eq!(replayed, outcome.node_verdicts);
            let (composed, _) =
                system_contract(&rover_graph(), &rover_signature(), 1).unwrap();
            let composed_verdict =
                check_composed_trace(&outcome.trace, &composed.contract, &scenario.universe)
                    .unwrap();
            assert_eq!(composed_verdict, outcome.composed_verdict);
        }
    }

    #[test]
    fn replay_survives_a_json_round_trip() {
        let scenario = rover_scenario(LONGEST);
        let graph = rover_graph();
        let outcome = run(&scenario);
        let text = outcome.trace.to_json_lines(&graph, &scenario.universe).unwrap();
        let back = Trace::from_json_lines(&text, &graph, &scenario.universe).unwrap();
        assert_eq!(back, outcome.trace);
        let contracts: BTreeMap<String, Contract> = graph
            .nodes()
            .iter()
            .map(|n| (n.name.clone(), n.contract.clone()))
            .collect();
        let replayed = check_trace(&back, &contracts, &scenario.universe).unwrap();
        assert_eq!(replayed, outcome.node_verdicts);
    }

    #[test]
    fn picked_scenarios_still_replay_identically() {
        // Replace every stub with pick: whatever nonsense flows, online and
        // offline verdicts must agree, for many seeds.
        let scenario = rover_scenario(SHORTEST);
        let graph = rover_graph();
        let contracts: BTreeMap<String, Contract> = graph
            .nodes()
            .iter()
            .map(|n| (n.name.clone(), n.contract.clone()))
            .collect();
        let stubs: BTreeMap<String, NodeStub> = graph
            .nodes()
            .iter()
            .map(|n| (n.name.clone(), NodeStub::pick()))
            .collect();
        for seed in 0..25 {
            let outcome = run_simulation(
                &graph,
                &stubs,
                &scenario.universe,
                &scenario.inputs,
                seed,
                2,
            )
            .unwrap();
            let replayed =
                check_trace(&outcome.trace, &contracts, &scenario.universe).unwrap();
            assert_eq!(replayed, outcome.node_verdicts, "seed {seed}");
        }
    }
}
