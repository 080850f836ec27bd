//! Scenario universes and the `.agsim` scenario file format.
//!
//! A [`ScenarioUniverse`] fixes everything a monitor needs to evaluate ground
//! formulas: named finite domains for every base sort, the bound on naturals,
//! and full tables for the signature's functions and predicates (closed
//! world: a tuple not listed for a predicate is false, a function row not
//! listed maps to the first element / zero / the empty set).
//!
//! A `.agsim` file describes one simulation scenario in line-oriented
//! directives (order within a file does not matter; `--` starts a comment):
//!
//! ```text
//! sort Plan = p0, p1          -- domain values, in index order
//! nat 4                       -- naturals are 0..3 (default 4 if omitted)
//! const goal = waypoint       -- a 0-ary function's value
//! func length = { p0 -> 2, p1 -> 3 }
//! pred contains = { (p0, waypoint), (p1, waypoint) }
//! stub Agent = shortest-plan  -- or longest-plan, copy, incr, pick,
//! stub Vision = emit pose = site  --    or emit port = value, ...
//! seed 42                     -- for the pick stub (default 0)
//! steps 1                     -- simulation length (default 1)
//! input Cache.key = k0        -- environment value for a system-level in-port
//! ```

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Direction, SystemGraph};
use crate::logic::interp::InterpError;
use crate::logic::{Interpretation, Signature, Sort, Value};
use crate::syntax::{Diagnostic, Span};

use super::stub::NodeStub;

/// A closed finite universe: named domains, a nat bound, and full tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioUniverse {
    sig: Signature,
    interp: Interpretation,
    /// Element names per base sort, in index order.
    names: BTreeMap<String, Vec<String>>,
}

/// Error raised while building a universe directly (the `.agsim` parser
/// reports the same problems as diagnostics with line numbers).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("the scenario declares no values for sort `{0}`")]
    MissingSortValues(String),
    #[error("sort `{sort}` lists the value `{name}` twice")]
    DuplicateElement { sort: String, name: String },
    #[error(transparent)]
    Universe(#[from] InterpError),
}

impl ScenarioUniverse {
    /// Builds a universe over `sig` with the given element names per base
    /// sort. All tables start closed-world empty: predicates all-false,
    /// functions mapping everything to the first element / 0 / the empty
    /// set. Fill them with [`ScenarioUniverse::set_func`] and
    /// [`ScenarioUniverse::set_pred`].
    pub fn new(
        sig: &Signature,
        names: BTreeMap<String, Vec<String>>,
        nat_bound: u64,
    ) -> Result<ScenarioUniverse, ScenarioError> {
        for sort in sig.sorts() {
            if !names.contains_key(sort) {
                return Err(ScenarioError::MissingSortValues(sort.clone()));
            }
        }
        for (sort, elems) in &names {
            for (i, name) in elems.iter().enumerate() {
                if elems[..i].contains(name) {
                    return Err(ScenarioError::DuplicateElement {
                        sort: sort.clone(),
                        name: name.clone(),
                    });
                }
            }
        }
        let sizes = names.iter().map(|(s, elems)| (s.clone(), elems.len())).collect();
        let interp = Interpretation::new(sig, sizes, nat_bound)?;
        Ok(ScenarioUniverse { sig: sig.clone(), interp, names })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn nat_bound(&self) -> u64 {
        self.interp.nat_bound()
    }

    /// Domain size of a base sort, if the universe declares it.
    pub fn size(&self, sort: &str) -> Option<usize> {
        self.interp.size(sort)
    }

    /// Looks up a domain element of `sort` by its declared name.
    pub fn element(&self, sort: &str, name: &str) -> Option<Value> {
        let idx = self.names.get(sort)?.iter().position(|n| n == name)?;
        Some(Value::Elem(idx as u64))
    }

    /// The declared name of element `index` of a base sort.
    pub fn element_name(&self, sort: &str, index: u64) -> Option<&str> {
        self.names.get(sort)?.get(index as usize).map(String::as_str)
    }

    /// Sets one function-table row (for a constant, pass no arguments).
    pub fn set_func(
        &mut self,
        name: &str,
        args: &[Value],
        value: Value,
    ) -> Result<(), ScenarioError> {
        self.interp.set_func(&self.sig, name, args, value)?;
        Ok(())
    }

    /// Marks one predicate tuple as holding.
    pub fn set_pred(&mut self, name: &str, args: &[Value]) -> Result<(), ScenarioError> {
        self.interp.set_pred(name, args, true)?;
        Ok(())
    }

    /// Whether `value` is a legal inhabitant of `sort` in this universe.
    pub fn value_fits(&self, value: Value, sort: &Sort) -> bool {
        match (value, sort) {
            (Value::Elem(i), Sort::Base(s)) => {
                self.size(s).is_some_and(|n| i < n as u64)
            }
            (Value::Nat(n), Sort::Nat) => n < self.nat_bound(),
            (Value::Set(mask), Sort::Set(s)) => {
                self.size(s).is_some_and(|n| mask < (1u64 << n))
            }
            _ => false,
        }
    }

    /// Renders a value with this universe's element names (`site`, `3`,
    /// `{p0, p1}`).
    pub fn render_value(&self, sort: &Sort, value: Value) -> String {
        match (value, sort) {
            (Value::Elem(i), Sort::Base(s)) => self
                .element_name(s, i)
                .map(str::to_string)
                .unwrap_or_else(|| self.interp.element_name(s, i)),
            (Value::Nat(n), Sort::Nat) => n.to_string(),
            (set @ Value::Set(_), Sort::Set(s)) => {
                let elems: Vec<String> = set
                    .set_elems()
                    .into_iter()
                    .map(|i| {
                        self.element_name(s, i)
                            .map(str::to_string)
                            .unwrap_or_else(|| self.interp.element_name(s, i))
                    })
                    .collect();
                format!("{{{}}}", elems.join(", "))
            }
            _ => format!("{value:?}"),
        }
    }

    /// Parses a value literal of `sort`: an element name, a natural below
    /// the bound, or a set literal `{a, b}`.
    pub fn parse_value(&self, sort: &Sort, text: &str) -> Result<Value, String> {
        let text = text.trim();
        match sort {
            Sort::Base(s) => self.element(s, text).ok_or_else(|| {
                format!("`{text}` is not a declared value of sort {s}")
            }),
            Sort::Nat => {
                let n: u64 = text
                    .parse()
                    .map_err(|_| format!("`{text}` is not a natural number"))?;
                if n >= self.nat_bound() {
                    return Err(format!(
                        "{n} is outside the naturals 0..{}",
                        self.nat_bound() - 1
                    ));
                }
                Ok(Value::Nat(n))
            }
            Sort::Set(s) => {
                let inner = text
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| format!("a set literal looks like {{a, b}}, not `{text}`"))?;
                let mut elems = Vec::new();
                for part in split_top(inner, ',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    match self.element(s, part) {
                        Some(Value::Elem(i)) => elems.push(i),
                        _ => {
                            return Err(format!(
                                "`{part}` is not a declared value of sort {s}"
                            ))
                        }
                    }
                }
                Ok(Value::set_of(elems))
            }
        }
    }

    /// JSON form of a value for trace files: element name string, bare
    /// number, or array of element names.
    pub fn value_to_json(&self, sort: &Sort, value: Value) -> serde_json::Value {
        match (value, sort) {
            (Value::Elem(i), Sort::Base(s)) => serde_json::Value::String(
                self.element_name(s, i)
                    .map(str::to_string)
                    .unwrap_or_else(|| self.interp.element_name(s, i)),
            ),
            (Value::Nat(n), Sort::Nat) => serde_json::Value::from(n),
            (set @ Value::Set(_), Sort::Set(s)) => serde_json::Value::Array(
                set.set_elems()
                    .into_iter()
                    .map(|i| {
                        serde_json::Value::String(
                            self.element_name(s, i)
                                .map(str::to_string)
                                .unwrap_or_else(|| self.interp.element_name(s, i)),
                        )
                    })
                    .collect(),
            ),
            _ => serde_json::Value::Null,
        }
    }

    /// Parses the JSON form written by [`ScenarioUniverse::value_to_json`].
    pub fn value_from_json(
        &self,
        sort: &Sort,
        raw: &serde_json::Value,
    ) -> Result<Value, String> {
        match (sort, raw) {
            (Sort::Base(s), serde_json::Value::String(name)) => self
                .element(s, name)
                .ok_or_else(|| format!("`{name}` is not a declared value of sort {s}")),
            (Sort::Nat, serde_json::Value::Number(n)) => {
                let n = n.as_u64().ok_or("naturals must be non-negative integers")?;
                if n >= self.nat_bound() {
                    return Err(format!(
                        "{n} is outside the naturals 0..{}",
                        self.nat_bound() - 1
                    ));
                }
                Ok(Value::Nat(n))
            }
            (Sort::Set(s), serde_json::Value::Array(items)) => {
                let mut elems = Vec::new();
                for item in items {
                    let name = item.as_str().ok_or("set elements must be name strings")?;
                    match self.element(s, name) {
                        Some(Value::Elem(i)) => elems.push(i),
                        _ => {
                            return Err(format!(
                                "`{name}` is not a declared value of sort {s}"
                            ))
                        }
                    }
                }
                Ok(Value::set_of(elems))
            }
            _ => Err(format!("a value of sort {sort} cannot be read from {raw}")),
        }
    }
}

/// One parsed `.agsim` scenario: the universe plus everything the harness
/// needs to run it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub universe: ScenarioUniverse,
    /// Stub behavior per node name.
    pub stubs: BTreeMap<String, NodeStub>,
    pub seed: u64,
    pub steps: usize,
    /// Environment values for system-level in-ports, keyed `Node.port`.
    pub inputs: BTreeMap<String, Value>,
}

/// Splits at top-level occurrences of `sep`, ignoring separators nested
/// inside parentheses or braces.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Parses a `.agsim` scenario against the system it will drive.
///
/// `sig` supplies the sorts, functions, and predicates whose tables the
/// scenario must fill; `graph` supplies the nodes and ports that stub and
/// input directives refer to. All problems are collected (one diagnostic per
/// offending line) rather than stopping at the first.
pub fn parse_scenario(
    src: &str,
    graph: &SystemGraph,
    sig: &Signature,
) -> Result<Scenario, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut names: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut nat_bound: Option<(u64, usize)> = None;

    let lines: Vec<(usize, &str)> = src
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let text = match raw.find("--") {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            (i + 1, text.trim())
        })
        .filter(|(_, text)| !text.is_empty())
        .collect();

    let span = |line: usize| Span::new(line as u32, 1, 1);
    // First pass: domains and the nat bound, which everything else needs.
    for &(line, text) in &lines {
        let (word, rest) = split_word(text);
        match word {
            "sort" => {
                let Some((name, values)) = rest.split_once('=') else {
                    diags.push(Diagnostic::error(
                        "scenario-sort-syntax",
                        "a sort directive looks like `sort Name = a, b`",
                        span(line),
                    ));
                    continue;
                };
                let name = name.trim();
                if !sig.sorts().contains(&name.to_string()) {
                    diags.push(Diagnostic::error(
                        "scenario-unknown-sort",
                        format!("the system declares no sort `{name}`"),
                        span(line),
                    ));
                    continue;
                }
                if names.contains_key(name) {
                    diags.push(Diagnostic::error(
                        "scenario-duplicate-sort",
                        format!("sort `{name}` already has values"),
                        span(line),
                    ));
                    continue;
                }
                let mut elems = Vec::new();
                for part in values.split(',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    if elems.contains(&part.to_string()) {
                        diags.push(Diagnostic::error(
                            "scenario-duplicate-value",
                            format!("sort `{name}` lists `{part}` twice"),
                            span(line),
                        ));
                    } else {
                        elems.push(part.to_string());
                    }
                }
                if elems.is_empty() {
                    diags.push(Diagnostic::error(
                        "scenario-empty-sort",
                        format!("sort `{name}` needs at least one value"),
                        span(line),
                    ));
                    continue;
                }
                names.insert(name.to_string(), elems);
            }
            "nat" => {
                match rest.trim().parse::<u64>() {
                    Ok(n) if n > 0 => {
                        if nat_bound.is_some() {
                            diags.push(Diagnostic::error(
                                "scenario-duplicate-nat",
                                "the nat bound is already set",
                                span(line),
                            ));
                        } else {
                            nat_bound = Some((n, line));
                        }
                    }
                    _ => diags.push(Diagnostic::error(
                        "scenario-bad-nat",
                        "the nat bound must be a positive integer",
                        span(line),
                    )),
                }
            }
            _ => {}
        }
    }

    let mut universe = match ScenarioUniverse::new(
        sig,
        names,
        nat_bound.map_or(DEFAULT_NAT_BOUND, |(n, _)| n),
    ) {
        Ok(u) => u,
        Err(e) => {
            diags.push(Diagnostic::error("scenario-universe", e.to_string(), span(1)));
            return Err(diags);
        }
    };

    let mut stubs: BTreeMap<String, NodeStub> = BTreeMap::new();
    let mut seed: Option<u64> = None;
    let mut steps: Option<usize> = None;
    let mut inputs: BTreeMap<String, Value> = BTreeMap::new();

    // Second pass: tables, stubs, and run parameters, now that values parse.
    for &(line, text) in &lines {
        let (word, rest) = split_word(text);
        let mut bad = |code: &str, message: String| {
            diags.push(Diagnostic::error(code, message, span(line)));
        };
        match word {
            "sort" | "nat" => {}
            "const" => {
                let Some((name, value)) = rest.split_once('=') else {
                    bad("scenario-const-syntax", "a constant looks like `const goal = waypoint`".into());
                    continue;
                };
                let name = name.trim();
                let Some(decl) = sig.func(name) else {
                    bad("scenario-unknown-const", format!("the system declares no function `{name}`"));
                    continue;
                };
                if !decl.params.is_empty() {
                    bad(
                        "scenario-const-arity",
                        format!("`{name}` takes arguments; give it rows with `func {name} = {{ ... }}`"),
                    );
                    continue;
                }
                let result = decl.result.clone();
                match universe.parse_value(&result, value) {
                    Ok(v) => universe.set_func(name, &[], v).expect("constant fits its sort"),
                    Err(reason) => bad("scenario-bad-value", reason),
                }
            }
            "func" => {
                let Some((name, body)) = rest.split_once('=') else {
                    bad("scenario-func-syntax", "a function table looks like `func length = { p0 -> 2 }`".into());
                    continue;
                };
                let name = name.trim();
                let Some(decl) = sig.func(name) else {
                    bad("scenario-unknown-func", format!("the system declares no function `{name}`"));
                    continue;
                };
                if decl.params.is_empty() {
                    bad("scenario-func-arity", format!("`{name}` is a constant; set it with `const {name} = ...`"));
                    continue;
                }
                let (params, result) = (decl.params.clone(), decl.result.clone());
                let Some(rows) = strip_braces(body) else {
                    bad("scenario-func-syntax", "function rows belong inside braces".into());
                    continue;
                };
                for row in split_top(rows, ',') {
                    let row = row.trim();
                    if row.is_empty() {
                        continue;
                    }
                    let Some((key, value)) = row.split_once("->") else {
                        bad("scenario-func-row", format!("a row looks like `args -> value`, not `{row}`"));
                        continue;
                    };
                    match parse_args(&universe, &params, key).and_then(|args| {
                        let v = universe.parse_value(&result, value)?;
                        Ok((args, v))
                    }) {
                        Ok((args, v)) => {
                            universe.set_func(name, &args, v).expect("row fits its sorts")
                        }
                        Err(reason) => bad("scenario-bad-value", reason),
                    }
                }
            }
            "pred" => {
                let Some((name, body)) = rest.split_once('=') else {
                    bad("scenario-pred-syntax", "a predicate table looks like `pred contains = { (p0, waypoint) }`".into());
                    continue;
                };
                let name = name.trim();
                let Some(decl) = sig.pred(name) else {
                    bad("scenario-unknown-pred", format!("the system declares no predicate `{name}`"));
                    continue;
                };
                let params = decl.params.clone();
                let Some(rows) = strip_braces(body) else {
                    bad("scenario-pred-syntax", "predicate tuples belong inside braces".into());
                    continue;
                };
                for row in split_top(rows, ',') {
                    let row = row.trim();
                    if row.is_empty() {
                        continue;
                    }
                    match parse_args(&universe, &params, row) {
                        Ok(args) => {
                            universe.set_pred(name, &args).expect("tuple fits its sorts")
                        }
                        Err(reason) => bad("scenario-bad-value", reason),
                    }
                }
            }
            "stub" => {
                let Some((node_name, behavior)) = rest.split_once('=') else {
                    bad("scenario-stub-syntax", "a stub looks like `stub Agent = shortest-plan`".into());
                    continue;
                };
                let node_name = node_name.trim();
                let Some(node) = graph.node(node_name) else {
                    bad("scenario-unknown-node", format!("the system declares no node `{node_name}`"));
                    continue;
                };
                if stubs.contains_key(node_name) {
                    bad("scenario-duplicate-stub", format!("node `{node_name}` already has a stub"));
                    continue;
                }
                let behavior = behavior.trim();
                let stub = match behavior {
                    "shortest-plan" => Ok(NodeStub::shortest_plan()),
                    "longest-plan" => Ok(NodeStub::longest_plan()),
                    "copy" => Ok(NodeStub::copy()),
                    "incr" => Ok(NodeStub::incr()),
                    "pick" => Ok(NodeStub::pick()),
                    _ => match behavior.strip_prefix("emit") {
                        Some(assigns)
                            if assigns.is_empty()
                                || assigns.starts_with(char::is_whitespace) =>
                        {
                            parse_emit(&universe, node, assigns)
                        }
                        _ => Err(format!(
                            "unknown stub behavior `{behavior}`; expected emit, \
                             shortest-plan, longest-plan, copy, incr, or pick"
                        )),
                    },
                };
                match stub {
                    Ok(stub) => {
                        stubs.insert(node_name.to_string(), stub);
                    }
                    Err(reason) => bad("scenario-bad-stub", reason),
                }
            }
            "seed" => match rest.trim().parse::<u64>() {
                Ok(n) if seed.is_none() => seed = Some(n),
                Ok(_) => bad("scenario-duplicate-seed", "the seed is already set".into()),
                Err(_) => bad("scenario-bad-seed", "the seed must be an integer".into()),
            },
            "steps" => match rest.trim().parse::<usize>() {
                Ok(n) if steps.is_none() => steps = Some(n),
                Ok(_) => bad("scenario-duplicate-steps", "the step count is already set".into()),
                Err(_) => bad("scenario-bad-steps", "the step count must be an integer".into()),
            },
            "input" => {
                let Some((target, value)) = rest.split_once('=') else {
                    bad("scenario-input-syntax", "an input looks like `input Node.port = value`".into());
                    continue;
                };
                let target = target.trim();
                let Some((node_name, port_name)) = target.split_once('.') else {
                    bad("scenario-input-syntax", format!("`{target}` is not of the form Node.port"));
                    continue;
                };
                let port = graph.node(node_name).and_then(|n| n.port(port_name));
                let Some(port) = port else {
                    bad("scenario-unknown-port", format!("the system declares no in-port `{target}`"));
                    continue;
                };
                if port.direction != Direction::In {
                    bad("scenario-not-an-input", format!("`{target}` is an out-port; only in-ports take environment values"));
                    continue;
                }
                if inputs.contains_key(target) {
                    bad("scenario-duplicate-input", format!("`{target}` already has a value"));
                    continue;
                }
                match universe.parse_value(&port.sort, value) {
                    Ok(v) => {
                        inputs.insert(target.to_string(), v);
                    }
                    Err(reason) => bad("scenario-bad-value", reason),
                }
            }
            other => {
                bad(
                    "scenario-unknown-directive",
                    format!(
                        "unknown directive `{other}`; expected sort, nat, const, func, \
                         pred, stub, seed, steps, or input"
                    ),
                );
            }
        }
    }

    if diags.is_empty() {
        Ok(Scenario {
            universe,
            stubs,
            seed: seed.unwrap_or(0),
            steps: steps.unwrap_or(1),
            inputs,
        })
    } else {
        Err(diags)
    }
}

/// Nat bound used when a scenario leaves `nat` unset.
pub const DEFAULT_NAT_BOUND: u64 = 4;

fn split_word(text: &str) -> (&str, &str) {
    match text.split_once(char::is_whitespace) {
        Some((w, rest)) => (w, rest),
        None => (text, ""),
    }
}

fn strip_braces(text: &str) -> Option<&str> {
    text.trim().strip_prefix('{')?.strip_suffix('}')
}

/// Parses `(a, b)` — or a bare `a` for one parameter — against `params`.
fn parse_args(
    universe: &ScenarioUniverse,
    params: &[Sort],
    text: &str,
) -> Result<Vec<Value>, String> {
    let text = text.trim();
    let parts: Vec<&str> = match text.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => split_top(inner, ',').into_iter().map(str::trim).collect(),
        None if params.len() == 1 => vec![text],
        None => return Err(format!("`{text}` should be a parenthesized tuple")),
    };
    if parts.len() != params.len() {
        return Err(format!(
            "`{text}` has {} components where {} were expected",
            parts.len(),
            params.len()
        ));
    }
    parts
        .iter()
        .zip(params)
        .map(|(part, sort)| universe.parse_value(sort, part))
        .collect()
}

/// Parses the assignments of an `emit` stub: `port = value, port = value`.
fn parse_emit(
    universe: &ScenarioUniverse,
    node: &crate::graph::NodeSpec,
    assigns: &str,
) -> Result<NodeStub, String> {
    let mut values = BTreeMap::new();
    for assign in split_top(assigns, ',') {
        let assign = assign.trim();
        if assign.is_empty() {
            continue;
        }
        let Some((port_name, value)) = assign.split_once('=') else {
            return Err(format!("an emit assignment looks like `port = value`, not `{assign}`"));
        };
        let port_name = port_name.trim();
        let Some(port) = node.port(port_name) else {
            return Err(format!("node `{}` has no port `{port_name}`", node.name));
        };
        if port.direction != Direction::Out {
            return Err(format!("`{}.{port_name}` is an in-port; emit sets out-ports", node.name));
        }
        if values.contains_key(port_name) {
            return Err(format!("port `{port_name}` is assigned twice"));
        }
        let v = universe.parse_value(&port.sort, value)?;
        values.insert(port_name.to_string(), v);
    }
    Ok(NodeStub::emit(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monitor::StubBehavior;
    use crate::testutil::{rover_graph, rover_signature};

    const ROVER_SIM: &str = include_str!("../../../../specs/rover.agsim");

    #[test]
    fn the_rover_scenario_parses() {
        let scenario = parse_scenario(ROVER_SIM, &rover_graph(), &rover_signature()).unwrap();
        let u = &scenario.universe;
        assert_eq!(u.size("Location"), Some(2));
        assert_eq!(u.size("Plan"), Some(2));
        assert_eq!(u.nat_bound(), 4);
        // goal = waypoint, length(p0) = 2, length(p1) = 3.
        assert_eq!(
            u.interpretation().func_value("goal", &[], &Sort::base("Location")),
            Some(u.element("Location", "waypoint").unwrap())
        );
        assert_eq!(
            u.interpretation().func_value("length", &[Value::Elem(0)], &Sort::Nat),
            Some(Value::Nat(2))
        );
        assert_eq!(
            u.interpretation().func_value("length", &[Value::Elem(1)], &Sort::Nat),
            Some(Value::Nat(3))
        );
        // Both plans contain the goal; unlisted tuples are false.
        assert_eq!(
            u.interpretation().pred_holds("contains", &[Value::Elem(0), Value::Elem(1)]),
            Some(true)
        );
        assert_eq!(
            u.interpretation().pred_holds("contains", &[Value::Elem(0), Value::Elem(0)]),
            Some(false)
        );
        assert_eq!(scenario.seed, 42);
        assert_eq!(scenario.steps, 1);
        assert_eq!(scenario.stubs.len(), 4);
        assert!(matches!(
            scenario.stubs["Agent"].behavior(),
            StubBehavior::ShortestPlan
        ));
        let StubBehavior::Emit(values) = scenario.stubs["Planner"].behavior() else {
            panic!("Planner should be an emit stub");
        };
        assert_eq!(values["plans"], Value::set_of([0, 1]));
    }

    #[test]
    fn defaults_fill_in_when_directives_are_omitted() {
        let src = "sort Location = site\nsort Plan = p0\n";
        let scenario = parse_scenario(src, &rover_graph(), &rover_signature()).unwrap();
        assert_eq!(scenario.universe.nat_bound(), DEFAULT_NAT_BOUND);
        assert_eq!(scenario.seed, 0);
        assert_eq!(scenario.steps, 1);
        assert!(scenario.stubs.is_empty());
    }

    #[test]
    fn a_missing_sort_is_reported_with_the_leftover_name() {
        let src = "sort Location = site\n";
        let diags =
            parse_scenario(src, &rover_graph(), &rover_signature()).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "scenario-universe");
        assert!(diags[0].message.contains("Plan"), "{}", diags[0].message);
    }

    #[test]
    fn problems_carry_their_line_numbers() {
        let src = "sort Location = site, waypoint\n\
                   sort Plan = p0, p1\n\
                   pred contains = { (p9, waypoint) }\n\
                   stub Nobody = copy\n";
        let diags =
            parse_scenario(src, &rover_graph(), &rover_signature()).unwrap_err();
        assert_eq!(diags.len(), 2);
        assert_eq!(diags[0].code, "scenario-bad-value");
        assert_eq!(diags[0].span.line, 3);
        assert_eq!(diags[1].code, "scenario-unknown-node");
        assert_eq!(diags[1].span.line, 4);
    }

    #[test]
    fn unknown_directives_and_duplicates_are_rejected() {
        let src = "sort Location = site, waypoint\n\
                   sort Plan = p0, p1\n\
                   warp 9\n\
                   seed 1\n\
                   seed 2\n";
        let diags =
            parse_scenario(src, &rover_graph(), &rover_signature()).unwrap_err();
        let codes: Vec<&str> = diags.iter().map(|d| d.code.as_str()).collect();
        assert_eq!(codes, vec!["scenario-unknown-directive", "scenario-duplicate-seed"]);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let src = "-- a scenario\n\
                   \n\
                   sort Location = site, waypoint -- two places\n\
                   sort Plan = p0, p1\n\
                   nat 4\n";
        let scenario = parse_scenario(src, &rover_graph(), &rover_signature()).unwrap();
        assert_eq!(
            scenario.universe.element("Location", "waypoint"),
            Some(Value::Elem(1))
        );
    }

    #[test]
    fn values_render_and_parse_with_their_declared_names() {
        let scenario = parse_scenario(ROVER_SIM, &rover_graph(), &rover_signature()).unwrap();
        let u = &scenario.universe;
        let plan_set = Sort::set("Plan");
        let both = Value::set_of([0, 1]);
        assert_eq!(u.render_value(&plan_set, both), "{p0, p1}");
        assert_eq!(u.parse_value(&plan_set, "{p0, p1}").unwrap(), both);
        assert_eq!(u.parse_value(&plan_set, "{}").unwrap(), Value::set_of([]));
        assert_eq!(u.render_value(&Sort::base("Location"), Value::Elem(0)), "site");
        assert_eq!(u.parse_value(&Sort::Nat, "7"), Err("7 is outside the naturals 0..3".into()));
    }

    #[test]
    fn env_inputs_parse_against_the_port_sort() {
        let src = "sort Location = site, waypoint\n\
                   sort Plan = p0, p1\n\
                   input Planner.pose = waypoint\n\
                   input Vision.pose = site\n";
        let diags =
            parse_scenario(src, &rover_graph(), &rover_signature()).unwrap_err();
        // Vision.pose is an out-port; Planner.pose parses fine.
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "scenario-not-an-input");
        let src_ok = "sort Location = site, waypoint\n\
                      sort Plan = p0, p1\n\
                      input Planner.pose = waypoint\n";
        let scenario = parse_scenario(src_ok, &rover_graph(), &rover_signature()).unwrap();
        assert_eq!(scenario.inputs["Planner.pose"], Value::Elem(1));
    }
}
