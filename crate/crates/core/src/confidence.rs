//! Verification-confidence scoring over the per-node evidence matrix.
//!
//! Each node records which of three technique categories have been applied
//! to it: testing, simulation-based testing, and formal methods. The
//! confidence score is the fraction of filled cells in that node × technique
//! matrix, kept as an exact rational (no floating point), with a one-decimal
//! percent rendering for reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::SystemGraph;

/// One verification technique category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technique {
    Testing,
    Simulation,
    Formal,
}

impl Technique {
    /// All categories, in the fixed reporting order.
    pub const ALL: [Technique; 3] = [Technique::Testing, Technique::Simulation, Technique::Formal];

    pub fn label(self) -> &'static str {
        match self {
            Technique::Testing => "testing",
            Technique::Simulation => "simulation",
            Technique::Formal => "formal",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown technique `{0}`; expected testing, simulation, or formal")]
pub struct TechniqueParseError(String);

impl FromStr for Technique {
    type Err = TechniqueParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "testing" => Ok(Technique::Testing),
            "simulation" => Ok(Technique::Simulation),
            "formal" => Ok(Technique::Formal),
            other => Err(TechniqueParseError(other.to_string())),
        }
    }
}

/// Node name → set of techniques applied to that node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvidenceTable(BTreeMap<String, BTreeSet<Technique>>);

impl EvidenceTable {
    pub fn new() -> EvidenceTable {
        EvidenceTable(BTreeMap::new())
    }

    /// Collects the `evidence` declarations of every node in the graph.
    pub fn from_graph(graph: &SystemGraph) -> EvidenceTable {
        EvidenceTable(
            graph
                .nodes()
                .iter()
                .map(|n| (n.name.clone(), n.evidence.clone()))
                .collect(),
        )
    }

    pub fn set(&mut self, node: impl Into<String>, techniques: BTreeSet<Technique>) {
        self.0.insert(node.into(), techniques);
    }

    /// Adds one technique; returns true when it was not already present.
    pub fn add(&mut self, node: impl Into<String>, technique: Technique) -> bool {
        self.0.entry(node.into()).or_default().insert(technique)
    }

    pub fn get(&self, node: &str) -> Option<&BTreeSet<Technique>> {
        self.0.get(node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl FromIterator<(String, BTreeSet<Technique>)> for EvidenceTable {
    fn from_iter<T: IntoIterator<Item = (String, BTreeSet<Technique>)>>(iter: T) -> Self {
        EvidenceTable(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfidenceError {
    #[error("confidence is undefined for an empty evidence table")]
    EmptyTable,
    #[error("evidence names node `{0}`, which is not in the graph")]
    UnknownNode(String),
}

/// Fraction of applied techniques: total checkmarks over nodes × 3, as an
/// exact rational.
pub fn confidence_score(table: &EvidenceTable) -> Result<Ratio<u64>, ConfidenceError> {
    if table.is_empty() {
        return Err(ConfidenceError::EmptyTable);
    }
    let checkmarks: u64 = table.0.values().map(|s| s.len() as u64).sum();
    let cells = table.len() as u64 * Technique::ALL.len() as u64;
    Ok(Ratio::new(checkmarks, cells))
}

/// Per-node line of a confidence report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfidenceRow {
    pub node: String,
    pub applied: Vec<Technique>,
    pub missing: Vec<Technique>,
}

/// Full confidence report: raw counts, exact score, percent rendering, and
/// one row per graph node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfidenceReport {
    /// Total checkmarks, unreduced.
    pub numerator: u64,
    /// Graph node count × 3, unreduced.
    pub denominator: u64,
    /// numerator/denominator in lowest terms.
    pub score: Ratio<u64>,
    /// One decimal place, round half up (e.g. "75.0").
    pub percent: String,
    pub rows: Vec<ConfidenceRow>,
}

/// Renders `1000 * numerator / denominator` tenths-of-a-percent, rounded
/// half up, as "D.d".
fn percent_one_decimal(numerator: u64, denominator: u64) -> String {
    debug_assert!(denominator > 0);
    let tenths = (2 * 1000 * numerator + denominator) / (2 * denominator);
    format!("{}.{}", tenths / 10, tenths % 10)
}

/// Builds the report for a graph. Nodes absent from the table count as
/// having no evidence; a table entry for a node the graph lacks is an error.
pub fn confidence_report(
    graph: &SystemGraph,
    table: &EvidenceTable,
) -> Result<ConfidenceReport, ConfidenceError> {
    for node in table.nodes() {
        if graph.node(node).is_none() {
            return Err(ConfidenceError::UnknownNode(node.clone()));
        }
    }
    if graph.nodes().is_empty() {
        return Err(ConfidenceError::EmptyTable);
    }
    let empty = BTreeSet::new();
    let mut numerator = 0u64;
    let mut rows = Vec::with_capacity(graph.nodes().len());
    for node in graph.nodes() {
        let applied_set = table.get(&node.name).unwrap_or(&empty);
        numerator += applied_set.len() as u64;
        let applied: Vec<Technique> =
            Technique::ALL.iter().copied().filter(|t| applied_set.contains(t)).collect();
        let missing: Vec<Technique> =
            Technique::ALL.iter().copied().filter(|t| !applied_set.contains(t)).collect();
        rows.push(ConfidenceRow { node: node.name.clone(), applied, missing });
    }
    let denominator = graph.nodes().len() as u64 * Technique::ALL.len() as u64;
    Ok(ConfidenceReport {
        numerator,
        denominator,
        score: Ratio::new(numerator, denominator),
        percent: percent_one_decimal(numerator, denominator),
        rows,
    })
}

impl fmt::Display for ConfidenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "confidence: {}/{} = {}%",
            self.numerator, self.denominator, self.percent
        )?;
        for row in &self.rows {
            let applied: Vec<&str> = row.applied.iter().map(|t| t.label()).collect();
            let missing: Vec<&str> = row.missing.iter().map(|t| t.label()).collect();
            writeln!(
                f,
                "  {}: applied [{}], missing [{}]",
                row.node,
                applied.join(", "),
                missing.join(", ")
            )?;
        }
        Ok(())
    }
}
