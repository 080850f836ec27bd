//! Command-line front end for the contract toolkit.
//!
//! Four subcommands cover the pipeline end to end:
//!
//! - `check FILE` — parse, resolve, and structurally validate a spec.
//! - `verify FILE` — fold the graph into per-edge proof obligations plus an
//!   end-to-end contract and discharge every obligation within scope.
//! - `simulate FILE SCENARIO` — run the stubbed pipeline deterministically
//!   and monitor every contract online.
//! - `confidence FILE` — score the declared verification evidence.
//!
//! Every run emits one report to standard output, as text or JSON
//! (`--format`). Exit codes are a three-way contract: `0` all checks
//! passed, `1` verification findings (failed or inconclusive obligations,
//! monitor violations), `2` usage, I/O, parse, or resolve errors. Vacuity
//! is surfaced as warnings and never changes the exit code.

mod report;

use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use agspec_core::compose::{discharge_obligations, system_contract, ObligationStatus};
use agspec_core::confidence::{confidence_report, EvidenceTable, Technique};
use agspec_core::entailment::{
    CheckOptions, Scope, DEFAULT_BUDGET, DEFAULT_NAT_BOUND, DEFAULT_SCOPE,
};
use agspec_core::graph::SystemGraph;
use agspec_core::logic::Signature;
use agspec_core::monitor::{parse_scenario, run_simulation, MonitorState, Scenario};
use agspec_core::syntax::{parse_spec, resolve, Diagnostic};

pub use report::Report;
use report::{InputDigest, ObligationRow, ReportDiagnostic, SystemContractRow};

#[derive(Parser)]
#[command(
    name = "agspec",
    version,
    about = "Assume-guarantee contract checking for node pipelines",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, resolve, and structurally validate a spec file.
    Check {
        /// The .agspec file to check.
        file: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Generate and discharge the proof obligations of a spec's graph.
    Verify {
        /// The .agspec file to verify.
        file: PathBuf,
        /// Uniform per-sort domain-size bound for model enumeration.
        #[arg(long, default_value_t = DEFAULT_SCOPE)]
        scope: usize,
        /// Exclusive upper bound for naturals.
        #[arg(long, default_value_t = DEFAULT_NAT_BOUND)]
        nat: u64,
        /// Maximum (interpretation, assignment) pairs examined per check.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the stubbed pipeline against a scenario and monitor contracts.
    Simulate {
        /// The .agspec file describing the system.
        file: PathBuf,
        /// The .agsim scenario: universe, stubs, seed, steps, inputs.
        scenario: PathBuf,
        /// Override the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario's step count.
        #[arg(long)]
        steps: Option<usize>,
        /// Also write the recorded trace to this file as JSON lines.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Score the verification evidence declared for each node.
    Confidence {
        /// The .agspec file whose nodes are scored.
        file: PathBuf,
        /// JSON evidence table {node: [technique, ...]} replacing the
        /// spec's evidence clauses.
        #[arg(long, value_name = "FILE")]
        evidence: Option<PathBuf>,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args)]
struct OutputOpts {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Omit the timestamp field from JSON reports.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Parses the argument list, runs the command, writes the report, and
/// returns the process exit code. `args` includes the program name.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are not usage errors.
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = write!(out, "{}", err.render());
            return code;
        }
    };

    let (mut report, output) = match cli.command {
        Command::Check { file, output } => (cmd_check(&file), output),
        Command::Verify { file, scope, nat, budget, output } => {
            (cmd_verify(&file, scope, nat, budget), output)
        }
        Command::Simulate { file, scenario, seed, steps, trace, output } => {
            (cmd_simulate(&file, &scenario, seed, steps, trace.as_deref()), output)
        }
        Command::Confidence { file, evidence, output } => {
            (cmd_confidence(&file, evidence.as_deref()), output)
        }
    };

    if !output.no_timestamp {
        report.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .ok();
    }
    let rendered = match output.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
    };
    let _ = out.write_all(rendered.as_bytes());
    report.exit
}

/// Reads a file, recording its digest in the report; on failure records an
/// error diagnostic and the usage exit code.
fn read_input(report: &mut Report, path: &Path) -> Option<String> {
    match std::fs::read(path) {
        Ok(bytes) => {
            let digest = Sha256::digest(&bytes);
            let sha256 = digest.iter().fold(String::new(), |mut acc, byte| {
                let _ = std::fmt::Write::write_fmt(&mut acc, format_args!("{byte:02x}"));
                acc
            });
            report.inputs.push(InputDigest { path: path.display().to_string(), sha256 });
            match String::from_utf8(bytes) {
                Ok(text) => Some(text),
                Err(_) => {
                    fail(report, "io", format!("{} is not valid UTF-8", path.display()));
                    None
                }
            }
        }
        Err(err) => {
            fail(report, "io", format!("cannot read {}: {err}", path.display()));
            None
        }
    }
}

/// Records a fatal (exit 2) error diagnostic.
fn fail(report: &mut Report, code: &str, message: impl Into<String>) {
    report.diagnostics.push(ReportDiagnostic::error(code, message));
    report.exit = 2;
}

fn push_syntax_diagnostics(report: &mut Report, diags: &[Diagnostic]) {
    report.diagnostics.extend(diags.iter().map(ReportDiagnostic::from_syntax));
    report.exit = 2;
}

/// The shared front half: read, parse, resolve. `None` means the report
/// already carries the failure.
fn load_spec(report: &mut Report, path: &Path) -> Option<(Signature, SystemGraph)> {
    let source = read_input(report, path)?;
    let spec = match parse_spec(&source) {
        Ok(spec) => spec,
        Err(diags) => {
            push_syntax_diagnostics(report, &diags);
            return None;
        }
    };
    match resolve(&spec) {
        Ok(resolved) => Some(resolved),
        Err(diags) => {
            push_syntax_diagnostics(report, &diags);
            None
        }
    }
}

fn cmd_check(file: &Path) -> Report {
    let mut report = Report::new("check");
    let Some((_sig, graph)) = load_spec(&mut report, file) else { return report };

    // The resolver accepts any well-formed wiring; composition additionally
    // rejects multi-node cycles, so surface them here where the user asked
    // for validation.
    let validation = agspec_core::graph::validate_graph(&graph);
    for violation in &validation.violations {
        fail(&mut report, "graph", violation.to_string());
    }
    for cycle in &validation.cycles {
        if cycle.len() > 1 {
            fail(
                &mut report,
                "graph-cycle",
                format!("nodes form a cycle: {}", cycle.join(" -> ")),
            );
        }
    }
    report
}

fn cmd_verify(file: &Path, scope_bound: usize, nat: u64, budget: u64) -> Report {
    let mut report = Report::new("verify");
    let Some((sig, graph)) = load_spec(&mut report, file) else { return report };

    let (composed, obligations) = match system_contract(&graph, &sig, 1) {
        Ok(result) => result,
        Err(err) => {
            fail(&mut report, "compose", err.to_string());
            return report;
        }
    };
    let scope = Scope::uniform(&sig, scope_bound, nat);
    let options = CheckOptions { budget };
    let (obligations, summary) = match discharge_obligations(obligations, &sig, &scope, &options) {
        Ok(result) => result,
        Err(err) => {
            fail(&mut report, "entailment", err.to_string());
            return report;
        }
    };

    for obligation in &obligations {
        if obligation.vacuous_hypotheses == Some(true) {
            report.diagnostics.push(ReportDiagnostic::warning(
                "vacuous-hypotheses",
                format!(
                    "obligation {} holds vacuously: its hypotheses are unsatisfiable within scope",
                    obligation.id
                ),
            ));
        }
        let counterexample = match &obligation.status {
            ObligationStatus::Failed(witness) => Some(witness.to_string()),
            _ => None,
        };
        report.obligations.push(ObligationRow {
            id: obligation.id.clone(),
            from: obligation.origin.from_label(),
            to: obligation.origin.to_label(),
            status: obligation.status.label().to_string(),
            scope: scope.to_string(),
            counterexample,
        });
    }
    report.system_contract = Some(SystemContractRow {
        assumption: composed.contract.assumption.to_string(),
        guarantee: composed.contract.guarantee.to_string(),
    });
    report.exit = if summary.failed > 0 || summary.exhausted > 0 { 1 } else { 0 };
    report
}

fn cmd_simulate(
    file: &Path,
    scenario_path: &Path,
    seed: Option<u64>,
    steps: Option<usize>,
    trace_out: Option<&Path>,
) -> Report {
    let mut report = Report::new("simulate");
    let Some((sig, graph)) = load_spec(&mut report, file) else { return report };
    let Some(scenario_src) = read_input(&mut report, scenario_path) else { return report };

    let scenario: Scenario = match parse_scenario(&scenario_src, &graph, &sig) {
        Ok(scenario) => scenario,
        Err(diags) => {
            push_syntax_diagnostics(&mut report, &diags);
            return report;
        }
    };
    let seed = seed.unwrap_or(scenario.seed);
    let steps = steps.unwrap_or(scenario.steps);

    let outcome = match run_simulation(
        &graph,
        &scenario.stubs,
        &scenario.universe,
        &scenario.inputs,
        seed,
        steps,
    ) {
        Ok(outcome) => outcome,
        Err(err) => {
            fail(&mut report, "simulate", err.to_string());
            return report;
        }
    };

    if let Some(path) = trace_out {
        match outcome.trace.to_json_lines(&graph, &scenario.universe) {
            Ok(lines) => {
                if let Err(err) = std::fs::write(path, lines) {
                    fail(&mut report, "io", format!("cannot write {}: {err}", path.display()));
                    return report;
                }
            }
            Err(err) => {
                fail(&mut report, "simulate", err.to_string());
                return report;
            }
        }
    }

    // The same composed contract the simulation monitors, for the report.
    if let Ok((composed, _)) = system_contract(&graph, &sig, steps.max(1)) {
        report.system_contract = Some(SystemContractRow {
            assumption: composed.contract.assumption.to_string(),
            guarantee: composed.contract.guarantee.to_string(),
        });
    }

    let mut verdicts: Vec<(String, String)> = Vec::new();
    let mut violations = 0usize;
    let warn_vacuous = |name: &str, state: &MonitorState, report: &mut Report| {
        if state.is_vacuous() {
            report.diagnostics.push(ReportDiagnostic::warning(
                "vacuous-contract",
                format!("monitor for {name} ended vacuous: its assumption never held"),
            ));
        }
    };
    for (node, state) in &outcome.node_verdicts {
        warn_vacuous(node, state, &mut report);
        if state.is_violated() {
            violations += 1;
        }
        verdicts.push((node.clone(), state.to_string()));
    }
    warn_vacuous("the composed contract", &outcome.composed_verdict, &mut report);
    if outcome.composed_verdict.is_violated() {
        violations += 1;
    }
    verdicts.push(("system".to_string(), outcome.composed_verdict.to_string()));
    report.verdicts = Some(verdicts);
    report.exit = if violations > 0 { 1 } else { 0 };
    report
}

fn cmd_confidence(file: &Path, evidence_path: Option<&Path>) -> Report {
    let mut report = Report::new("confidence");
    let Some((_sig, graph)) = load_spec(&mut report, file) else { return report };

    let table = match evidence_path {
        None => EvidenceTable::from_graph(&graph),
        Some(path) => {
            let Some(text) = read_input(&mut report, path) else { return report };
            match parse_evidence_json(&text) {
                Ok(table) => table,
                Err(message) => {
                    fail(&mut report, "evidence", message);
                    return report;
                }
            }
        }
    };
    match confidence_report(&graph, &table) {
        Ok(confidence) => report.confidence = Some(confidence),
        Err(err) => fail(&mut report, "evidence", err.to_string()),
    }
    report
}

/// Parses a `{node: [technique, ...]}` evidence file.
fn parse_evidence_json(text: &str) -> Result<EvidenceTable, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|err| format!("malformed evidence JSON: {err}"))?;
    let object = value.as_object().ok_or("evidence JSON must be an object")?;
    let mut table = EvidenceTable::new();
    for (node, techniques) in object {
        let list = techniques
            .as_array()
            .ok_or_else(|| format!("evidence for {node} must be an array"))?;
        let mut set = std::collections::BTreeSet::new();
        for entry in list {
            let name = entry
                .as_str()
                .ok_or_else(|| format!("evidence for {node} holds a non-string entry"))?;
            let technique: Technique = name.parse().map_err(display_to_string)?;
            set.insert(technique);
        }
        table.set(node.clone(), set);
    }
    Ok(table)
}

fn display_to_string(err: impl Display) -> String {
    err.to_string()
}
