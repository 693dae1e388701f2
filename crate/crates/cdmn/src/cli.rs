//! Command-line front end: compile a workbook, run its goal, print the result.
//!
//! Exit status: 0 models found, 1 unsatisfiable, 2 usage or compile error,
//! 3 resource limit or cancellation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::engine::{self, SolveConfig, SolveError, SolveResult, Stats};
use crate::error::Error;
use crate::fo::{Interp, Structure, Value};
use crate::glossary::{Signature, TemplateToken};
use crate::translate::{compile_str, CompiledModel, ModelCount, Task};

#[derive(Parser, Debug)]
#[command(name = "cdmn", version, about = "Compile and solve cDMN decision-table workbooks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compile the workbook and run its goal.
    Solve(SolveArgs),
    /// Compile only.
    Check(CommonArgs),
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// Workbook in comma-separated grid format.
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Print the compiled theory.
    #[arg(long)]
    pub emit_theory: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Number of models (`all` for every model); overrides the goal table.
    #[arg(long, value_parser = parse_count)]
    pub models: Option<ModelCount>,
    #[arg(long)]
    pub max_nodes: Option<u64>,
    #[arg(long)]
    pub max_ground: Option<usize>,
    /// Wall-clock budget for the search, in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn parse_count(s: &str) -> Result<ModelCount, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(ModelCount::All);
    }
    match s.parse::<usize>() {
        Ok(n) if n > 0 => Ok(ModelCount::N(n)),
        _ => Err(format!("expected a positive number or `all`, got `{s}`")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Unsat,
    Error,
}

/// Interpretation of one symbol in a reported model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolRecord {
    Function { entries: Vec<Entry> },
    Relation { tuples: Vec<Vec<Value>> },
    Proposition { value: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub args: Vec<Value>,
    pub value: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportStats {
    pub cells: usize,
    pub constraints: usize,
    pub nodes: u64,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub status: Status,
    pub task: String,
    /// One record per model, keyed by symbol name.
    pub models: Vec<BTreeMap<String, SymbolRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Value>,
    /// Whether every model was found (absent for optimisation).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theory: Option<Vec<String>>,
    pub stats: ReportStats,
}

pub fn record(s: &Structure) -> BTreeMap<String, SymbolRecord> {
    s.interps
        .iter()
        .map(|(name, interp)| {
            let r = match interp {
                Interp::Function(g) => SymbolRecord::Function {
                    entries: g.iter().map(|(a, v)| Entry { args: a.clone(), value: v.clone() }).collect(),
                },
                Interp::Relation(set) => SymbolRecord::Relation { tuples: set.iter().cloned().collect() },
                Interp::Proposition(b) => SymbolRecord::Proposition { value: *b },
            };
            (name.clone(), r)
        })
        .collect()
}

/// Rebuilds a structure from a reported model over the given domains.
pub fn structure_of(record: &BTreeMap<String, SymbolRecord>, domains: &BTreeMap<String, Vec<Value>>) -> Structure {
    let mut s = Structure { domains: domains.clone(), interps: BTreeMap::new() };
    for (name, r) in record {
        let interp = match r {
            SymbolRecord::Function { entries } => {
                Interp::Function(entries.iter().map(|e| (e.args.clone(), e.value.clone())).collect())
            }
            SymbolRecord::Relation { tuples } => Interp::Relation(tuples.iter().cloned().collect()),
            SymbolRecord::Proposition { value } => Interp::Proposition(*value),
        };
        s.interps.insert(name.clone(), interp);
    }
    s
}

/// Reads a symbol application back in the words of its glossary entry.
pub fn phrase(sig: &Signature, args: &[Value]) -> String {
    sig.template
        .iter()
        .map(|t| match t {
            TemplateToken::Word(w) => w.clone(),
            TemplateToken::Slot(i) => args.get(*i).map(ToString::to_string).unwrap_or_else(|| sig.arg_types[*i].clone()),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// The open symbols of a model as text lines.
pub fn render_model(s: &Structure, model: &CompiledModel) -> String {
    let mut out = String::new();
    for sig in model.open_symbols() {
        match s.interps.get(&sig.name) {
            Some(Interp::Function(g)) => {
                for (args, v) in g {
                    let _ = writeln!(out, "  {} = {}", phrase(sig, args), v);
                }
            }
            Some(Interp::Relation(set)) => {
                for args in set {
                    let _ = writeln!(out, "  {}", phrase(sig, args));
                }
            }
            Some(Interp::Proposition(b)) => {
                let _ = writeln!(out, "  {}: {}", phrase(sig, &[]), if *b { "Yes" } else { "No" });
            }
            None => {}
        }
    }
    out
}

fn theory_lines(model: &CompiledModel) -> Vec<String> {
    model.theory.sentences.iter().map(ToString::to_string).collect()
}

fn exit_code(e: &SolveError) -> i32 {
    match e {
        SolveError::ResourceLimit(_) | SolveError::Cancelled | SolveError::DomainBlowup { .. } | SolveError::OracleBlowup { .. } => 3,
        _ => 2,
    }
}

fn error_report(task: String, message: String) -> RunReport {
    RunReport {
        status: Status::Error,
        task,
        models: Vec::new(),
        objective: None,
        exhausted: None,
        error: Some(message),
        theory: None,
        stats: ReportStats::default(),
    }
}

fn emit_json(out: &mut dyn Write, report: &RunReport) {
    let text = serde_json::to_string_pretty(report).expect("report serialises");
    let _ = writeln!(out, "{text}");
}

fn compile_file(args: &CommonArgs) -> Result<CompiledModel, String> {
    let text = std::fs::read_to_string(&args.path).map_err(|e| format!("{}: {e}", args.path.display()))?;
    compile_str(&text).map_err(|e: Error| format!("{}: {e}", args.path.display()))
}

/// Runs one parsed command line, writing the report to `out` and
/// diagnostics to `err`. Returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match &cli.command {
        Command::Check(args) => check(args, out, err),
        Command::Solve(args) => solve(args, out, err),
    }
}

fn check(args: &CommonArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let model = match compile_file(args) {
        Ok(m) => m,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            if args.format == Format::Json {
                emit_json(out, &error_report(String::new(), msg));
            }
            return 2;
        }
    };
    match args.format {
        Format::Json => {
            let mut report = error_report(model.task.to_string(), String::new());
            report.status = Status::Ok;
            report.error = None;
            report.theory = args.emit_theory.then(|| theory_lines(&model));
            emit_json(out, &report);
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "ok: {} symbols, {} sentences, goal: {}",
                model.vocabulary.symbols.len(),
                model.theory.len(),
                model.task
            );
            if args.emit_theory {
                for line in theory_lines(&model) {
                    let _ = writeln!(out, "{line}\n");
                }
            }
        }
    }
    0
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let common = &args.common;
    let mut model = match compile_file(common) {
        Ok(m) => m,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            if common.format == Format::Json {
                emit_json(out, &error_report(String::new(), msg));
            }
            return 2;
        }
    };
    if let (Some(n), Task::ModelExpand(_)) = (args.models, &model.task) {
        model.task = Task::ModelExpand(n);
    }
    let mut cfg = SolveConfig { max_nodes: args.max_nodes, ..SolveConfig::default() };
    if let Some(g) = args.max_ground {
        cfg.max_ground = g;
    }
    if let Some(t) = args.timeout {
        if !(t.is_finite() && t >= 0.0) {
            let _ = writeln!(err, "error: --timeout must be a non-negative number of seconds");
            return 2;
        }
        cfg.timeout = Some(Duration::from_secs_f64(t));
    }
    let task = model.task.to_string();
    let started = Instant::now();
    let solution = match engine::solve(&model, &cfg) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if common.format == Format::Json {
                emit_json(out, &error_report(task, e.to_string()));
            }
            return exit_code(&e);
        }
    };
    let elapsed_ms = started.elapsed().as_secs_f64() * 1000.0;
    let Stats { cells, constraints, nodes } = solution.stats;
    let stats = ReportStats { cells, constraints, nodes, elapsed_ms };
    let (status, models, objective, exhausted) = match &solution.result {
        SolveResult::Models { models, exhausted } => (Status::Ok, models.clone(), None, Some(*exhausted)),
        SolveResult::Optimum { model, value } => (Status::Ok, vec![model.clone()], Some(value.clone()), None),
        SolveResult::Unsat => (Status::Unsat, Vec::new(), None, None),
    };
    match common.format {
        Format::Json => {
            let report = RunReport {
                status,
                task,
                models: models.iter().map(record).collect(),
                objective,
                exhausted,
                error: None,
                theory: common.emit_theory.then(|| theory_lines(&model)),
                stats,
            };
            emit_json(out, &report);
        }
        Format::Text => {
            if common.emit_theory {
                for line in theory_lines(&model) {
                    let _ = writeln!(out, "{line}\n");
                }
            }
            if status == Status::Unsat {
                let _ = writeln!(out, "unsatisfiable");
            }
            if let Some(v) = &objective {
                let _ = writeln!(out, "optimum: {v}");
            }
            for (i, m) in models.iter().enumerate() {
                let _ = writeln!(out, "model {}", i + 1);
                let _ = write!(out, "{}", render_model(m, &model));
            }
            if exhausted == Some(true) && models.len() > 1 {
                let _ = writeln!(out, "({} models, no more)", models.len());
            }
        }
    }
    if status == Status::Unsat {
        1
    } else {
        0
    }
}
