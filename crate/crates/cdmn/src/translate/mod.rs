//! From classified table blocks to a theory, a data structure and a task.

pub mod data;
pub mod goal;
pub mod tables;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::fo::{free_vars, symbols, Interp, Sentence, Structure, Term, Theory, Value};
use crate::glossary::{build_vocabulary, Signature, Vocabulary};
use crate::grid::{parse_grid, segment_blocks, BlockKind, HitPolicy, TableBlock};

pub use data::translate_data_tables;
pub use goal::{parse_goal, translate_goal};
pub use tables::{translate_aggregate, translate_constraint, translate_count, translate_decision, ParsedTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("output cell `{0}` must be a single value")]
    NonValueOutput(String),
    #[error("output header `{0}` must apply a function, constant, relation or boolean")]
    InvalidOutputHeader(String),
    #[error("aggregate tables have exactly one output column, found {0}")]
    MultipleOutputs(usize),
    #[error("`{0}` is not numeric")]
    NonNumericOutput(String),
    #[error("count output `{0}` is not numeric")]
    NonNumericCountTarget(String),
    #[error("counted value `{0}` has no declared type")]
    UntypedCountTarget(String),
    #[error("constraint tables cannot have a default value")]
    DefaultOnConstraintTable,
    #[error("aggregate tables cannot have a default value")]
    DefaultOnAggregateTable,
    #[error("malformed default `{0}`: give one value per output column")]
    MalformedDefault(String),
    #[error("data cell `{0}` is not a basic value")]
    NonBasicValue(String),
    #[error("data header `{0}` must be a variable (inputs) or apply a symbol to the input variables (outputs)")]
    InvalidDataHeader(String),
    #[error("data for `{symbol}` misses the arguments ({args})")]
    IncompleteFunctionData { symbol: String, args: String },
    #[error("two different values for `{symbol}` at ({args})")]
    ConflictingData { symbol: String, args: String },
    #[error("`{value}` is not an element of type {ty}")]
    UnknownDomainElement { value: String, ty: String },
    #[error("`{0}` is given by a data table and also defined by a decision table")]
    DataDecisionOverlap(String),
    #[error("more than one goal table")]
    MultipleGoalTables,
    #[error("goal `{0}` is not `get N models`, `get all models`, `minimize <term>` or `maximize <term>`")]
    MalformedGoal(String),
    #[error("goal term: {0}")]
    GoalTerm(String),
    #[error("objective `{0}` is not numeric")]
    NonNumericObjective(String),
    #[error("type {0} has no domain; enumerate it in the glossary or use it in a data table")]
    UndefinedDomain(String),
    #[error("sentence from `{0}` has free variables")]
    OpenSentence(String),
    #[error("symbol `{0}` is not declared")]
    UndeclaredSymbol(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelCount {
    N(usize),
    All,
}

impl fmt::Display for ModelCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelCount::N(n) => write!(f, "{n}"),
            ModelCount::All => f.write_str("all"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Task {
    ModelExpand(ModelCount),
    Minimize(Term),
    Maximize(Term),
}

impl Default for Task {
    fn default() -> Self {
        Task::ModelExpand(ModelCount::N(1))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::ModelExpand(n) => write!(f, "get {n} models"),
            Task::Minimize(t) => write!(f, "minimize {t}"),
            Task::Maximize(t) => write!(f, "maximize {t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledModel {
    pub vocabulary: Vocabulary,
    pub theory: Theory,
    /// Domains of all types plus the symbols fixed by data tables.
    pub data: Structure,
    pub task: Task,
    /// Default output values declared on decision tables.
    pub defaults: BTreeMap<String, Value>,
    /// Symbols whose value may be null.
    pub nullable: BTreeSet<String>,
}

impl CompiledModel {
    /// Symbols not fixed by data, in name order.
    pub fn open_symbols(&self) -> Vec<&Signature> {
        self.vocabulary.symbols.values().filter(|s| !self.data.interps.contains_key(&s.name)).collect()
    }
}

fn at_block(e: impl Into<Error>, b: &TableBlock) -> Error {
    e.into().at(&b.name, b.origin.first_row, None)
}

/// Compiles a workbook given as text.
pub fn compile_str(text: &str) -> Result<CompiledModel> {
    let grid = parse_grid(text)?;
    let blocks = segment_blocks(&grid)?;
    compile(&blocks)
}

/// Glossary first, then data tables, then decision and constraint tables in
/// file order, then the goal.
pub fn compile(blocks: &[TableBlock]) -> Result<CompiledModel> {
    let glossary: Vec<&TableBlock> = blocks.iter().filter(|b| b.kind.is_glossary()).collect();
    let mut vocab = build_vocabulary(&glossary)?;

    let goals: Vec<&TableBlock> = blocks.iter().filter(|b| b.kind == BlockKind::Goal).collect();
    if let Some(second) = goals.get(1) {
        return Err(at_block(TranslateError::MultipleGoalTables, second));
    }

    let data_blocks: Vec<&TableBlock> = blocks.iter().filter(|b| b.kind == BlockKind::Data).collect();
    let mut data = translate_data_tables(&data_blocks, &mut vocab)?;
    for (name, decl) in &vocab.types {
        match &decl.domain {
            Some(d) if !d.is_empty() => {
                data.domains.insert(name.clone(), d.clone());
            }
            _ => return Err(TranslateError::UndefinedDomain(name.clone()).into()),
        }
    }

    let rule_blocks: Vec<&TableBlock> =
        blocks.iter().filter(|b| matches!(b.kind, BlockKind::Decision | BlockKind::Constraint)).collect();
    let parsed = rule_blocks.iter().map(|b| ParsedTable::parse(b, &vocab)).collect::<Result<Vec<_>>>()?;

    // Outputs of U/A/F tables may be null; used to bound the exhaustiveness check.
    let mut maybe_null = BTreeSet::new();
    for t in &parsed {
        if matches!(t.block.hit_policy, Some(HitPolicy::Unique | HitPolicy::Any | HitPolicy::First)) {
            maybe_null.extend(tables::defined_symbols(t, &vocab).into_iter().map(|(s, _)| s));
        }
    }

    let mut theory = Theory::default();
    let mut defaults = BTreeMap::new();
    let mut nullable = BTreeSet::new();
    for t in &parsed {
        if t.block.kind == BlockKind::Decision {
            for (symbol, _) in tables::defined_symbols(t, &vocab) {
                if data.interps.contains_key(&symbol) {
                    return Err(at_block(TranslateError::DataDecisionOverlap(symbol), t.block));
                }
            }
        }
        let new: Vec<Sentence> = match t.block.hit_policy {
            Some(HitPolicy::Every) => vec![translate_constraint(t, &vocab)?],
            Some(HitPolicy::Sum | HitPolicy::Min | HitPolicy::Max) => vec![translate_aggregate(t, &vocab)?],
            Some(HitPolicy::Count) => vec![translate_count(t, &vocab)?],
            _ => {
                let out = translate_decision(t, &vocab, &data, &maybe_null)?;
                nullable.extend(out.nullable);
                defaults.extend(out.defaults);
                out.sentences
            }
        };
        for s in &new {
            if !free_vars(&s.formula).is_empty() {
                return Err(at_block(TranslateError::OpenSentence(s.table.clone()), t.block));
            }
            if let Some(unknown) = symbols(&s.formula).into_iter().find(|x| !vocab.symbols.contains_key(x)) {
                return Err(at_block(TranslateError::UndeclaredSymbol(unknown), t.block));
            }
        }
        theory.sentences.extend(new);
    }

    let task = match goals.first() {
        Some(b) => translate_goal(b, &vocab)?,
        None => Task::default(),
    };
    Ok(CompiledModel { vocabulary: vocab, theory, data, task, defaults, nullable })
}

/// Whether a data interpretation exists for `symbol`.
pub fn is_data_symbol(model: &CompiledModel, symbol: &str) -> bool {
    matches!(model.data.interps.get(symbol), Some(Interp::Function(_) | Interp::Relation(_) | Interp::Proposition(_)))
}
