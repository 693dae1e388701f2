//! Grounding and search.
//!
//! [`ground`] turns a compiled model into cells and ground constraints;
//! [`solve_models`] and [`solve_optimize`] search them; [`oracle_enumerate`]
//! is the brute-force reference used by the tests.

pub mod ground;
pub mod oracle;
pub mod partial;
mod search;

use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::fo::{eval_formula, eval_term, CmpOp, Env, EvalError, Structure, Term, Value};
use crate::translate::{CompiledModel, ModelCount, Task};

pub use ground::{ground, Cell, GFormula, GTerm, GroundProblem};
pub use oracle::{oracle_enumerate, ORACLE_CAP};
pub use partial::Outcome;

use search::{Leaf, Searcher};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("search cancelled")]
    Cancelled,
    #[error("grounding exceeds the cap of {cap} (reached {size})")]
    DomainBlowup { size: usize, cap: usize },
    #[error("type {0} has an empty or missing domain")]
    EmptyDomain(String),
    #[error("oracle would try {size} structures, more than the cap of {cap}")]
    OracleBlowup { size: u128, cap: u128 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("internal error: returned structure violates `{0}`")]
    Unsound(String),
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub max_nodes: Option<u64>,
    /// Cap on ground nodes and constraints.
    pub max_ground: usize,
    pub timeout: Option<Duration>,
    /// Checked between search nodes.
    pub stop: Option<Arc<AtomicBool>>,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { max_nodes: None, max_ground: 10_000_000, timeout: None, stop: None }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub cells: usize,
    pub constraints: usize,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveResult {
    /// Models in search order; `exhausted` when the search space was fully explored.
    Models { models: Vec<Structure>, exhausted: bool },
    Optimum { model: Structure, value: Value },
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub result: SolveResult,
    pub stats: Stats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

fn verify(model: &CompiledModel, s: &Structure) -> Result<(), SolveError> {
    for sentence in &model.theory.sentences {
        if eval_formula(&sentence.formula, s, &mut Env::new()) != Ok(true) {
            return Err(SolveError::Unsound(sentence.formula.to_string()));
        }
    }
    Ok(())
}

fn stats(problem: &GroundProblem, nodes: u64) -> Stats {
    Stats { cells: problem.cells.len(), constraints: problem.constraints.len(), nodes }
}

/// The first `count` models in search order.
pub fn solve_models(problem: &GroundProblem, count: ModelCount, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    let mut models = Vec::new();
    let mut exhausted = true;
    let mut searcher = Searcher::new(problem, cfg, None);
    searcher.run(&mut |a| {
        let s = problem.structure(a);
        verify(&problem.model, &s)?;
        models.push(s);
        match count {
            ModelCount::N(n) if models.len() >= n => {
                exhausted = false;
                Ok(Leaf::Stop)
            }
            _ => Ok(Leaf::Continue),
        }
    })?;
    let result = if models.is_empty() { SolveResult::Unsat } else { SolveResult::Models { models, exhausted } };
    Ok(Solution { result, stats: stats(problem, searcher.nodes) })
}

/// Branch and bound: each model found tightens the bound to strict
/// improvement, so the result is the first optimal model in search order.
/// Models whose objective is null are skipped.
pub fn solve_optimize(
    problem: &GroundProblem,
    objective: &Term,
    direction: Direction,
    cfg: &SolveConfig,
) -> Result<Solution, SolveError> {
    let obj = problem.ground_term(objective, cfg.max_ground)?;
    let mut cells = Vec::new();
    obj.watched(&problem.tables, &mut cells);
    let mut best: Option<(Structure, i64)> = None;
    let mut searcher = Searcher::new(problem, cfg, Some(cells));
    searcher.run(&mut |a| {
        let s = problem.structure(a);
        verify(&problem.model, &s)?;
        let Ok(Value::Int(n)) = eval_term(objective, &s, &mut Env::new()) else {
            return Ok(Leaf::Continue);
        };
        let better = match &best {
            None => true,
            Some((_, b)) => match direction {
                Direction::Minimize => n < *b,
                Direction::Maximize => n > *b,
            },
        };
        if !better {
            return Err(SolveError::Unsound(format!("objective {n} does not improve the bound")));
        }
        best = Some((s, n));
        let op = match direction {
            Direction::Minimize => CmpOp::Lt,
            Direction::Maximize => CmpOp::Gt,
        };
        Ok(Leaf::Bound(GFormula::Cmp(op, obj.clone(), GTerm::Value(Value::Int(n)))))
    })?;
    let result = match best {
        Some((model, n)) => SolveResult::Optimum { model, value: Value::Int(n) },
        None => SolveResult::Unsat,
    };
    Ok(Solution { result, stats: stats(problem, searcher.nodes) })
}

/// Grounds the model and runs the task selected by its goal table.
pub fn solve(model: &CompiledModel, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    let problem = ground(model, cfg.max_ground)?;
    match &model.task {
        Task::ModelExpand(count) => solve_models(&problem, *count, cfg),
        Task::Minimize(t) => solve_optimize(&problem, t, Direction::Minimize, cfg),
        Task::Maximize(t) => solve_optimize(&problem, t, Direction::Maximize, cfg),
    }
}
