//! Depth-first search over cells in index order with forward checking.
//!
//! Domains shrink by value removal recorded on a trail. Whenever a cell
//! becomes decided, the constraints watching it are re-evaluated; a
//! constraint that can no longer be true fails the node, and one whose
//! only undecided cell is `c` removes the values of `c` that would falsify it.

use std::collections::VecDeque;
use std::sync::atomic::Ordering;
use std::time::Instant;

use super::ground::{GFormula, GroundProblem};
use super::partial::{Evaluator, View};
use super::{SolveConfig, SolveError};

/// What to do after reaching a total assignment.
pub(crate) enum Leaf {
    Continue,
    Stop,
    /// Continue, replacing the bound constraint.
    Bound(GFormula),
}

struct Domains {
    alive: Vec<Vec<bool>>,
    size: Vec<usize>,
    /// Overrides one cell with a single value during trial evaluation.
    trial: Option<(usize, usize)>,
}

impl Domains {
    fn decided(&self, cell: usize) -> Option<usize> {
        if let Some((c, k)) = self.trial {
            if c == cell {
                return Some(k);
            }
        }
        if self.size[cell] == 1 {
            self.alive[cell].iter().position(|&a| a)
        } else {
            None
        }
    }
}

struct DomainsWithBounds<'a> {
    d: &'a Domains,
    problem: &'a GroundProblem,
}

impl View for DomainsWithBounds<'_> {
    fn decided(&self, cell: usize) -> Option<usize> {
        self.d.decided(cell)
    }

    fn int_bounds(&self, cell: usize) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for (v, &a) in self.problem.cells[cell].domain.iter().zip(&self.d.alive[cell]) {
            if let (true, Some(n)) = (a, v.as_int()) {
                lo = lo.min(n);
                hi = hi.max(n);
            }
        }
        (lo, hi)
    }
}

enum Check {
    Fine,
    Conflict,
    Prune(usize, Vec<usize>),
}

pub(crate) struct Searcher<'p> {
    problem: &'p GroundProblem,
    cfg: &'p SolveConfig,
    started: Instant,
    d: Domains,
    trail: Vec<(usize, usize)>,
    watchers: Vec<Vec<usize>>,
    constraints: Vec<GFormula>,
    bound: Option<usize>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
    pub nodes: u64,
}

impl<'p> Searcher<'p> {
    /// `bound_cells` are the cells of the optimisation objective, if any;
    /// the bound constraint starts out trivially true.
    pub fn new(problem: &'p GroundProblem, cfg: &'p SolveConfig, bound_cells: Option<Vec<usize>>) -> Self {
        let n = problem.cells.len();
        let mut constraints = problem.constraints.clone();
        let mut watchers = vec![Vec::new(); n];
        for (k, c) in constraints.iter().enumerate() {
            let mut w = Vec::new();
            c.watched(&problem.tables, &mut w);
            w.sort_unstable();
            w.dedup();
            for cell in w {
                watchers[cell].push(k);
            }
        }
        let bound = bound_cells.map(|mut cells| {
            let k = constraints.len();
            constraints.push(GFormula::Const(super::partial::Outcome::TRUE));
            cells.sort_unstable();
            cells.dedup();
            for cell in cells {
                watchers[cell].push(k);
            }
            k
        });
        let alive: Vec<Vec<bool>> = problem.cells.iter().map(|c| vec![true; c.domain.len()]).collect();
        let size = problem.cells.iter().map(|c| c.domain.len()).collect();
        let m = constraints.len();
        Searcher {
            problem,
            cfg,
            started: Instant::now(),
            d: Domains { alive, size, trial: None },
            trail: Vec::new(),
            watchers,
            constraints,
            bound,
            queue: VecDeque::new(),
            queued: vec![false; m],
            nodes: 0,
        }
    }

    /// Explores the whole tree, calling `on_leaf` with the value index of
    /// every cell at each total assignment satisfying all constraints.
    pub fn run(&mut self, on_leaf: &mut dyn FnMut(&[usize]) -> Result<Leaf, SolveError>) -> Result<(), SolveError> {
        for k in 0..self.constraints.len() {
            self.enqueue(k);
        }
        if !self.propagate() {
            return Ok(());
        }
        self.dfs(0, on_leaf).map(|_| ())
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.nodes += 1;
        if let Some(max) = self.cfg.max_nodes {
            if self.nodes > max {
                return Err(SolveError::ResourceLimit(format!("search node limit of {max} reached")));
            }
        }
        if let Some(stop) = &self.cfg.stop {
            if stop.load(Ordering::Relaxed) {
                return Err(SolveError::Cancelled);
            }
        }
        if let Some(t) = self.cfg.timeout {
            if self.started.elapsed() > t {
                return Err(SolveError::ResourceLimit(format!("time limit of {:?} reached", t)));
            }
        }
        Ok(())
    }

    fn dfs(&mut self, from: usize, on_leaf: &mut dyn FnMut(&[usize]) -> Result<Leaf, SolveError>) -> Result<bool, SolveError> {
        self.tick()?;
        let next = (from..self.d.size.len()).find(|&c| self.d.size[c] > 1);
        let Some(c) = next else {
            let assignment: Vec<usize> = (0..self.d.size.len()).map(|c| self.d.decided(c).expect("decided")).collect();
            return match on_leaf(&assignment)? {
                Leaf::Continue => Ok(true),
                Leaf::Stop => Ok(false),
                Leaf::Bound(f) => {
                    if let Some(k) = self.bound {
                        self.constraints[k] = f;
                    }
                    Ok(true)
                }
            };
        };
        let values: Vec<usize> = (0..self.d.alive[c].len()).filter(|&k| self.d.alive[c][k]).collect();
        for k in values {
            let mark = self.trail.len();
            let mut ok = true;
            for other in 0..self.d.alive[c].len() {
                if other != k && self.d.alive[c][other] {
                    ok &= self.remove(c, other);
                }
            }
            if let Some(b) = self.bound {
                self.enqueue(b);
            }
            if ok && self.propagate() && !self.dfs(c + 1, on_leaf)? {
                self.undo(mark);
                return Ok(false);
            }
            self.undo(mark);
        }
        Ok(true)
    }

    fn enqueue(&mut self, k: usize) {
        if !self.queued[k] {
            self.queued[k] = true;
            self.queue.push_back(k);
        }
    }

    /// Removes value `k` from cell `c`; false when the domain empties.
    fn remove(&mut self, c: usize, k: usize) -> bool {
        self.d.alive[c][k] = false;
        self.d.size[c] -= 1;
        self.trail.push((c, k));
        match self.d.size[c] {
            0 => false,
            1 => {
                for i in 0..self.watchers[c].len() {
                    let w = self.watchers[c][i];
                    self.enqueue(w);
                }
                true
            }
            _ => true,
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (c, k) = self.trail.pop().unwrap();
            self.d.alive[c][k] = true;
            self.d.size[c] += 1;
        }
    }

    fn propagate(&mut self) -> bool {
        while let Some(k) = self.queue.pop_front() {
            self.queued[k] = false;
            let ok = match self.check(k) {
                Check::Fine => true,
                Check::Conflict => false,
                Check::Prune(c, values) => values.into_iter().all(|v| self.remove(c, v)),
            };
            if !ok {
                while let Some(k) = self.queue.pop_front() {
                    self.queued[k] = false;
                }
                return false;
            }
        }
        true
    }

    fn check(&mut self, k: usize) -> Check {
        let f = &self.constraints[k];
        let view = DomainsWithBounds { d: &self.d, problem: self.problem };
        let mut ev = Evaluator::new(self.problem, &view);
        if !ev.formula(f).can_be_true() {
            return Check::Conflict;
        }
        let [c] = ev.touched[..] else { return Check::Fine };
        if self.d.size[c] <= 1 {
            return Check::Fine;
        }
        let mut doomed = Vec::new();
        for v in 0..self.d.alive[c].len() {
            if !self.d.alive[c][v] {
                continue;
            }
            self.d.trial = Some((c, v));
            let view = DomainsWithBounds { d: &self.d, problem: self.problem };
            if !Evaluator::new(self.problem, &view).formula(f).can_be_true() {
                doomed.push(v);
            }
            self.d.trial = None;
        }
        if doomed.is_empty() {
            Check::Fine
        } else {
            Check::Prune(c, doomed)
        }
    }
}
