//! Grounding: quantifiers and aggregates expanded over the finite domains,
//! data symbols replaced by their values, open symbols replaced by cells.
//!
//! Ground trees keep the evaluation order of [`crate::fo::eval`], so an
//! assignment satisfies every ground constraint exactly when the structure
//! it denotes satisfies every sentence.

use std::collections::BTreeMap;
use std::fmt;

use crate::fo::{ArithOp, CmpOp, EvalError, Formula, Interp, Structure, Term, Value, Var};
use crate::glossary::SymbolKind;
use crate::translate::CompiledModel;

use super::partial::{Evaluator, Known, Outcome};
use super::SolveError;

/// One undecided symbol entry, e.g. `color(Belgium)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub symbol: String,
    pub args: Vec<Value>,
    /// Candidate values in search order. Predicate cells use `[0, 1]` for
    /// false and true.
    pub domain: Vec<Value>,
    pub predicate: bool,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbol)?;
        if !self.args.is_empty() {
            let args: Vec<String> = self.args.iter().map(ToString::to_string).collect();
            write!(f, "({})", args.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Cell(usize),
    Value(Value),
    Truth(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SymbolTable {
    pub name: String,
    pub predicate: bool,
    pub slots: BTreeMap<Vec<Value>, Slot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GTerm {
    Value(Value),
    /// A subterm whose evaluation fails whatever the cells hold.
    Err,
    Cell(usize),
    /// Application whose arguments depend on cells.
    Lookup(usize, Vec<GTerm>),
    Arith(ArithOp, Box<GTerm>, Box<GTerm>),
    Sum(Vec<(GFormula, GTerm)>),
    Min(Vec<(GFormula, GTerm)>),
    Max(Vec<(GFormula, GTerm)>),
    Count(Vec<GFormula>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GFormula {
    Const(Outcome),
    Atom(usize),
    Lookup(usize, Vec<GTerm>),
    Cmp(CmpOp, GTerm, GTerm),
    Not(Box<GFormula>),
    /// Evaluated left to right, stopping at the first non-true part.
    And(Vec<GFormula>),
    Or(Vec<GFormula>),
}

impl GFormula {
    /// Cells whose value may influence this constraint; lookups count
    /// every cell of the looked-up symbol.
    pub(crate) fn watched(&self, tables: &[SymbolTable], out: &mut Vec<usize>) {
        match self {
            GFormula::Const(_) => {}
            GFormula::Atom(c) => out.push(*c),
            GFormula::Lookup(s, args) => {
                table_cells(&tables[*s], out);
                args.iter().for_each(|a| a.watched(tables, out));
            }
            GFormula::Cmp(_, l, r) => {
                l.watched(tables, out);
                r.watched(tables, out);
            }
            GFormula::Not(g) => g.watched(tables, out),
            GFormula::And(gs) | GFormula::Or(gs) => gs.iter().for_each(|g| g.watched(tables, out)),
        }
    }
}

impl GTerm {
    pub(crate) fn watched(&self, tables: &[SymbolTable], out: &mut Vec<usize>) {
        match self {
            GTerm::Value(_) | GTerm::Err => {}
            GTerm::Cell(c) => out.push(*c),
            GTerm::Lookup(s, args) => {
                table_cells(&tables[*s], out);
                args.iter().for_each(|a| a.watched(tables, out));
            }
            GTerm::Arith(_, l, r) => {
                l.watched(tables, out);
                r.watched(tables, out);
            }
            GTerm::Sum(bs) | GTerm::Min(bs) | GTerm::Max(bs) => {
                for (c, t) in bs {
                    c.watched(tables, out);
                    t.watched(tables, out);
                }
            }
            GTerm::Count(cs) => cs.iter().for_each(|c| c.watched(tables, out)),
        }
    }

    fn is_const(&self) -> bool {
        matches!(self, GTerm::Value(_) | GTerm::Err)
    }
}

fn table_cells(t: &SymbolTable, out: &mut Vec<usize>) {
    out.extend(t.slots.values().filter_map(|s| match s {
        Slot::Cell(c) => Some(*c),
        _ => None,
    }));
}

/// Cells and ground constraints of a compiled model.
#[derive(Clone, Debug)]
pub struct GroundProblem {
    pub cells: Vec<Cell>,
    pub constraints: Vec<GFormula>,
    pub(crate) tables: Vec<SymbolTable>,
    pub(crate) table_index: BTreeMap<String, usize>,
    pub(crate) model: CompiledModel,
    /// Open symbols with their kinds, in cell order.
    pub(crate) open: Vec<(String, SymbolKind)>,
}

impl GroundProblem {
    pub fn model(&self) -> &CompiledModel {
        &self.model
    }

    /// Index of the cell for `symbol(args)`, if it is open.
    pub fn cell_index(&self, symbol: &str, args: &[Value]) -> Option<usize> {
        let t = &self.tables[*self.table_index.get(symbol)?];
        match t.slots.get(args)? {
            Slot::Cell(c) => Some(*c),
            _ => None,
        }
    }

    /// The total structure given by one value index per cell.
    pub fn structure(&self, assignment: &[usize]) -> Structure {
        let mut s = self.model.data.clone();
        for (name, kind) in &self.open {
            let interp = match kind {
                SymbolKind::Function | SymbolKind::Constant => Interp::Function(BTreeMap::new()),
                SymbolKind::Relation => Interp::Relation(Default::default()),
                SymbolKind::Boolean => Interp::Proposition(false),
            };
            s.interps.insert(name.clone(), interp);
        }
        for (cell, &k) in self.cells.iter().zip(assignment) {
            match s.interps.get_mut(&cell.symbol) {
                Some(Interp::Function(g)) => {
                    g.insert(cell.args.clone(), cell.domain[k].clone());
                }
                Some(Interp::Relation(set)) => {
                    if k == 1 {
                        set.insert(cell.args.clone());
                    }
                }
                Some(Interp::Proposition(b)) => *b = k == 1,
                None => unreachable!("open symbols are initialised"),
            }
        }
        s
    }

    /// Value indices of the cells in a total structure, if it interprets
    /// every cell with a value from its domain.
    pub fn assignment_of(&self, s: &Structure) -> Option<Vec<usize>> {
        self.cells
            .iter()
            .map(|c| {
                if c.predicate {
                    let holds = match s.interps.get(&c.symbol)? {
                        Interp::Relation(set) => set.contains(&c.args),
                        Interp::Proposition(b) => *b,
                        Interp::Function(_) => return None,
                    };
                    Some(holds as usize)
                } else {
                    let v = s.function_value(&c.symbol, &c.args)?;
                    c.domain.iter().position(|d| d == v)
                }
            })
            .collect()
    }

    /// Grounds a term over this problem's cells (used for objectives).
    pub fn ground_term(&self, term: &Term, cap: usize) -> Result<GTerm, SolveError> {
        let mut g = Grounder::new(self, cap);
        g.term(term)
    }

    pub fn show(&self, f: &GFormula) -> String {
        let mut out = String::new();
        self.fmt_formula(f, &mut out);
        out
    }

    pub fn show_term(&self, t: &GTerm) -> String {
        let mut out = String::new();
        self.fmt_term(t, &mut out);
        out
    }

    fn fmt_formula(&self, f: &GFormula, out: &mut String) {
        match f {
            GFormula::Const(o) => out.push_str(&o.to_string()),
            GFormula::Atom(c) => out.push_str(&self.cells[*c].to_string()),
            GFormula::Lookup(s, args) => self.fmt_app(&self.tables[*s].name, args, out),
            GFormula::Cmp(op, l, r) => {
                self.fmt_term(l, out);
                out.push_str(match op {
                    CmpOp::Eq => " = ",
                    CmpOp::Neq => " ≠ ",
                    CmpOp::Lt => " < ",
                    CmpOp::Leq => " ≤ ",
                    CmpOp::Gt => " > ",
                    CmpOp::Geq => " ≥ ",
                });
                self.fmt_term(r, out);
            }
            GFormula::Not(g) => {
                out.push_str("¬(");
                self.fmt_formula(g, out);
                out.push(')');
            }
            GFormula::And(gs) | GFormula::Or(gs) => {
                let sep = if matches!(f, GFormula::And(_)) { " ∧ " } else { " ∨ " };
                out.push('(');
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    self.fmt_formula(g, out);
                }
                out.push(')');
            }
        }
    }

    fn fmt_app(&self, name: &str, args: &[GTerm], out: &mut String) {
        out.push_str(name);
        out.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            self.fmt_term(a, out);
        }
        out.push(')');
    }

    fn fmt_term(&self, t: &GTerm, out: &mut String) {
        match t {
            GTerm::Value(v) => out.push_str(&v.to_string()),
            GTerm::Err => out.push_str("error"),
            GTerm::Cell(c) => out.push_str(&self.cells[*c].to_string()),
            GTerm::Lookup(s, args) => self.fmt_app(&self.tables[*s].name, args, out),
            GTerm::Arith(op, l, r) => {
                out.push('(');
                self.fmt_term(l, out);
                out.push_str(match op {
                    ArithOp::Add => " + ",
                    ArithOp::Sub => " - ",
                    ArithOp::Mul => " * ",
                    ArithOp::Div => " / ",
                });
                self.fmt_term(r, out);
                out.push(')');
            }
            GTerm::Sum(bs) | GTerm::Min(bs) | GTerm::Max(bs) => {
                out.push_str(match t {
                    GTerm::Sum(_) => "sum{",
                    GTerm::Min(_) => "min{",
                    _ => "max{",
                });
                for (i, (c, b)) in bs.iter().enumerate() {
                    if i > 0 {
                        out.push_str("; ");
                    }
                    self.fmt_formula(c, out);
                    out.push_str(": ");
                    self.fmt_term(b, out);
                }
                out.push('}');
            }
            GTerm::Count(cs) => {
                out.push_str("#{");
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str("; ");
                    }
                    self.fmt_formula(c, out);
                }
                out.push('}');
            }
        }
    }
}

/// Builds cells for every open symbol and splits every sentence into
/// ground constraints.
pub fn ground(model: &CompiledModel, cap: usize) -> Result<GroundProblem, SolveError> {
    for (ty, d) in &model.data.domains {
        if d.is_empty() {
            return Err(SolveError::EmptyDomain(ty.clone()));
        }
    }
    let mut cells = Vec::new();
    let mut tables = Vec::new();
    let mut table_index = BTreeMap::new();
    let mut open = Vec::new();
    for (name, sig) in &model.vocabulary.symbols {
        let predicate = sig.is_predicate();
        let mut slots = BTreeMap::new();
        match model.data.interps.get(name) {
            Some(Interp::Function(graph)) => {
                for (args, v) in graph {
                    slots.insert(args.clone(), Slot::Value(v.clone()));
                }
            }
            Some(Interp::Relation(set)) => {
                tuples(&sig.arg_types, &model.data, &mut |args| {
                    slots.insert(args.to_vec(), Slot::Truth(set.contains(args)));
                })?;
            }
            Some(Interp::Proposition(b)) => {
                slots.insert(Vec::new(), Slot::Truth(*b));
            }
            None => {
                let domain = if predicate {
                    vec![Value::Int(0), Value::Int(1)]
                } else {
                    let ty = sig.result_type.as_deref().unwrap_or_default();
                    let mut d = model.data.domain(ty).ok_or_else(|| SolveError::EmptyDomain(ty.to_string()))?.to_vec();
                    if model.nullable.contains(name) {
                        d.push(Value::Null);
                    }
                    d
                };
                tuples(&sig.arg_types, &model.data, &mut |args| {
                    slots.insert(args.to_vec(), Slot::Cell(cells.len()));
                    cells.push(Cell { symbol: name.clone(), args: args.to_vec(), domain: domain.clone(), predicate });
                })?;
                open.push((name.clone(), sig.kind));
            }
        }
        table_index.insert(name.clone(), tables.len());
        tables.push(SymbolTable { name: name.clone(), predicate, slots });
    }
    let mut problem = GroundProblem { cells, constraints: Vec::new(), tables, table_index, model: model.clone(), open };
    let mut constraints = Vec::new();
    {
        let mut g = Grounder::new(&problem, cap);
        for f in model.theory.formulas() {
            match g.formula(f)? {
                GFormula::Const(Outcome::TRUE) => {}
                GFormula::And(parts) => constraints.extend(parts),
                other => constraints.push(other),
            }
            if constraints.len() > cap {
                return Err(SolveError::DomainBlowup { size: constraints.len(), cap });
            }
        }
    }
    problem.constraints = constraints;
    Ok(problem)
}

fn tuples(types: &[String], s: &Structure, f: &mut dyn FnMut(&[Value])) -> Result<(), SolveError> {
    fn go(types: &[String], s: &Structure, acc: &mut Vec<Value>, f: &mut dyn FnMut(&[Value])) -> Result<(), SolveError> {
        let Some((first, rest)) = types.split_first() else {
            f(acc);
            return Ok(());
        };
        let d = s.domain(first).ok_or_else(|| SolveError::EmptyDomain(first.clone()))?;
        for v in d {
            acc.push(v.clone());
            go(rest, s, acc, f)?;
            acc.pop();
        }
        Ok(())
    }
    go(types, s, &mut Vec::new(), f)
}

struct Grounder<'p> {
    problem: &'p GroundProblem,
    env: Vec<(String, Value)>,
    size: usize,
    cap: usize,
}

impl<'p> Grounder<'p> {
    fn new(problem: &'p GroundProblem, cap: usize) -> Self {
        Grounder { problem, env: Vec::new(), size: 0, cap }
    }

    fn tick(&mut self) -> Result<(), SolveError> {
        self.size += 1;
        if self.size > self.cap {
            return Err(SolveError::DomainBlowup { size: self.size, cap: self.cap });
        }
        Ok(())
    }

    /// Runs `f` once per tuple of the variables' domains, bound in the environment.
    fn each_tuple<T>(
        &mut self,
        vars: &[Var],
        f: &mut dyn FnMut(&mut Self) -> Result<T, SolveError>,
        out: &mut Vec<T>,
    ) -> Result<(), SolveError> {
        let Some((first, rest)) = vars.split_first() else {
            out.push(f(self)?);
            return Ok(());
        };
        let domain = self
            .problem
            .model
            .data
            .domain(&first.ty)
            .ok_or_else(|| SolveError::Eval(EvalError::UnknownType(first.ty.clone())))?
            .to_vec();
        for v in domain {
            self.env.push((first.name.clone(), v));
            let r = self.each_tuple(rest, f, out);
            self.env.pop();
            r?;
        }
        Ok(())
    }

    fn fold_term(&self, t: GTerm) -> GTerm {
        let children_const = match &t {
            GTerm::Arith(_, l, r) => l.is_const() && r.is_const(),
            GTerm::Sum(bs) | GTerm::Min(bs) | GTerm::Max(bs) => {
                bs.iter().all(|(c, b)| matches!(c, GFormula::Const(_)) && b.is_const())
            }
            GTerm::Count(cs) => cs.iter().all(|c| matches!(c, GFormula::Const(_))),
            _ => false,
        };
        if !children_const {
            return t;
        }
        match Evaluator::constant(self.problem).term(&t) {
            Known::Value(v) => GTerm::Value(v),
            Known::Err => GTerm::Err,
            Known::Unknown(..) => t,
        }
    }

    fn term(&mut self, t: &Term) -> Result<GTerm, SolveError> {
        self.tick()?;
        Ok(match t {
            Term::Var(v) => match self.env.iter().rev().find(|(n, _)| *n == v.name) {
                Some((_, val)) => GTerm::Value(val.clone()),
                None => return Err(SolveError::Eval(EvalError::UnboundVariable(v.name.clone()))),
            },
            Term::Value(v) => GTerm::Value(v.clone()),
            Term::App(sym, args) => {
                let idx = self.table(sym)?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match const_args(&args) {
                    ConstArgs::Err => GTerm::Err,
                    ConstArgs::Null => GTerm::Value(Value::Null),
                    ConstArgs::Values(vals) => match self.problem.tables[idx].slots.get(&vals) {
                        Some(Slot::Cell(c)) => GTerm::Cell(*c),
                        Some(Slot::Value(v)) => GTerm::Value(v.clone()),
                        Some(Slot::Truth(_)) => return Err(SolveError::Eval(EvalError::Uninterpreted(sym.clone()))),
                        None => GTerm::Value(Value::Null),
                    },
                    ConstArgs::Open => GTerm::Lookup(idx, args),
                }
            }
            Term::Arith(op, l, r) => {
                let l = self.term(l)?;
                let r = self.term(r)?;
                self.fold_term(GTerm::Arith(*op, Box::new(l), Box::new(r)))
            }
            Term::Sum(agg) | Term::Min(agg) | Term::Max(agg) => {
                let mut branches = Vec::new();
                let mut per_tuple = Vec::new();
                self.each_tuple(
                    &agg.vars,
                    &mut |g: &mut Self| {
                        let mut out = Vec::new();
                        for (cond, body) in &agg.branches {
                            let c = g.formula(cond)?;
                            if c == GFormula::Const(Outcome::FALSE) {
                                continue;
                            }
                            out.push((c, g.term(body)?));
                        }
                        Ok(out)
                    },
                    &mut per_tuple,
                )?;
                branches.extend(per_tuple.into_iter().flatten());
                let node = match t {
                    Term::Sum(_) => GTerm::Sum(branches),
                    Term::Min(_) => GTerm::Min(branches),
                    _ => GTerm::Max(branches),
                };
                self.fold_term(node)
            }
            Term::Count(vars, cond) => {
                let mut conds = Vec::new();
                self.each_tuple(vars, &mut |g: &mut Self| g.formula(cond), &mut conds)?;
                conds.retain(|c| *c != GFormula::Const(Outcome::FALSE));
                self.fold_term(GTerm::Count(conds))
            }
        })
    }

    fn table(&self, sym: &str) -> Result<usize, SolveError> {
        self.problem
            .table_index
            .get(sym)
            .copied()
            .ok_or_else(|| SolveError::Eval(EvalError::Uninterpreted(sym.to_string())))
    }

    fn formula(&mut self, f: &Formula) -> Result<GFormula, SolveError> {
        self.tick()?;
        Ok(match f {
            Formula::True => GFormula::Const(Outcome::TRUE),
            Formula::False => GFormula::Const(Outcome::FALSE),
            Formula::Prop(p) => {
                let idx = self.table(p)?;
                match self.problem.tables[idx].slots.get(&Vec::new()) {
                    Some(Slot::Cell(c)) => GFormula::Atom(*c),
                    Some(Slot::Truth(b)) => GFormula::Const(Outcome::of(*b)),
                    _ => return Err(SolveError::Eval(EvalError::Uninterpreted(p.clone()))),
                }
            }
            Formula::Pred(sym, args) => {
                let idx = self.table(sym)?;
                let args = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match const_args(&args) {
                    ConstArgs::Err => GFormula::Const(Outcome::ERR),
                    ConstArgs::Null => GFormula::Const(Outcome::FALSE),
                    ConstArgs::Values(vals) => match self.problem.tables[idx].slots.get(&vals) {
                        Some(Slot::Cell(c)) => GFormula::Atom(*c),
                        Some(Slot::Truth(b)) => GFormula::Const(Outcome::of(*b)),
                        Some(Slot::Value(_)) => return Err(SolveError::Eval(EvalError::Uninterpreted(sym.clone()))),
                        None => GFormula::Const(Outcome::FALSE),
                    },
                    ConstArgs::Open => GFormula::Lookup(idx, args),
                }
            }
            Formula::Cmp(op, l, r) => {
                let l = self.term(l)?;
                let r = self.term(r)?;
                let node = GFormula::Cmp(*op, l, r);
                match &node {
                    GFormula::Cmp(_, l, r) if l.is_const() && r.is_const() => {
                        GFormula::Const(Evaluator::constant(self.problem).formula(&node))
                    }
                    _ => node,
                }
            }
            Formula::Not(g) => negate(self.formula(g)?),
            Formula::And(gs) => {
                let parts = gs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?;
                conjoin(parts)
            }
            Formula::Or(gs) => {
                let parts = gs.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?;
                disjoin(parts)
            }
            Formula::Implies(a, b) => {
                let a = self.formula(a)?;
                let b = self.formula(b)?;
                disjoin(vec![negate(a), b])
            }
            Formula::Forall(vars, body) => {
                let mut parts = Vec::new();
                self.each_tuple(vars, &mut |g: &mut Self| g.formula(body), &mut parts)?;
                conjoin(parts)
            }
            Formula::Exists(vars, body) => {
                let mut parts = Vec::new();
                self.each_tuple(vars, &mut |g: &mut Self| g.formula(body), &mut parts)?;
                disjoin(parts)
            }
        })
    }
}

enum ConstArgs {
    Err,
    Null,
    Values(Vec<Value>),
    Open,
}

/// Evaluates arguments left to right the way application does: the first
/// error or null decides, provided everything before it is known.
fn const_args(args: &[GTerm]) -> ConstArgs {
    let mut vals = Vec::with_capacity(args.len());
    for a in args {
        match a {
            GTerm::Err => return ConstArgs::Err,
            GTerm::Value(Value::Null) => return ConstArgs::Null,
            GTerm::Value(v) => vals.push(v.clone()),
            _ => return ConstArgs::Open,
        }
    }
    ConstArgs::Values(vals)
}

fn negate(f: GFormula) -> GFormula {
    match f {
        GFormula::Const(o) => GFormula::Const(o.negate()),
        GFormula::Not(inner) => *inner,
        other => GFormula::Not(Box::new(other)),
    }
}

/// Flattens nested conjunctions, drops true parts and cuts after the first
/// part that is certainly false or erroneous.
fn conjoin(parts: Vec<GFormula>) -> GFormula {
    let mut out = Vec::new();
    for p in parts {
        let nested = match p {
            GFormula::And(inner) => inner,
            other => vec![other],
        };
        for q in nested {
            match q {
                GFormula::Const(Outcome::TRUE) => {}
                c @ GFormula::Const(_) => {
                    out.push(c);
                    return collapse(out, GFormula::And);
                }
                other => out.push(other),
            }
        }
    }
    if out.is_empty() {
        return GFormula::Const(Outcome::TRUE);
    }
    collapse(out, GFormula::And)
}

fn disjoin(parts: Vec<GFormula>) -> GFormula {
    let mut out = Vec::new();
    for p in parts {
        let nested = match p {
            GFormula::Or(inner) => inner,
            other => vec![other],
        };
        for q in nested {
            match q {
                GFormula::Const(Outcome::FALSE) => {}
                c @ GFormula::Const(_) => {
                    out.push(c);
                    return collapse(out, GFormula::Or);
                }
                other => out.push(other),
            }
        }
    }
    if out.is_empty() {
        return GFormula::Const(Outcome::FALSE);
    }
    collapse(out, GFormula::Or)
}

fn collapse(mut out: Vec<GFormula>, wrap: fn(Vec<GFormula>) -> GFormula) -> GFormula {
    if out.len() == 1 {
        return out.pop().unwrap();
    }
    if let Some(GFormula::Const(o)) = out.first() {
        return GFormula::Const(*o);
    }
    wrap(out)
}
