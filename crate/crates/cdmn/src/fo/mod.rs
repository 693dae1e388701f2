//! Typed first-order logic with aggregates over finite domains.
//!
//! Terms and formulas are plain immutable trees. A [`Structure`] assigns
//! finite domains to types and interpretations to symbols; evaluation lives
//! in [`eval`], printing in [`display`] and alpha-normalisation in [`alpha`].

pub mod alpha;
pub mod display;
pub mod eval;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use alpha::{alpha_eq, canonical};
pub use eval::{eval_formula, eval_term, Env, EvalError};

/// A domain value. `Null` is the reserved element decision-table outputs
/// take when no row applies.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Null,
    Int(i64),
    Elem(String),
}

impl Value {
    pub fn elem(name: impl Into<String>) -> Self {
        Value::Elem(name.into())
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("null"),
            Value::Int(n) => write!(f, "{n}"),
            Value::Elem(e) => f.write_str(e),
        }
    }
}

/// A typed logical variable, written `name[Type]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: String,
    pub ty: String,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: impl Into<String>) -> Self {
        Var { name: name.into(), ty: ty.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
}

impl CmpOp {
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Neq,
            CmpOp::Neq => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Geq,
            CmpOp::Leq => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Leq,
            CmpOp::Geq => CmpOp::Lt,
        }
    }
}

/// Bound variables plus one or more `(condition, term)` branches.
///
/// The aggregated multiset holds `term` for every tuple of the bound
/// variables and every branch whose condition holds at that tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Aggregate {
    pub vars: Vec<Var>,
    pub branches: Vec<(Formula, Term)>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Value(Value),
    App(String, Vec<Term>),
    Arith(ArithOp, Box<Term>, Box<Term>),
    Sum(Aggregate),
    Min(Aggregate),
    Max(Aggregate),
    /// Number of tuples of the bound variables satisfying the condition.
    Count(Vec<Var>, Box<Formula>),
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn int(n: i64) -> Term {
        Term::Value(Value::Int(n))
    }

    pub fn elem(name: &str) -> Term {
        Term::Value(Value::elem(name))
    }

    pub fn null() -> Term {
        Term::Value(Value::Null)
    }

    pub fn app(symbol: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(symbol.into(), args)
    }

    pub fn constant(symbol: impl Into<String>) -> Term {
        Term::App(symbol.into(), Vec::new())
    }

    pub fn arith(op: ArithOp, l: Term, r: Term) -> Term {
        Term::Arith(op, Box::new(l), Box::new(r))
    }

    pub fn sum(vars: Vec<Var>, cond: Formula, body: Term) -> Term {
        Term::Sum(Aggregate { vars, branches: vec![(cond, body)] })
    }

    pub fn count(vars: Vec<Var>, cond: Formula) -> Term {
        Term::Count(vars, Box::new(cond))
    }

    pub fn has_aggregate(&self) -> bool {
        match self {
            Term::Var(_) | Term::Value(_) => false,
            Term::App(_, args) => args.iter().any(Term::has_aggregate),
            Term::Arith(_, l, r) => l.has_aggregate() || r.has_aggregate(),
            Term::Sum(_) | Term::Min(_) | Term::Max(_) | Term::Count(..) => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Pred(String, Vec<Term>),
    Prop(String),
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<Var>, Box<Formula>),
    Exists(Vec<Var>, Box<Formula>),
}

impl Formula {
    pub fn cmp(op: CmpOp, l: Term, r: Term) -> Formula {
        Formula::Cmp(op, l, r)
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Cmp(CmpOp::Eq, l, r)
    }

    /// Conjunction that drops `True`, absorbs `False`, flattens nested
    /// conjunctions and collapses singletons.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn implies(ante: Formula, cons: Formula) -> Formula {
        match (ante, cons) {
            (Formula::True, c) => c,
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (a, c) => Formula::Implies(Box::new(a), Box::new(c)),
        }
    }

    pub fn forall(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() || matches!(body, Formula::True | Formula::False) {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<Var>, body: Formula) -> Formula {
        if vars.is_empty() || matches!(body, Formula::False) {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn has_aggregate(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => false,
            Formula::Pred(_, args) => args.iter().any(Term::has_aggregate),
            Formula::Cmp(_, l, r) => l.has_aggregate() || r.has_aggregate(),
            Formula::Not(f) => f.has_aggregate(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().any(Formula::has_aggregate),
            Formula::Implies(a, b) => a.has_aggregate() || b.has_aggregate(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.has_aggregate(),
        }
    }
}

/// Free variables of a term.
pub fn term_free_vars(term: &Term) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_term(term, &mut Vec::new(), &mut out);
    out
}

/// Free variables of a formula.
pub fn free_vars(formula: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect_formula(formula, &mut Vec::new(), &mut out);
    out
}

fn collect_term(term: &Term, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match term {
        Term::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        Term::Value(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_term(a, bound, out)),
        Term::Arith(_, l, r) => {
            collect_term(l, bound, out);
            collect_term(r, bound, out);
        }
        Term::Sum(agg) | Term::Min(agg) | Term::Max(agg) => {
            let mark = bound.len();
            bound.extend(agg.vars.iter().cloned());
            for (cond, body) in &agg.branches {
                collect_formula(cond, bound, out);
                collect_term(body, bound, out);
            }
            bound.truncate(mark);
        }
        Term::Count(vars, cond) => {
            let mark = bound.len();
            bound.extend(vars.iter().cloned());
            collect_formula(cond, bound, out);
            bound.truncate(mark);
        }
    }
}

fn collect_formula(formula: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match formula {
        Formula::True | Formula::False | Formula::Prop(_) => {}
        Formula::Pred(_, args) => args.iter().for_each(|a| collect_term(a, bound, out)),
        Formula::Cmp(_, l, r) => {
            collect_term(l, bound, out);
            collect_term(r, bound, out);
        }
        Formula::Not(f) => collect_formula(f, bound, out),
        Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| collect_formula(f, bound, out)),
        Formula::Implies(a, b) => {
            collect_formula(a, bound, out);
            collect_formula(b, bound, out);
        }
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            let mark = bound.len();
            bound.extend(vars.iter().cloned());
            collect_formula(body, bound, out);
            bound.truncate(mark);
        }
    }
}

/// Symbols (functions, constants, predicates, propositions) used by a formula.
pub fn symbols(f: &Formula) -> BTreeSet<String> {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(_) | Term::Value(_) => {}
            Term::App(s, args) => {
                out.insert(s.clone());
                args.iter().for_each(|a| term(a, out));
            }
            Term::Arith(_, l, r) => {
                term(l, out);
                term(r, out);
            }
            Term::Sum(a) | Term::Min(a) | Term::Max(a) => {
                for (c, b) in &a.branches {
                    formula(c, out);
                    term(b, out);
                }
            }
            Term::Count(_, c) => formula(c, out),
        }
    }
    fn formula(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Prop(p) => {
                out.insert(p.clone());
            }
            Formula::Pred(s, args) => {
                out.insert(s.clone());
                args.iter().for_each(|a| term(a, out));
            }
            Formula::Cmp(_, l, r) => {
                term(l, out);
                term(r, out);
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => formula(g, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|g| formula(g, out)),
            Formula::Implies(a, b) => {
                formula(a, out);
                formula(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    formula(f, &mut out);
    out
}

/// A closed sentence together with the table it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub formula: Formula,
    pub table: String,
    /// 1-based file rows covered by the source table body.
    pub rows: (usize, usize),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub sentences: Vec<Sentence>,
}

impl Theory {
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.sentences.iter().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Interpretation of one symbol.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Interp {
    /// Graph of a function; constants use the empty argument tuple.
    Function(BTreeMap<Vec<Value>, Value>),
    /// The set of true tuples of a relation.
    Relation(BTreeSet<Vec<Value>>),
    Proposition(bool),
}

/// Finite domains for every type plus (possibly partial) symbol interpretations.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Structure {
    pub domains: BTreeMap<String, Vec<Value>>,
    pub interps: BTreeMap<String, Interp>,
}

impl Structure {
    pub fn domain(&self, ty: &str) -> Option<&[Value]> {
        self.domains.get(ty).map(Vec::as_slice)
    }

    pub fn function_value(&self, symbol: &str, args: &[Value]) -> Option<&Value> {
        match self.interps.get(symbol)? {
            Interp::Function(graph) => graph.get(args),
            _ => None,
        }
    }

    pub fn set_function(&mut self, symbol: &str, args: Vec<Value>, value: Value) {
        let entry = self
            .interps
            .entry(symbol.to_string())
            .or_insert_with(|| Interp::Function(BTreeMap::new()));
        if let Interp::Function(graph) = entry {
            graph.insert(args, value);
        }
    }

    pub fn set_relation(&mut self, symbol: &str, args: Vec<Value>, holds: bool) {
        let entry = self
            .interps
            .entry(symbol.to_string())
            .or_insert_with(|| Interp::Relation(BTreeSet::new()));
        if let Interp::Relation(set) = entry {
            if holds {
                set.insert(args);
            } else {
                set.remove(&args);
            }
        }
    }

    pub fn set_proposition(&mut self, symbol: &str, holds: bool) {
        self.interps.insert(symbol.to_string(), Interp::Proposition(holds));
    }

    /// Restrict to the given symbols (domains kept).
    pub fn restrict<'a>(&self, symbols: impl IntoIterator<Item = &'a str>) -> Structure {
        let mut out = Structure { domains: self.domains.clone(), interps: BTreeMap::new() };
        for s in symbols {
            if let Some(i) = self.interps.get(s) {
                out.interps.insert(s.to_string(), i.clone());
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smart_constructors_simplify() {
        let p = Formula::Prop("P".into());
        assert_eq!(Formula::and([Formula::True, p.clone()]), p);
        assert_eq!(Formula::and(Vec::new()), Formula::True);
        assert_eq!(Formula::or([Formula::False, p.clone(), Formula::True]), Formula::True);
        assert_eq!(Formula::implies(Formula::True, p.clone()), p);
        assert_eq!(Formula::implies(Formula::False, p.clone()), Formula::True);
        assert_eq!(Formula::not(Formula::not(p.clone())), p);
    }

    #[test]
    fn free_vars_of_quantified_predicate() {
        let x = Var::new("x", "T");
        let y = Var::new("y", "T");
        let f = Formula::forall(
            vec![x.clone()],
            Formula::Pred("P".into(), vec![Term::var(&x), Term::var(&y)]),
        );
        assert_eq!(free_vars(&f), BTreeSet::from([y]));
    }

    #[test]
    fn aggregate_binds_its_variables() {
        let x = Var::new("x", "T");
        let y = Var::new("y", "U");
        let t = Term::sum(
            vec![y.clone()],
            Formula::Pred("Q".into(), vec![Term::var(&x), Term::var(&y)]),
            Term::app("f", vec![Term::var(&y)]),
        );
        assert_eq!(term_free_vars(&t), BTreeSet::from([x]));
    }
}
