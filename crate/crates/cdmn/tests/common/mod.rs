//! Shared helpers for the integration tests: a random model generator and
//! a substitution-based reference evaluator.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cdmn::engine::{self, oracle_enumerate, SolveConfig, SolveResult};
use cdmn::fo::{Aggregate, ArithOp, CmpOp, Formula, Sentence, Structure, Term, Theory, Value, Var};
use cdmn::{compile_str, CompiledModel, ModelCount, Task};
use rand::seq::SliceRandom;
use rand::Rng;

pub const F: &str = "f_of_A";
pub const G: &str = "g_of_A";
pub const H: &str = "h_of_A_and_A";
pub const C: &str = "c";
pub const P: &str = "A_is_p";
pub const Q: &str = "q";

/// Vocabulary shared by the random models: a type `A` of up to three
/// elements, an integer type `N = 0..top`, and one symbol of each kind.
pub fn random_vocabulary_text(size: usize, top: i64) -> String {
    let elems: Vec<String> = (1..=size).map(|i| format!("a{i}")).collect();
    format!(
        "Glossary Type\nName,Type,Values\nA,String,\"{}\"\nN,Int,[0..{top}]\n\n\
         Glossary Function\nName,Type\nf of A,A\ng of A,N\nh of A and A,N\n\n\
         Glossary Constant\nName,Type\nc,N\n\n\
         Glossary Relation\nName\nA is p\n\n\
         Glossary Boolean\nName\nq\n",
        elems.join(", ")
    )
}

pub struct Gen<'r, R: Rng> {
    pub rng: &'r mut R,
    pub elems: Vec<Value>,
    pub top: i64,
    scope: Vec<Var>,
    fresh: usize,
}

impl<'r, R: Rng> Gen<'r, R> {
    pub fn new(rng: &'r mut R, elems: Vec<Value>, top: i64) -> Self {
        Gen { rng, elems, top, scope: Vec::new(), fresh: 0 }
    }

    fn bind(&mut self) -> Var {
        self.fresh += 1;
        let v = Var::new(format!("x{}", self.fresh), "A");
        self.scope.push(v.clone());
        v
    }

    fn elem_term(&mut self, depth: u32) -> Term {
        let k = self.rng.gen_range(0..if depth == 0 { 2 } else { 4 });
        match k {
            0 if !self.scope.is_empty() => Term::var(self.scope.choose(self.rng).unwrap()),
            0 | 1 => Term::Value(self.elems.choose(self.rng).unwrap().clone()),
            2 => Term::app(F, vec![self.elem_term(depth - 1)]),
            _ => {
                if self.rng.gen_bool(0.2) {
                    Term::null()
                } else {
                    Term::Value(self.elems.choose(self.rng).unwrap().clone())
                }
            }
        }
    }

    fn int_term(&mut self, depth: u32) -> Term {
        let k = self.rng.gen_range(0..if depth == 0 { 3 } else { 9 });
        match k {
            0 => Term::int(self.rng.gen_range(-1..=self.top + 1)),
            1 => Term::constant(C),
            2 => {
                let a = if self.scope.is_empty() {
                    Term::Value(self.elems[0].clone())
                } else {
                    Term::var(self.scope.choose(self.rng).unwrap())
                };
                Term::app(G, vec![a])
            }
            3 => Term::app(G, vec![self.elem_term(depth - 1)]),
            4 => Term::app(H, vec![self.elem_term(depth - 1), self.elem_term(depth - 1)]),
            5 => {
                let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div].choose(self.rng).unwrap();
                Term::arith(op, self.int_term(depth - 1), self.int_term(depth - 1))
            }
            6 => {
                let v = self.bind();
                let cond = self.formula(depth - 1);
                let t = Term::count(vec![v], cond);
                self.scope.pop();
                t
            }
            _ => {
                let v = self.bind();
                let branches = (0..self.rng.gen_range(1..=2))
                    .map(|_| (self.formula(depth - 1), self.int_term(depth - 1)))
                    .collect();
                self.scope.pop();
                let agg = Aggregate { vars: vec![v], branches };
                match self.rng.gen_range(0..3) {
                    0 => Term::Sum(agg),
                    1 => Term::Min(agg),
                    _ => Term::Max(agg),
                }
            }
        }
    }

    pub fn formula(&mut self, depth: u32) -> Formula {
        let k = self.rng.gen_range(0..if depth == 0 { 4 } else { 11 });
        match k {
            0 => Formula::Prop(Q.into()),
            1 => Formula::Pred(P.into(), vec![self.elem_term(depth.saturating_sub(1))]),
            2 => {
                let op = *[CmpOp::Eq, CmpOp::Neq].choose(self.rng).unwrap();
                let (a, b) = (self.elem_term(depth.saturating_sub(1)), self.elem_term(depth.saturating_sub(1)));
                Formula::Cmp(op, a, b)
            }
            3 => {
                let op = *[CmpOp::Eq, CmpOp::Neq, CmpOp::Lt, CmpOp::Leq, CmpOp::Gt, CmpOp::Geq]
                    .choose(self.rng)
                    .unwrap();
                let (a, b) = (self.int_term(depth.saturating_sub(1)), self.int_term(depth.saturating_sub(1)));
                Formula::Cmp(op, a, b)
            }
            4 => Formula::Not(Box::new(self.formula(depth - 1))),
            5 | 6 => {
                let parts = (0..self.rng.gen_range(2..=3)).map(|_| self.formula(depth - 1)).collect();
                if k == 5 {
                    Formula::And(parts)
                } else {
                    Formula::Or(parts)
                }
            }
            7 => Formula::Implies(Box::new(self.formula(depth - 1)), Box::new(self.formula(depth - 1))),
            8 => Formula::True,
            _ => {
                let v = self.bind();
                let body = self.formula(depth - 1);
                self.scope.pop();
                if k == 9 {
                    Formula::Forall(vec![v], Box::new(body))
                } else {
                    Formula::Exists(vec![v], Box::new(body))
                }
            }
        }
    }

    pub fn int_value(&mut self) -> Value {
        Value::Int(self.rng.gen_range(0..=self.top))
    }
}

fn candidates(model: &CompiledModel) -> u128 {
    let mut total: u128 = 1;
    for (name, sig) in &model.vocabulary.symbols {
        if model.data.interps.contains_key(name) {
            continue;
        }
        let per = if sig.is_predicate() {
            2
        } else {
            let ty = sig.result_type.as_deref().unwrap();
            model.data.domain(ty).unwrap().len() as u128 + u128::from(model.nullable.contains(name))
        };
        let tuples: u128 = sig.arg_types.iter().map(|t| model.data.domain(t).unwrap().len() as u128).product();
        total = total.saturating_mul(per.saturating_pow(tuples as u32));
    }
    total
}

/// A random model: random domains of at most three elements, a random
/// subset of symbols fixed as data, some functions allowed to be null, and
/// one to three random sentences. Keeps the oracle's search space at most
/// `max_candidates`.
pub fn random_model<R: Rng>(rng: &mut R, max_candidates: u128) -> CompiledModel {
    loop {
        let size = rng.gen_range(1..=3);
        let top = rng.gen_range(0..=2);
        let mut model = compile_str(&random_vocabulary_text(size, top)).expect("vocabulary compiles");
        let elems = model.data.domain("A").unwrap().to_vec();
        let mut g = Gen::new(rng, elems.clone(), top);
        let tuples1: Vec<Vec<Value>> = elems.iter().map(|e| vec![e.clone()]).collect();
        let tuples2: Vec<Vec<Value>> =
            elems.iter().flat_map(|a| elems.iter().map(move |b| vec![a.clone(), b.clone()])).collect();
        for name in [F, G, H, C, P, Q] {
            if g.rng.gen_bool(0.5) {
                continue;
            }
            match name {
                F => {
                    for t in &tuples1 {
                        let v = g.elems.choose(g.rng).unwrap().clone();
                        model.data.set_function(F, t.clone(), v);
                    }
                }
                G => {
                    for t in &tuples1 {
                        let v = g.int_value();
                        model.data.set_function(G, t.clone(), v);
                    }
                }
                H => {
                    for t in &tuples2 {
                        let v = g.int_value();
                        model.data.set_function(H, t.clone(), v);
                    }
                }
                C => {
                    let v = g.int_value();
                    model.data.set_function(C, Vec::new(), v);
                }
                P => {
                    model.data.set_relation(P, vec![elems[0].clone()], false);
                    for t in &tuples1 {
                        let b = g.rng.gen_bool(0.5);
                        model.data.set_relation(P, t.clone(), b);
                    }
                }
                _ => {
                    let b = g.rng.gen_bool(0.5);
                    model.data.set_proposition(Q, b);
                }
            }
        }
        for name in [F, G, H, C] {
            if !model.data.interps.contains_key(name) && g.rng.gen_bool(0.3) {
                model.nullable.insert(name.to_string());
            }
        }
        let n = g.rng.gen_range(1..=3);
        let sentences = (0..n)
            .map(|i| {
                let depth = g.rng.gen_range(1..=4);
                Sentence { formula: g.formula(depth), table: format!("random {i}"), rows: (0, 0) }
            })
            .collect();
        model.theory = Theory { sentences };
        model.task = Task::ModelExpand(ModelCount::All);
        if candidates(&model) <= max_candidates {
            return model;
        }
    }
}

/// All models found by the solver, as a set.
pub fn solver_models(model: &CompiledModel) -> BTreeSet<Structure> {
    let mut m = model.clone();
    m.task = Task::ModelExpand(ModelCount::All);
    match engine::solve(&m, &SolveConfig::default()).expect("solver succeeds").result {
        SolveResult::Models { models, exhausted } => {
            assert!(exhausted);
            models.into_iter().collect()
        }
        SolveResult::Unsat => BTreeSet::new(),
        SolveResult::Optimum { .. } => unreachable!(),
    }
}

pub fn oracle_models(model: &CompiledModel) -> BTreeSet<Structure> {
    oracle_enumerate(model).expect("oracle within its cap").into_iter().collect()
}

/// Replaces free occurrences of `var` by `value`.
pub fn subst_term(t: &Term, var: &str, value: &Value) -> Term {
    match t {
        Term::Var(v) if v.name == var => Term::Value(value.clone()),
        Term::Var(_) | Term::Value(_) => t.clone(),
        Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| subst_term(a, var, value)).collect()),
        Term::Arith(op, l, r) => Term::arith(*op, subst_term(l, var, value), subst_term(r, var, value)),
        Term::Sum(a) => Term::Sum(subst_agg(a, var, value)),
        Term::Min(a) => Term::Min(subst_agg(a, var, value)),
        Term::Max(a) => Term::Max(subst_agg(a, var, value)),
        Term::Count(vars, cond) => {
            if vars.iter().any(|v| v.name == var) {
                t.clone()
            } else {
                Term::Count(vars.clone(), Box::new(subst(cond, var, value)))
            }
        }
    }
}

fn subst_agg(a: &Aggregate, var: &str, value: &Value) -> Aggregate {
    if a.vars.iter().any(|v| v.name == var) {
        return a.clone();
    }
    Aggregate {
        vars: a.vars.clone(),
        branches: a.branches.iter().map(|(c, b)| (subst(c, var, value), subst_term(b, var, value))).collect(),
    }
}

pub fn subst(f: &Formula, var: &str, value: &Value) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Pred(s, args) => Formula::Pred(s.clone(), args.iter().map(|a| subst_term(a, var, value)).collect()),
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, subst_term(l, var, value), subst_term(r, var, value)),
        Formula::Not(g) => Formula::Not(Box::new(subst(g, var, value))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| subst(g, var, value)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| subst(g, var, value)).collect()),
        Formula::Implies(a, b) => Formula::Implies(Box::new(subst(a, var, value)), Box::new(subst(b, var, value))),
        Formula::Forall(vars, body) | Formula::Exists(vars, body) => {
            if vars.iter().any(|v| v.name == var) {
                return f.clone();
            }
            let body = Box::new(subst(body, var, value));
            match f {
                Formula::Forall(..) => Formula::Forall(vars.clone(), body),
                _ => Formula::Exists(vars.clone(), body),
            }
        }
    }
}

/// Every binding of `vars` over the domains, first variable slowest.
fn instances(vars: &[Var], s: &Structure) -> Vec<Vec<(String, Value)>> {
    let mut out = vec![Vec::new()];
    for v in vars {
        let d = s.domain(&v.ty).unwrap();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                d.iter().map(move |x| {
                    let mut p = prefix.clone();
                    p.push((v.name.clone(), x.clone()));
                    p
                })
            })
            .collect();
    }
    out
}

fn apply(f: &Formula, binding: &[(String, Value)]) -> Formula {
    binding.iter().fold(f.clone(), |acc, (n, v)| subst(&acc, n, v))
}

fn apply_term(t: &Term, binding: &[(String, Value)]) -> Term {
    binding.iter().fold(t.clone(), |acc, (n, v)| subst_term(&acc, n, v))
}

/// Expands quantifiers into finite conjunctions and disjunctions and
/// aggregates into variable-free ones, instance by instance.
pub fn expand(f: &Formula, s: &Structure) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Pred(sym, args) => Formula::Pred(sym.clone(), args.iter().map(|a| expand_term(a, s)).collect()),
        Formula::Cmp(op, l, r) => Formula::Cmp(*op, expand_term(l, s), expand_term(r, s)),
        Formula::Not(g) => Formula::Not(Box::new(expand(g, s))),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| expand(g, s)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| expand(g, s)).collect()),
        Formula::Implies(a, b) => Formula::Implies(Box::new(expand(a, s)), Box::new(expand(b, s))),
        Formula::Forall(vars, body) => {
            Formula::And(instances(vars, s).iter().map(|b| expand(&apply(body, b), s)).collect())
        }
        Formula::Exists(vars, body) => {
            Formula::Or(instances(vars, s).iter().map(|b| expand(&apply(body, b), s)).collect())
        }
    }
}

fn expand_agg(a: &Aggregate, s: &Structure) -> Aggregate {
    let mut branches = Vec::new();
    for b in instances(&a.vars, s) {
        for (cond, body) in &a.branches {
            branches.push((expand(&apply(cond, &b), s), expand_term(&apply_term(body, &b), s)));
        }
    }
    Aggregate { vars: Vec::new(), branches }
}

pub fn expand_term(t: &Term, s: &Structure) -> Term {
    match t {
        Term::Var(_) | Term::Value(_) => t.clone(),
        Term::App(sym, args) => Term::App(sym.clone(), args.iter().map(|a| expand_term(a, s)).collect()),
        Term::Arith(op, l, r) => Term::arith(*op, expand_term(l, s), expand_term(r, s)),
        Term::Sum(a) => Term::Sum(expand_agg(a, s)),
        Term::Min(a) => Term::Min(expand_agg(a, s)),
        Term::Max(a) => Term::Max(expand_agg(a, s)),
        Term::Count(vars, cond) => Term::Sum(Aggregate {
            vars: Vec::new(),
            branches: instances(vars, s).iter().map(|b| (expand(&apply(cond, b), s), Term::int(1))).collect(),
        }),
    }
}

/// A random total structure extending the model's data, with nulls
/// allowed for the nullable functions.
pub fn random_structure<R: Rng>(rng: &mut R, model: &CompiledModel) -> Structure {
    let mut s = model.data.clone();
    let elems = s.domain("A").unwrap().to_vec();
    let ints = s.domain("N").unwrap().to_vec();
    let open = |name: &str| !model.data.interps.contains_key(name);
    let pick = |rng: &mut R, d: &[Value], name: &str| {
        if model.nullable.contains(name) && rng.gen_bool(0.25) {
            Value::Null
        } else {
            d.choose(rng).unwrap().clone()
        }
    };
    if open(P) {
        s.set_relation(P, vec![elems[0].clone()], false);
    }
    for a in &elems {
        if open(F) {
            let v = pick(rng, &elems, F);
            s.set_function(F, vec![a.clone()], v);
        }
        if open(G) {
            let v = pick(rng, &ints, G);
            s.set_function(G, vec![a.clone()], v);
        }
        if open(H) {
            for b in &elems {
                let v = pick(rng, &ints, H);
                s.set_function(H, vec![a.clone(), b.clone()], v);
            }
        }
        if open(P) {
            s.set_relation(P, vec![a.clone()], rng.gen_bool(0.5));
        }
    }
    if open(C) {
        let v = pick(rng, &ints, C);
        s.set_function(C, Vec::new(), v);
    }
    if open(Q) {
        s.set_proposition(Q, rng.gen_bool(0.5));
    }
    s
}
