//! Two-valued evaluation of terms and formulas in a total structure.
//!
//! Null rules: arithmetic and function application on a null argument
//! yield null; a predicate applied to null is false; `=` treats null as an
//! ordinary element (so `null = null` holds and `≠` is its negation); the
//! order comparisons `<, ≤, >, ≥` are false whenever a side is null.
//! Applying a function outside its argument domain yields null.

use std::cmp::Ordering;

use thiserror::Error;

use super::{Aggregate, ArithOp, CmpOp, Formula, Interp, Structure, Term, Value, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} / {1} is not an exact integer division")]
    NonExactDivision(i64, i64),
    #[error("integer overflow")]
    Overflow,
    #[error("minimum or maximum of an empty set")]
    MinMaxOfEmptySet,
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("symbol `{0}` has no interpretation")]
    Uninterpreted(String),
    #[error("type `{0}` has no domain")]
    UnknownType(String),
    #[error("`{0}` is not a number")]
    NotANumber(String),
}

/// Variable bindings, innermost last.
#[derive(Clone, Debug, Default)]
pub struct Env {
    bindings: Vec<(String, Value)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn with(mut self, var: &Var, value: Value) -> Self {
        self.push(var, value);
        self
    }

    pub fn push(&mut self, var: &Var, value: Value) {
        self.bindings.push((var.name.clone(), value));
    }

    pub fn pop(&mut self) {
        self.bindings.pop();
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

pub fn eval_term(term: &Term, s: &Structure, env: &mut Env) -> Result<Value, EvalError> {
    match term {
        Term::Var(v) => env.get(&v.name).cloned().ok_or_else(|| EvalError::UnboundVariable(v.name.clone())),
        Term::Value(v) => Ok(v.clone()),
        Term::App(sym, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                let v = eval_term(a, s, env)?;
                if v.is_null() {
                    return Ok(Value::Null);
                }
                vals.push(v);
            }
            match s.interps.get(sym) {
                Some(Interp::Function(graph)) => Ok(graph.get(&vals).cloned().unwrap_or(Value::Null)),
                _ => Err(EvalError::Uninterpreted(sym.clone())),
            }
        }
        Term::Arith(op, l, r) => {
            let a = eval_term(l, s, env)?;
            let b = eval_term(r, s, env)?;
            arith(*op, &a, &b)
        }
        Term::Sum(agg) => sum_values(collect_aggregate(agg, s, env)?),
        Term::Min(agg) => extremum(collect_aggregate(agg, s, env)?, Ordering::Less),
        Term::Max(agg) => extremum(collect_aggregate(agg, s, env)?, Ordering::Greater),
        Term::Count(vars, cond) => {
            let mut n = 0i64;
            for_each_tuple(vars, s, env, &mut |env| {
                if eval_formula(cond, s, env)? {
                    n += 1;
                }
                Ok(true)
            })?;
            Ok(Value::Int(n))
        }
    }
}

pub fn eval_formula(formula: &Formula, s: &Structure, env: &mut Env) -> Result<bool, EvalError> {
    match formula {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Prop(p) => match s.interps.get(p) {
            Some(Interp::Proposition(b)) => Ok(*b),
            _ => Err(EvalError::Uninterpreted(p.clone())),
        },
        Formula::Pred(sym, args) => {
            let mut vals = Vec::with_capacity(args.len());
            for a in args {
                let v = eval_term(a, s, env)?;
                if v.is_null() {
                    return Ok(false);
                }
                vals.push(v);
            }
            match s.interps.get(sym) {
                Some(Interp::Relation(set)) => Ok(set.contains(&vals)),
                _ => Err(EvalError::Uninterpreted(sym.clone())),
            }
        }
        Formula::Cmp(op, l, r) => {
            let a = eval_term(l, s, env)?;
            let b = eval_term(r, s, env)?;
            compare(*op, &a, &b)
        }
        Formula::Not(f) => Ok(!eval_formula(f, s, env)?),
        Formula::And(fs) => {
            for f in fs {
                if !eval_formula(f, s, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for f in fs {
                if eval_formula(f, s, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => Ok(!eval_formula(a, s, env)? || eval_formula(b, s, env)?),
        Formula::Forall(vars, body) => {
            let mut all = true;
            for_each_tuple(vars, s, env, &mut |env| {
                all = eval_formula(body, s, env)?;
                Ok(all)
            })?;
            Ok(all)
        }
        Formula::Exists(vars, body) => {
            let mut any = false;
            for_each_tuple(vars, s, env, &mut |env| {
                any = eval_formula(body, s, env)?;
                Ok(!any)
            })?;
            Ok(any)
        }
    }
}

/// Integer arithmetic with null propagation and exact division.
pub fn arith(op: ArithOp, a: &Value, b: &Value) -> Result<Value, EvalError> {
    if a.is_null() || b.is_null() {
        return Ok(Value::Null);
    }
    let x = a.as_int().ok_or_else(|| EvalError::NotANumber(a.to_string()))?;
    let y = b.as_int().ok_or_else(|| EvalError::NotANumber(b.to_string()))?;
    let r = match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => {
            if y == 0 {
                return Err(EvalError::DivisionByZero);
            }
            if x % y != 0 {
                return Err(EvalError::NonExactDivision(x, y));
            }
            x.checked_div(y)
        }
    };
    r.map(Value::Int).ok_or(EvalError::Overflow)
}

pub fn compare(op: CmpOp, a: &Value, b: &Value) -> Result<bool, EvalError> {
    match op {
        CmpOp::Eq => Ok(a == b),
        CmpOp::Neq => Ok(a != b),
        _ => {
            if a.is_null() || b.is_null() {
                return Ok(false);
            }
            let x = a.as_int().ok_or_else(|| EvalError::NotANumber(a.to_string()))?;
            let y = b.as_int().ok_or_else(|| EvalError::NotANumber(b.to_string()))?;
            Ok(match op {
                CmpOp::Lt => x < y,
                CmpOp::Leq => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Geq => x >= y,
                CmpOp::Eq | CmpOp::Neq => unreachable!(),
            })
        }
    }
}

/// Sum of a collected multiset; null if any element is null.
pub fn sum_values(vals: Vec<Value>) -> Result<Value, EvalError> {
    let mut total: i64 = 0;
    for v in vals {
        match v {
            Value::Null => return Ok(Value::Null),
            Value::Int(n) => total = total.checked_add(n).ok_or(EvalError::Overflow)?,
            other => return Err(EvalError::NotANumber(other.to_string())),
        }
    }
    Ok(Value::Int(total))
}

/// Minimum (`Ordering::Less`) or maximum (`Ordering::Greater`) of a collected multiset.
pub fn extremum(vals: Vec<Value>, want: Ordering) -> Result<Value, EvalError> {
    let mut best: Option<i64> = None;
    for v in vals {
        match v {
            Value::Null => return Ok(Value::Null),
            Value::Int(n) => {
                best = Some(match best {
                    Some(b) if n.cmp(&b) != want => b,
                    _ => n,
                })
            }
            other => return Err(EvalError::NotANumber(other.to_string())),
        }
    }
    best.map(Value::Int).ok_or(EvalError::MinMaxOfEmptySet)
}

fn collect_aggregate(agg: &Aggregate, s: &Structure, env: &mut Env) -> Result<Vec<Value>, EvalError> {
    let mut out = Vec::new();
    for_each_tuple(&agg.vars, s, env, &mut |env| {
        for (cond, body) in &agg.branches {
            if eval_formula(cond, s, env)? {
                out.push(eval_term(body, s, env)?);
            }
        }
        Ok(true)
    })?;
    Ok(out)
}

/// Calls `f` once per tuple of the variables' domains with the tuple bound
/// in `env`. Stops early when `f` returns `false`.
fn for_each_tuple(
    vars: &[Var],
    s: &Structure,
    env: &mut Env,
    f: &mut dyn FnMut(&mut Env) -> Result<bool, EvalError>,
) -> Result<bool, EvalError> {
    let Some((first, rest)) = vars.split_first() else {
        return f(env);
    };
    let domain = s.domain(&first.ty).ok_or_else(|| EvalError::UnknownType(first.ty.clone()))?;
    for v in domain {
        env.push(first, v.clone());
        let go_on = for_each_tuple(rest, s, env, f);
        env.pop();
        if !go_on? {
            return Ok(false);
        }
    }
    Ok(true)
}
