//! Evaluation of ground constraints under a partial assignment.
//!
//! A formula evaluates to the set of outcomes (true, false, error) still
//! possible given the cells decided so far; a term evaluates to its value,
//! an error, or an interval covering its possible integer values. With every
//! cell decided the result is exact and agrees with [`crate::fo::eval`].

use std::cmp::Ordering;
use std::fmt;

use crate::fo::eval::{arith, compare, extremum, sum_values};
use crate::fo::{ArithOp, CmpOp, Value};

use super::ground::{GFormula, GTerm, GroundProblem, Slot};

/// A set of possible truth outcomes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Outcome(u8);

impl Outcome {
    pub const TRUE: Outcome = Outcome(1);
    pub const FALSE: Outcome = Outcome(2);
    pub const ERR: Outcome = Outcome(4);
    const NONE: Outcome = Outcome(0);
    const ANY: Outcome = Outcome(7);

    pub fn of(b: bool) -> Outcome {
        if b {
            Outcome::TRUE
        } else {
            Outcome::FALSE
        }
    }

    pub fn can_be_true(self) -> bool {
        self.0 & 1 != 0
    }

    pub fn can_be_false(self) -> bool {
        self.0 & 2 != 0
    }

    pub fn negate(self) -> Outcome {
        Outcome((self.0 & 4) | ((self.0 & 1) << 1) | ((self.0 & 2) >> 1))
    }

    fn union(self, other: Outcome) -> Outcome {
        Outcome(self.0 | other.0)
    }

    fn without_true(self) -> Outcome {
        Outcome(self.0 & 6)
    }

    fn without_false(self) -> Outcome {
        Outcome(self.0 & 5)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Outcome::TRUE => f.write_str("true"),
            Outcome::FALSE => f.write_str("false"),
            Outcome::ERR => f.write_str("error"),
            Outcome(bits) => write!(f, "outcome({bits:03b})"),
        }
    }
}

/// Abstract value of a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Known {
    Value(Value),
    Err,
    /// Not determined yet; any integer it can take lies in `[lo, hi]`
    /// (`lo > hi` when it cannot be an integer).
    Unknown(i64, i64),
}

const FULL: Known = Known::Unknown(i64::MIN, i64::MAX);

impl Known {
    fn range(&self) -> (i64, i64) {
        match self {
            Known::Value(Value::Int(n)) => (*n, *n),
            Known::Value(_) | Known::Err => (i64::MAX, i64::MIN),
            Known::Unknown(lo, hi) => (*lo, *hi),
        }
    }
}

/// Decided values of cells.
pub trait View {
    /// Index of the cell's value, when only one remains.
    fn decided(&self, cell: usize) -> Option<usize>;
    /// Bounds over the integer values still possible for the cell.
    fn int_bounds(&self, cell: usize) -> (i64, i64);
}

struct NoCells;

impl View for NoCells {
    fn decided(&self, _: usize) -> Option<usize> {
        None
    }

    fn int_bounds(&self, _: usize) -> (i64, i64) {
        (i64::MIN, i64::MAX)
    }
}

pub struct Evaluator<'a> {
    problem: &'a GroundProblem,
    view: &'a dyn View,
    /// Undecided cells consulted so far.
    pub touched: Vec<usize>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a GroundProblem, view: &'a dyn View) -> Self {
        Evaluator { problem, view, touched: Vec::new() }
    }

    /// For subtrees without cells.
    pub fn constant(problem: &'a GroundProblem) -> Self {
        Evaluator { problem, view: &NoCells, touched: Vec::new() }
    }

    fn touch(&mut self, c: usize) {
        if !self.touched.contains(&c) {
            self.touched.push(c);
        }
    }

    fn cell_term(&mut self, c: usize) -> Known {
        match self.view.decided(c) {
            Some(k) => Known::Value(self.problem.cells[c].domain[k].clone()),
            None => {
                self.touch(c);
                let (lo, hi) = self.view.int_bounds(c);
                Known::Unknown(lo, hi)
            }
        }
    }

    fn cell_truth(&mut self, c: usize) -> Outcome {
        match self.view.decided(c) {
            Some(k) => Outcome::of(k == 1),
            None => {
                self.touch(c);
                Outcome::TRUE.union(Outcome::FALSE)
            }
        }
    }

    /// Arguments of an application, left to right; `Err(k)` when the
    /// application is already decided (an error or null argument).
    fn args(&mut self, args: &[GTerm]) -> Result<Option<Vec<Value>>, Known> {
        let mut vals = Vec::with_capacity(args.len());
        let mut open = false;
        for a in args {
            match self.term(a) {
                Known::Err if !open => return Err(Known::Err),
                Known::Value(Value::Null) if !open => return Err(Known::Value(Value::Null)),
                Known::Value(v) => vals.push(v),
                _ => open = true,
            }
        }
        Ok(if open { None } else { Some(vals) })
    }

    pub fn term(&mut self, t: &GTerm) -> Known {
        match t {
            GTerm::Value(v) => Known::Value(v.clone()),
            GTerm::Err => Known::Err,
            GTerm::Cell(c) => self.cell_term(*c),
            GTerm::Lookup(s, args) => match self.args(args) {
                Err(k) => k,
                Ok(None) => FULL,
                Ok(Some(vals)) => match self.problem.tables[*s].slots.get(&vals) {
                    Some(Slot::Cell(c)) => self.cell_term(*c),
                    Some(Slot::Value(v)) => Known::Value(v.clone()),
                    Some(Slot::Truth(_)) => Known::Err,
                    None => Known::Value(Value::Null),
                },
            },
            GTerm::Arith(op, l, r) => {
                let a = self.term(l);
                if a == Known::Err {
                    return Known::Err;
                }
                let b = self.term(r);
                match (&a, &b) {
                    (_, Known::Err) => Known::Err,
                    (Known::Value(x), Known::Value(y)) => match arith(*op, x, y) {
                        Ok(v) => Known::Value(v),
                        Err(_) => Known::Err,
                    },
                    _ => {
                        let (alo, ahi) = a.range();
                        let (blo, bhi) = b.range();
                        if alo > ahi || blo > bhi {
                            return Known::Unknown(i64::MAX, i64::MIN);
                        }
                        match op {
                            ArithOp::Add => Known::Unknown(alo.saturating_add(blo), ahi.saturating_add(bhi)),
                            ArithOp::Sub => Known::Unknown(alo.saturating_sub(bhi), ahi.saturating_sub(blo)),
                            ArithOp::Mul => {
                                let ps = [
                                    alo.saturating_mul(blo),
                                    alo.saturating_mul(bhi),
                                    ahi.saturating_mul(blo),
                                    ahi.saturating_mul(bhi),
                                ];
                                Known::Unknown(*ps.iter().min().unwrap(), *ps.iter().max().unwrap())
                            }
                            ArithOp::Div => FULL,
                        }
                    }
                }
            }
            GTerm::Sum(bs) | GTerm::Min(bs) | GTerm::Max(bs) => self.aggregate(t, bs),
            GTerm::Count(cs) => {
                let mut sure = 0i64;
                let mut maybe = 0i64;
                let mut err = false;
                for c in cs {
                    let o = self.formula(c);
                    if o == Outcome::ERR {
                        err = true;
                    } else if o == Outcome::TRUE {
                        sure += 1;
                    } else if o != Outcome::FALSE {
                        maybe += 1;
                    }
                }
                if err {
                    Known::Err
                } else if maybe == 0 {
                    Known::Value(Value::Int(sure))
                } else {
                    Known::Unknown(sure, sure + maybe)
                }
            }
        }
    }

    fn aggregate(&mut self, t: &GTerm, branches: &[(GFormula, GTerm)]) -> Known {
        let mut exact = true;
        let mut err = false;
        let mut vals = Vec::new();
        let (mut lo, mut hi) = (0i64, 0i64);
        for (cond, body) in branches {
            let o = self.formula(cond);
            if o == Outcome::ERR {
                err = true;
                continue;
            }
            if o != Outcome::TRUE && o != Outcome::FALSE {
                exact = false;
            }
            if !o.can_be_true() {
                continue;
            }
            let v = self.term(body);
            if o == Outcome::TRUE && v == Known::Err {
                err = true;
                continue;
            }
            if o != Outcome::TRUE || !matches!(v, Known::Value(_)) {
                exact = false;
            }
            let (vlo, vhi) = v.range();
            let (clo, chi) = if o == Outcome::TRUE {
                (vlo, vhi)
            } else if vlo > vhi {
                (0, 0)
            } else {
                (vlo.min(0), vhi.max(0))
            };
            if clo > chi {
                lo = i64::MAX;
                hi = i64::MIN;
            } else if lo <= hi {
                lo = lo.saturating_add(clo);
                hi = hi.saturating_add(chi);
            }
            if let Known::Value(x) = v {
                vals.push(x);
            }
        }
        if err {
            return Known::Err;
        }
        if !exact {
            return match t {
                GTerm::Sum(_) => Known::Unknown(lo, hi),
                _ => FULL,
            };
        }
        let r = match t {
            GTerm::Sum(_) => sum_values(vals),
            GTerm::Min(_) => extremum(vals, Ordering::Less),
            _ => extremum(vals, Ordering::Greater),
        };
        match r {
            Ok(v) => Known::Value(v),
            Err(_) => Known::Err,
        }
    }

    pub fn formula(&mut self, f: &GFormula) -> Outcome {
        match f {
            GFormula::Const(o) => *o,
            GFormula::Atom(c) => self.cell_truth(*c),
            GFormula::Lookup(s, args) => match self.args(args) {
                Err(Known::Err) => Outcome::ERR,
                Err(_) => Outcome::FALSE,
                Ok(None) => Outcome::ANY,
                Ok(Some(vals)) => match self.problem.tables[*s].slots.get(&vals) {
                    Some(Slot::Cell(c)) => self.cell_truth(*c),
                    Some(Slot::Truth(b)) => Outcome::of(*b),
                    Some(Slot::Value(_)) => Outcome::ERR,
                    None => Outcome::FALSE,
                },
            },
            GFormula::Cmp(op, l, r) => {
                let a = self.term(l);
                if a == Known::Err {
                    return Outcome::ERR;
                }
                let b = self.term(r);
                match (&a, &b) {
                    (_, Known::Err) => Outcome::ERR,
                    (Known::Value(x), Known::Value(y)) => match compare(*op, x, y) {
                        Ok(t) => Outcome::of(t),
                        Err(_) => Outcome::ERR,
                    },
                    _ => {
                        let rest = Outcome::FALSE.union(Outcome::ERR);
                        if may_hold(*op, &a, &b) {
                            rest.union(Outcome::TRUE)
                        } else {
                            rest
                        }
                    }
                }
            }
            GFormula::Not(g) => self.formula(g).negate(),
            GFormula::And(gs) => {
                let mut out = Outcome::NONE;
                for g in gs {
                    let o = self.formula(g);
                    out = out.union(o.without_true());
                    if !o.can_be_true() {
                        return out;
                    }
                }
                out.union(Outcome::TRUE)
            }
            GFormula::Or(gs) => {
                let mut out = Outcome::NONE;
                for g in gs {
                    let o = self.formula(g);
                    out = out.union(o.without_false());
                    if !o.can_be_false() {
                        return out;
                    }
                }
                out.union(Outcome::FALSE)
            }
        }
    }
}

/// Whether the comparison can hold when at least one side is undecided.
fn may_hold(op: CmpOp, a: &Known, b: &Known) -> bool {
    let (alo, ahi) = a.range();
    let (blo, bhi) = b.range();
    match op {
        CmpOp::Neq => true,
        CmpOp::Eq => match (a, b) {
            (Known::Value(Value::Int(n)), Known::Unknown(lo, hi)) | (Known::Unknown(lo, hi), Known::Value(Value::Int(n))) => {
                lo <= n && n <= hi
            }
            _ => true,
        },
        _ => {
            if alo > ahi || blo > bhi {
                return false;
            }
            match op {
                CmpOp::Lt => alo < bhi,
                CmpOp::Leq => alo <= bhi,
                CmpOp::Gt => ahi > blo,
                _ => ahi >= blo,
            }
        }
    }
}
