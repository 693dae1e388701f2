//! Human-readable logic syntax, e.g. `∀x[Doctor], y[Day]: f(x, y) ≤ 1`.

use std::fmt;

use super::{Aggregate, ArithOp, CmpOp, Formula, Sentence, Term, Theory, Var};

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "≠",
            CmpOp::Lt => "<",
            CmpOp::Leq => "≤",
            CmpOp::Gt => ">",
            CmpOp::Geq => "≥",
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name, self.ty)
    }
}

fn var_list(vars: &[Var]) -> String {
    vars.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn aggregate(f: &mut fmt::Formatter<'_>, name: &str, agg: &Aggregate) -> fmt::Result {
    write!(f, "{name}{{{}", var_list(&agg.vars))?;
    for (i, (cond, body)) in agg.branches.iter().enumerate() {
        let sep = if i == 0 { ":" } else { ";" };
        write!(f, "{sep} {cond}: {body}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(&v.name),
            Term::Value(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => f.write_str(s),
            Term::App(s, args) => {
                let a: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{s}({})", a.join(", "))
            }
            Term::Arith(op, l, r) => {
                let side = |t: &Term| match t {
                    Term::Arith(..) => format!("({t})"),
                    _ => t.to_string(),
                };
                write!(f, "{} {op} {}", side(l), side(r))
            }
            Term::Sum(a) => aggregate(f, "sum", a),
            Term::Min(a) => aggregate(f, "min", a),
            Term::Max(a) => aggregate(f, "max", a),
            Term::Count(vars, cond) => write!(f, "#{{{}: {cond}}}", var_list(vars)),
        }
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(_) => 2,
        Formula::And(_) => 3,
        Formula::Not(_) => 4,
        _ => 5,
    }
}

fn child(f: &Formula, min: u8) -> String {
    if precedence(f) < min {
        format!("({f})")
    } else {
        f.to_string()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Pred(s, args) => {
                let a: Vec<String> = args.iter().map(ToString::to_string).collect();
                write!(f, "{s}({})", a.join(", "))
            }
            Formula::Cmp(op, l, r) => write!(f, "{l} {op} {r}"),
            Formula::Not(g) => write!(f, "¬{}", child(g, 4)),
            Formula::And(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| child(g, 4)).collect();
                f.write_str(&parts.join(" ∧ "))
            }
            Formula::Or(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| child(g, 3)).collect();
                f.write_str(&parts.join(" ∨ "))
            }
            Formula::Implies(a, b) => write!(f, "{} ⇒ {}", child(a, 2), child(b, 2)),
            Formula::Forall(vars, body) => write!(f, "∀{}: {body}", var_list(vars)),
            Formula::Exists(vars, body) => write!(f, "∃{}: {body}", var_list(vars)),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "// {} (rows {}-{})\n{}.", self.table, self.rows.0, self.rows.1, self.formula)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sentences {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
