//! Canonical forms for comparing formulas up to bound-variable names and
//! the order of conjuncts/disjuncts.

use super::{Aggregate, Formula, Term, Var};

/// Renames every bound variable to `v{depth}_{index}` (depth = number of
/// enclosing binders) and sorts flattened conjunctions and disjunctions.
pub fn canonical(f: &Formula) -> Formula {
    Canon { scope: Vec::new(), depth: 0 }.formula(f)
}

pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    canonical(a) == canonical(b)
}

struct Canon {
    scope: Vec<(String, String)>,
    depth: usize,
}

impl Canon {
    fn bind(&mut self, vars: &[Var]) -> Vec<Var> {
        let d = self.depth;
        self.depth += 1;
        vars.iter()
            .enumerate()
            .map(|(i, v)| {
                let fresh = format!("v{d}_{i}");
                self.scope.push((v.name.clone(), fresh.clone()));
                Var::new(fresh, v.ty.clone())
            })
            .collect()
    }

    fn unbind(&mut self, n: usize) {
        self.depth -= 1;
        self.scope.truncate(self.scope.len() - n);
    }

    fn term(&mut self, t: &Term) -> Term {
        match t {
            Term::Var(v) => {
                let name = self
                    .scope
                    .iter()
                    .rev()
                    .find(|(old, _)| *old == v.name)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| v.name.clone());
                Term::Var(Var::new(name, v.ty.clone()))
            }
            Term::Value(v) => Term::Value(v.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| self.term(a)).collect()),
            Term::Arith(op, l, r) => Term::arith(*op, self.term(l), self.term(r)),
            Term::Sum(a) => Term::Sum(self.aggregate(a)),
            Term::Min(a) => Term::Min(self.aggregate(a)),
            Term::Max(a) => Term::Max(self.aggregate(a)),
            Term::Count(vars, cond) => {
                let vs = self.bind(vars);
                let c = self.formula(cond);
                self.unbind(vars.len());
                Term::Count(vs, Box::new(c))
            }
        }
    }

    fn aggregate(&mut self, a: &Aggregate) -> Aggregate {
        let vars = self.bind(&a.vars);
        let mut branches: Vec<(Formula, Term)> =
            a.branches.iter().map(|(c, b)| (self.formula(c), self.term(b))).collect();
        branches.sort();
        self.unbind(a.vars.len());
        Aggregate { vars, branches }
    }

    fn formula(&mut self, f: &Formula) -> Formula {
        match f {
            Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
            Formula::Pred(s, args) => Formula::Pred(s.clone(), args.iter().map(|a| self.term(a)).collect()),
            Formula::Cmp(op, l, r) => Formula::Cmp(*op, self.term(l), self.term(r)),
            Formula::Not(g) => Formula::Not(Box::new(self.formula(g))),
            Formula::And(gs) => {
                let mut parts = Vec::new();
                for g in gs {
                    match self.formula(g) {
                        Formula::And(inner) => parts.extend(inner),
                        other => parts.push(other),
                    }
                }
                parts.sort();
                Formula::And(parts)
            }
            Formula::Or(gs) => {
                let mut parts = Vec::new();
                for g in gs {
                    match self.formula(g) {
                        Formula::Or(inner) => parts.extend(inner),
                        other => parts.push(other),
                    }
                }
                parts.sort();
                Formula::Or(parts)
            }
            Formula::Implies(a, b) => Formula::Implies(Box::new(self.formula(a)), Box::new(self.formula(b))),
            Formula::Forall(vars, body) => {
                let vs = self.bind(vars);
                let b = self.formula(body);
                self.unbind(vars.len());
                Formula::Forall(vs, Box::new(b))
            }
            Formula::Exists(vars, body) => {
                let vs = self.bind(vars);
                let b = self.formula(body);
                self.unbind(vars.len());
                Formula::Exists(vs, Box::new(b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renaming_and_reordering_are_ignored() {
        let x = Var::new("x", "T");
        let y = Var::new("y", "T");
        let a = Formula::forall(
            vec![x.clone()],
            Formula::and([Formula::Pred("P".into(), vec![Term::var(&x)]), Formula::Prop("Q".into())]),
        );
        let b = Formula::forall(
            vec![y.clone()],
            Formula::and([Formula::Prop("Q".into()), Formula::Pred("P".into(), vec![Term::var(&y)])]),
        );
        assert!(alpha_eq(&a, &b));
        let c = Formula::forall(vec![y.clone()], Formula::Pred("P".into(), vec![Term::var(&y)]));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn free_variables_keep_their_names() {
        let x = Var::new("x", "T");
        let y = Var::new("y", "T");
        let a = Formula::Pred("P".into(), vec![Term::var(&x)]);
        let b = Formula::Pred("P".into(), vec![Term::var(&y)]);
        assert!(!alpha_eq(&a, &b));
    }
}
