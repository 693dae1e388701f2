//! Decision, constraint and aggregate tables to sentences.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expr::{
    cell_term, cell_to_formula, parse_cell, parse_header, CellExpr, ExprType, HeaderExpr, Scope,
};
use crate::fo::{self, eval_formula, Aggregate, ArithOp, Env, Formula, Interp, Sentence, Structure, Term, Value, Var};
use crate::glossary::{SymbolKind, Vocabulary};
use crate::grid::{HitPolicy, TableBlock};

use super::TranslateError;

/// Headers and cells of one table, with the scope its input columns build.
pub struct ParsedTable<'b> {
    pub block: &'b TableBlock,
    pub headers: Vec<HeaderExpr>,
    pub scope: Scope,
    pub cells: Vec<Vec<CellExpr>>,
}

impl<'b> ParsedTable<'b> {
    pub fn parse(block: &'b TableBlock, vocab: &Vocabulary) -> Result<ParsedTable<'b>> {
        let mut scope = Scope::new();
        let mut headers = Vec::with_capacity(block.header_row.len());
        for (j, text) in block.header_row.iter().enumerate() {
            let h = parse_header(text, vocab, &mut scope, j, j < block.n_inputs)
                .map_err(|e| Error::from(e).at(&block.name, block.header_file_row(), Some(block.file_column(j))))?;
            headers.push(h);
        }
        let mut cells = Vec::with_capacity(block.body.len());
        for (i, row) in block.body.iter().enumerate() {
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, c)| parse_cell(c).map_err(|e| self_loc(block, i, j, e.into())))
                .collect::<Result<Vec<_>>>()?;
            cells.push(parsed);
        }
        Ok(ParsedTable { block, headers, scope, cells })
    }

    fn loc(&self, i: usize, j: usize, e: Error) -> Error {
        self_loc(self.block, i, j, e)
    }

    fn inputs(&self) -> std::ops::Range<usize> {
        0..self.block.n_inputs
    }

    fn outputs(&self) -> std::ops::Range<usize> {
        self.block.n_inputs..self.headers.len()
    }

    fn conj(&self, i: usize, cols: std::ops::Range<usize>, vocab: &Vocabulary) -> Result<Formula> {
        let mut parts = Vec::new();
        for j in cols {
            let f = cell_to_formula(&self.cells[i][j], &self.headers[j], vocab, &self.scope)
                .map_err(|e| self.loc(i, j, e.into()))?;
            parts.push(f);
        }
        Ok(Formula::and(parts))
    }

    pub fn input_formula(&self, i: usize, vocab: &Vocabulary) -> Result<Formula> {
        self.conj(i, self.inputs(), vocab)
    }

    pub fn output_formula(&self, i: usize, vocab: &Vocabulary) -> Result<Formula> {
        self.conj(i, self.outputs(), vocab)
    }

    fn sentence(&self, formula: Formula) -> Sentence {
        Sentence { formula, table: self.block.name.clone(), rows: self.block.body_rows() }
    }

    fn header_error(&self, j: usize, e: TranslateError) -> Error {
        Error::from(e).at(&self.block.name, self.block.header_file_row(), Some(self.block.file_column(j)))
    }

    fn title_error(&self, e: TranslateError) -> Error {
        Error::from(e).at(&self.block.name, self.block.origin.first_row, None)
    }

    /// Splits the introduced variables into those occurring in the output
    /// headers and the rest.
    fn split_vars(&self) -> (Vec<Var>, Vec<Var>) {
        let mut in_output = BTreeSet::new();
        for j in self.outputs() {
            let h = &self.headers[j];
            if let Some(t) = h.term() {
                in_output.extend(fo::term_free_vars(&t));
            } else if let Some(a) = h.atom() {
                in_output.extend(fo::free_vars(&a));
            }
        }
        self.scope.vars().into_iter().partition(|v| in_output.contains(v))
    }
}

fn self_loc(block: &TableBlock, i: usize, j: usize, e: Error) -> Error {
    e.at(&block.name, block.body_row(i), Some(block.file_column(j)))
}

/// Output of translating a decision table.
pub struct DecisionOutput {
    pub sentences: Vec<Sentence>,
    /// Output symbols that may take the null value.
    pub nullable: Vec<String>,
    pub defaults: Vec<(String, Value)>,
}

fn parse_defaults(t: &ParsedTable, vocab: &Vocabulary) -> Result<Vec<Option<Formula>>> {
    let n = t.block.n_outputs;
    let Some(text) = &t.block.default else { return Ok(vec![None; n]) };
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(t.title_error(TranslateError::MalformedDefault(text.clone())));
    }
    let mut out = Vec::new();
    for (k, part) in parts.into_iter().enumerate() {
        let j = t.block.n_inputs + k;
        let header = &t.headers[j];
        let malformed = || t.title_error(TranslateError::MalformedDefault(part.to_string()));
        let cell = parse_cell(part).map_err(|_| malformed())?;
        if cell == CellExpr::Irrelevant {
            out.push(None);
            continue;
        }
        let f = cell_to_formula(&cell, header, vocab, &Scope::new()).map_err(|e| t.title_error_expr(e))?;
        if !matches!(cell, CellExpr::Single(_) | CellExpr::YesAtom | CellExpr::NoAtom) {
            return Err(malformed());
        }
        out.push(Some(f));
    }
    Ok(out)
}

impl ParsedTable<'_> {
    fn title_error_expr(&self, e: crate::expr::ExprError) -> Error {
        Error::from(e).at(&self.block.name, self.block.origin.first_row, None)
    }
}

fn check_defining_header(t: &ParsedTable, j: usize) -> Result<()> {
    match &t.headers[j] {
        HeaderExpr::Const { .. } | HeaderExpr::FuncApp { .. } | HeaderExpr::RelApp { .. } | HeaderExpr::Prop(_) => Ok(()),
        other => Err(t.header_error(j, TranslateError::InvalidOutputHeader(other.to_string()))),
    }
}

/// U, A and F tables: one sentence for the rows plus, unless the inputs are
/// provably exhaustive, the completion forcing null (or the default).
pub fn translate_decision(
    t: &ParsedTable,
    vocab: &Vocabulary,
    data: &Structure,
    maybe_null: &BTreeSet<String>,
) -> Result<DecisionOutput> {
    for j in t.outputs() {
        check_defining_header(t, j)?;
        for i in 0..t.cells.len() {
            if !matches!(t.cells[i][j], CellExpr::Single(_) | CellExpr::YesAtom | CellExpr::NoAtom | CellExpr::Irrelevant) {
                return Err(t.loc(i, j, TranslateError::NonValueOutput(t.cells[i][j].to_string()).into()));
            }
        }
    }
    let first = t.block.hit_policy == Some(HitPolicy::First);
    let ins = (0..t.cells.len()).map(|i| t.input_formula(i, vocab)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for i in 0..t.cells.len() {
        let out = t.output_formula(i, vocab)?;
        let ante = if first {
            Formula::and(std::iter::once(ins[i].clone()).chain(ins[..i].iter().map(|f| Formula::not(f.clone()))))
        } else {
            ins[i].clone()
        };
        rows.push(Formula::implies(ante, out));
    }
    let vars = t.scope.vars();
    let mut sentences = vec![t.sentence(Formula::forall(vars.clone(), Formula::and(rows)))];

    let defaults = parse_defaults(t, vocab)?;
    let mut nullable = Vec::new();
    let mut default_values = Vec::new();
    if vars.is_empty() && inputs_exhaustive(&ins, data, vocab, maybe_null) {
        return Ok(DecisionOutput { sentences, nullable, defaults: default_values });
    }
    let (w, u) = t.split_vars();
    let none_applies = Formula::forall(u, Formula::and(ins.iter().map(|f| Formula::not(f.clone()))));
    let mut completion = Vec::new();
    for (k, j) in t.outputs().enumerate() {
        let header = &t.headers[j];
        let symbol = header.symbol().unwrap_or_default().to_string();
        match (&defaults[k], header.atom()) {
            (Some(f), _) => {
                if let Formula::Cmp(_, _, Term::Value(v)) = f {
                    default_values.push((symbol, v.clone()));
                }
                completion.push(f.clone());
            }
            (None, Some(atom)) => completion.push(Formula::not(atom)),
            (None, None) => {
                nullable.push(symbol);
                completion.push(Formula::eq(header.term().expect("term header"), Term::null()));
            }
        }
    }
    sentences.push(t.sentence(Formula::forall(w, Formula::implies(none_applies, Formula::and(completion)))));
    Ok(DecisionOutput { sentences, nullable, defaults: default_values })
}

const EXHAUSTIVE_CHECK_LIMIT: usize = 10_000;

/// Whether some input row applies in every interpretation of the symbols
/// the (variable-free) inputs mention, checked by enumeration.
fn inputs_exhaustive(ins: &[Formula], data: &Structure, vocab: &Vocabulary, maybe_null: &BTreeSet<String>) -> bool {
    #[derive(Clone)]
    enum Slot {
        Func(String, Vec<Value>, Vec<Value>),
        Pred(String, Vec<Value>),
        Prop(String),
    }
    fn ground_args(args: &[Term]) -> Option<Vec<Value>> {
        args.iter()
            .map(|a| match a {
                Term::Value(v) => Some(v.clone()),
                _ => None,
            })
            .collect()
    }
    struct Collect<'a> {
        slots: Vec<Slot>,
        seen: BTreeSet<(String, Vec<Value>)>,
        data: &'a Structure,
        vocab: &'a Vocabulary,
        maybe_null: &'a BTreeSet<String>,
        ok: bool,
    }
    impl Collect<'_> {
        fn term(&mut self, t: &Term) {
            match t {
                Term::Value(_) => {}
                Term::App(s, args) => {
                    args.iter().for_each(|a| self.term(a));
                    let Some(vals) = ground_args(args) else {
                        self.ok = false;
                        return;
                    };
                    if self.data.interps.contains_key(s) || !self.seen.insert((s.clone(), vals.clone())) {
                        return;
                    }
                    let sig = self.vocab.symbol(s);
                    let dom = sig.and_then(|g| g.result_type.as_deref()).and_then(|ty| self.vocab.domain(ty));
                    match dom {
                        Some(d) => {
                            let mut d = d.to_vec();
                            if self.maybe_null.contains(s) {
                                d.push(Value::Null);
                            }
                            self.slots.push(Slot::Func(s.clone(), vals, d));
                        }
                        None => self.ok = false,
                    }
                }
                Term::Arith(_, l, r) => {
                    self.term(l);
                    self.term(r);
                }
                _ => self.ok = false,
            }
        }

        fn formula(&mut self, f: &Formula) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Prop(p) => {
                    if !self.data.interps.contains_key(p) && self.seen.insert((p.clone(), Vec::new())) {
                        self.slots.push(Slot::Prop(p.clone()));
                    }
                }
                Formula::Pred(s, args) => {
                    args.iter().for_each(|a| self.term(a));
                    match ground_args(args) {
                        Some(vals) => {
                            if !self.data.interps.contains_key(s) && self.seen.insert((s.clone(), vals.clone())) {
                                self.slots.push(Slot::Pred(s.clone(), vals));
                            }
                        }
                        None => self.ok = false,
                    }
                }
                Formula::Cmp(_, l, r) => {
                    self.term(l);
                    self.term(r);
                }
                Formula::Not(g) => self.formula(g),
                Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| self.formula(g)),
                Formula::Implies(a, b) => {
                    self.formula(a);
                    self.formula(b);
                }
                Formula::Forall(..) | Formula::Exists(..) => self.ok = false,
            }
        }
    }
    let mut c = Collect { slots: Vec::new(), seen: BTreeSet::new(), data, vocab, maybe_null, ok: true };
    ins.iter().for_each(|f| c.formula(f));
    if !c.ok {
        return false;
    }
    let sizes: Vec<usize> = c
        .slots
        .iter()
        .map(|s| match s {
            Slot::Func(_, _, d) => d.len(),
            _ => 2,
        })
        .collect();
    let mut total: usize = 1;
    for s in &sizes {
        total = match total.checked_mul(*s) {
            Some(t) if t <= EXHAUSTIVE_CHECK_LIMIT => t,
            _ => return false,
        };
    }
    let any_row = Formula::Or(ins.to_vec());
    let mut base = data.clone();
    for ty in vocab.types.keys() {
        if let Some(d) = vocab.domain(ty) {
            base.domains.insert(ty.clone(), d.to_vec());
        }
    }
    let mut idx = vec![0usize; sizes.len()];
    loop {
        let mut s = base.clone();
        for (slot, &k) in c.slots.iter().zip(&idx) {
            match slot {
                Slot::Func(sym, args, d) => s.set_function(sym, args.clone(), d[k].clone()),
                Slot::Pred(sym, args) => {
                    s.interps.entry(sym.clone()).or_insert_with(|| Interp::Relation(Default::default()));
                    s.set_relation(sym, args.clone(), k == 1);
                }
                Slot::Prop(p) => s.set_proposition(p, k == 1),
            }
        }
        if !matches!(eval_formula(&any_row, &s, &mut Env::new()), Ok(true)) {
            return false;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return true;
            }
            idx[pos] += 1;
            if idx[pos] < sizes[pos] {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// E* tables: every row is an implication, for every tuple of the variables.
pub fn translate_constraint(t: &ParsedTable, vocab: &Vocabulary) -> Result<Sentence> {
    if t.block.default.is_some() {
        return Err(t.title_error(TranslateError::DefaultOnConstraintTable));
    }
    let mut rows = Vec::new();
    for i in 0..t.cells.len() {
        rows.push(Formula::implies(t.input_formula(i, vocab)?, t.output_formula(i, vocab)?));
    }
    Ok(t.sentence(Formula::forall(t.scope.vars(), Formula::and(rows))))
}

fn single_output(t: &ParsedTable, numeric_error: fn(String) -> TranslateError, vocab: &Vocabulary) -> Result<(usize, Term)> {
    if t.block.default.is_some() {
        return Err(t.title_error(TranslateError::DefaultOnAggregateTable));
    }
    if t.block.n_outputs != 1 {
        return Err(t.title_error(TranslateError::MultipleOutputs(t.block.n_outputs)));
    }
    let j = t.block.n_inputs;
    check_defining_header(t, j)?;
    let h = &t.headers[j];
    match (h.term(), h.ty()) {
        (Some(term), Some(ty)) if ty.is_numeric(vocab) => Ok((j, term)),
        _ => Err(t.header_error(j, numeric_error(h.to_string()))),
    }
}

fn row_term(t: &ParsedTable, i: usize, j: usize, vocab: &Vocabulary) -> Result<HeaderExpr> {
    let cell = &t.cells[i][j];
    match cell_term(cell, vocab, &t.scope).map_err(|e| t.loc(i, j, e.into()))? {
        Some(h) => Ok(h),
        None => Err(t.loc(i, j, TranslateError::NonValueOutput(cell.to_string()).into())),
    }
}

/// C+, C< and C> tables.
pub fn translate_aggregate(t: &ParsedTable, vocab: &Vocabulary) -> Result<Sentence> {
    let (j, head) = single_output(t, TranslateError::NonNumericOutput, vocab)?;
    let (w, u) = t.split_vars();
    let mut branches = Vec::new();
    for i in 0..t.cells.len() {
        let value = row_term(t, i, j, vocab)?;
        if !value.ty().is_some_and(|ty| ty.is_numeric(vocab)) {
            return Err(t.loc(i, j, TranslateError::NonNumericOutput(value.to_string()).into()));
        }
        branches.push((t.input_formula(i, vocab)?, value.term().expect("checked term")));
    }
    let value = match t.block.hit_policy {
        Some(HitPolicy::Sum) => branches
            .into_iter()
            .map(|(cond, body)| Term::sum(u.clone(), cond, body))
            .reduce(|acc, next| Term::arith(ArithOp::Add, acc, next))
            .unwrap_or_else(|| Term::int(0)),
        Some(HitPolicy::Min) => Term::Min(Aggregate { vars: u, branches }),
        _ => Term::Max(Aggregate { vars: u, branches }),
    };
    Ok(t.sentence(Formula::forall(w, Formula::eq(head, value))))
}

/// C# tables: the number of distinct output values produced by some row.
pub fn translate_count(t: &ParsedTable, vocab: &Vocabulary) -> Result<Sentence> {
    let (j, head) = single_output(t, TranslateError::NonNumericCountTarget, vocab)?;
    let (w, u) = t.split_vars();
    let mut counted: Option<String> = None;
    let names: BTreeSet<String> = t.scope.vars().into_iter().map(|v| v.name).collect();
    let x_name = (0..).map(|n| if n == 0 { "x".to_string() } else { format!("x{n}") }).find(|n| !names.contains(n)).unwrap();
    let mut rows = Vec::new();
    let mut terms = Vec::new();
    for i in 0..t.cells.len() {
        let value = row_term(t, i, j, vocab)?;
        let ty = match value.ty() {
            Some(ExprType::Named(ty)) => ty,
            _ => return Err(t.loc(i, j, TranslateError::UntypedCountTarget(value.to_string()).into())),
        };
        match &counted {
            Some(c) if *c != ty => {
                return Err(t.loc(
                    i,
                    j,
                    crate::expr::ExprError::TypeMismatch { phrase: value.to_string(), expected: c.clone(), found: ty }.into(),
                ))
            }
            _ => counted = Some(ty),
        }
        terms.push(value.term().expect("checked term"));
        rows.push(t.input_formula(i, vocab)?);
    }
    let Some(ty) = counted else {
        // Nothing can be counted without rows.
        return Ok(t.sentence(Formula::forall(w, Formula::eq(head, Term::int(0)))));
    };
    let x = Var::new(x_name, ty);
    let disjuncts = terms
        .into_iter()
        .zip(rows)
        .map(|(term, cond)| Formula::and([Formula::eq(Term::var(&x), term), cond]));
    let cond = Formula::exists(u, Formula::or(disjuncts));
    Ok(t.sentence(Formula::forall(w, Formula::eq(head, Term::count(vec![x], cond)))))
}

/// Output symbols a table defines, paired with their kinds.
pub fn defined_symbols(t: &ParsedTable, vocab: &Vocabulary) -> Vec<(String, SymbolKind)> {
    t.outputs()
        .filter_map(|j| t.headers[j].symbol())
        .filter_map(|s| vocab.symbol(s).map(|sig| (s.to_string(), sig.kind)))
        .collect()
}
