//! Data tables: fixed interpretations and inferred type domains.
//!
//! Input columns introduce variables (`Country called c1`), output columns
//! apply a symbol to those variables. A cell may list several values; the
//! row then stands for every combination.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::expr::{parse_header, HeaderExpr, Scope};
use crate::fo::{Interp, Structure, Value};
use crate::glossary::Vocabulary;
use crate::grid::TableBlock;

use super::TranslateError;

#[derive(Clone, Debug)]
enum Column {
    Var { ty: String },
    Function { symbol: String, arg_cols: Vec<usize>, ty: String },
    Relation { symbol: String, arg_cols: Vec<usize> },
}

struct DataTable<'b> {
    block: &'b TableBlock,
    columns: Vec<Column>,
    /// Basic values per body cell.
    values: Vec<Vec<Vec<String>>>,
}

fn loc(block: &TableBlock, i: usize, j: usize, e: TranslateError) -> Error {
    Error::from(e).at(&block.name, block.body_row(i), Some(block.file_column(j)))
}

fn basic_values(text: &str) -> std::result::Result<Vec<String>, TranslateError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|v| {
            let v = v.trim();
            let basic = !v.is_empty()
                && (v.parse::<i64>().is_ok()
                    || v.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '.' || c == '\'' || c == '-'))
                && v != "-";
            if basic {
                Ok(v.to_string())
            } else {
                Err(TranslateError::NonBasicValue(text.to_string()))
            }
        })
        .collect()
}

fn parse_data_table<'b>(block: &'b TableBlock, vocab: &Vocabulary) -> Result<DataTable<'b>> {
    let mut scope = Scope::new();
    let mut columns = Vec::new();
    let mut var_cols: BTreeMap<String, usize> = BTreeMap::new();
    for (j, text) in block.header_row.iter().enumerate() {
        let at = |e: Error| e.at(&block.name, block.header_file_row(), Some(block.file_column(j)));
        let input = j < block.n_inputs;
        let h = parse_header(text, vocab, &mut scope, j, input).map_err(|e| at(e.into()))?;
        let invalid = || at(TranslateError::InvalidDataHeader(text.clone()).into());
        let arg_cols = |args: &[HeaderExpr]| -> Result<Vec<usize>> {
            args.iter()
                .map(|a| match a {
                    HeaderExpr::VarRef(v) => var_cols.get(&v.name).copied().ok_or_else(invalid),
                    _ => Err(invalid()),
                })
                .collect()
        };
        let col = match (&h, input) {
            (HeaderExpr::TypeVar(v) | HeaderExpr::NamedVar(v), true) => {
                var_cols.insert(v.name.clone(), j);
                Column::Var { ty: v.ty.clone() }
            }
            (HeaderExpr::Const { symbol, ty }, false) => Column::Function { symbol: symbol.clone(), arg_cols: Vec::new(), ty: ty.clone() },
            (HeaderExpr::FuncApp { symbol, args, ty }, false) => {
                Column::Function { symbol: symbol.clone(), arg_cols: arg_cols(args)?, ty: ty.clone() }
            }
            (HeaderExpr::RelApp { symbol, args }, false) => Column::Relation { symbol: symbol.clone(), arg_cols: arg_cols(args)? },
            (HeaderExpr::Prop(p), false) => Column::Relation { symbol: p.clone(), arg_cols: Vec::new() },
            _ => return Err(invalid()),
        };
        columns.push(col);
    }
    let mut values = Vec::new();
    for (i, row) in block.body.iter().enumerate() {
        let mut row_values = Vec::new();
        for (j, cell) in row.iter().enumerate() {
            let vals = basic_values(cell).map_err(|e| loc(block, i, j, e))?;
            if let Column::Relation { .. } = columns[j] {
                if vals.iter().any(|v| v != "Yes" && v != "No") || vals.len() > 1 {
                    return Err(loc(block, i, j, TranslateError::NonBasicValue(cell.clone())));
                }
            }
            if vals.is_empty() && j < block.n_inputs {
                return Err(loc(block, i, j, TranslateError::NonBasicValue(cell.clone())));
            }
            row_values.push(vals);
        }
        values.push(row_values);
    }
    Ok(DataTable { block, columns, values })
}

fn to_value(raw: &str, ty: &str, vocab: &Vocabulary) -> Option<Value> {
    let v = match raw.parse::<i64>() {
        Ok(n) => Value::Int(n),
        Err(_) => Value::elem(raw),
    };
    match vocab.domain(ty) {
        Some(d) if d.contains(&v) => Some(v),
        Some(_) => None,
        None => Some(v),
    }
}

fn column_type(c: &Column) -> Option<&str> {
    match c {
        Column::Var { ty } | Column::Function { ty, .. } => Some(ty),
        Column::Relation { .. } => None,
    }
}

/// Reads all data tables: first completes undeclared type domains from the
/// values seen, then builds the fixed interpretations.
pub fn translate_data_tables(blocks: &[&TableBlock], vocab: &mut Vocabulary) -> Result<Structure> {
    let tables = blocks.iter().map(|b| parse_data_table(b, vocab)).collect::<Result<Vec<_>>>()?;

    let mut inferred: BTreeMap<String, Vec<Value>> = BTreeMap::new();
    for t in &tables {
        for row in &t.values {
            for (j, vals) in row.iter().enumerate() {
                let Some(ty) = column_type(&t.columns[j]) else { continue };
                if vocab.types.get(ty).is_some_and(|d| d.domain.is_some()) {
                    continue;
                }
                let seen = inferred.entry(ty.to_string()).or_default();
                for raw in vals {
                    let v = raw.parse::<i64>().map(Value::Int).unwrap_or_else(|_| Value::elem(raw));
                    if !seen.contains(&v) {
                        seen.push(v);
                    }
                }
            }
        }
    }
    for (ty, mut values) in inferred {
        if values.iter().all(|v| matches!(v, Value::Int(_))) {
            values.sort();
        }
        if vocab.types.get(&ty).is_some_and(|d| d.is_numeric) && !values.iter().all(|v| matches!(v, Value::Int(_))) {
            let bad = values.iter().find(|v| !matches!(v, Value::Int(_))).unwrap();
            return Err(TranslateError::UnknownDomainElement { value: bad.to_string(), ty }.into());
        }
        vocab.set_domain(&ty, values)?;
    }

    let mut functions: BTreeMap<String, BTreeMap<Vec<Value>, Value>> = BTreeMap::new();
    let mut relations: BTreeMap<String, BTreeMap<Vec<Value>, bool>> = BTreeMap::new();
    for t in &tables {
        for (i, row) in t.values.iter().enumerate() {
            // Every combination of the listed values.
            let mut combos: Vec<Vec<Option<Value>>> = vec![Vec::new()];
            for (j, vals) in row.iter().enumerate() {
                let options: Vec<Option<Value>> = match column_type(&t.columns[j]) {
                    _ if vals.is_empty() => vec![None],
                    Some(ty) => vals
                        .iter()
                        .map(|raw| {
                            to_value(raw, ty, vocab).map(Some).ok_or_else(|| {
                                loc(t.block, i, j, TranslateError::UnknownDomainElement { value: raw.clone(), ty: ty.to_string() })
                            })
                        })
                        .collect::<Result<_>>()?,
                    None => vals.iter().map(|raw| Some(Value::elem(raw))).collect(),
                };
                combos = combos
                    .into_iter()
                    .flat_map(|c| {
                        options.iter().map(move |o| {
                            let mut c = c.clone();
                            c.push(o.clone());
                            c
                        })
                    })
                    .collect();
            }
            for combo in combos {
                for (j, col) in t.columns.iter().enumerate() {
                    let Some(value) = &combo[j] else { continue };
                    let args_of = |cols: &[usize]| cols.iter().map(|&c| combo[c].clone().expect("key cells are nonempty")).collect::<Vec<_>>();
                    let conflict = |symbol: &str, args: &[Value]| {
                        let shown: Vec<String> = args.iter().map(ToString::to_string).collect();
                        loc(t.block, i, j, TranslateError::ConflictingData { symbol: symbol.to_string(), args: shown.join(", ") })
                    };
                    match col {
                        Column::Var { .. } => {}
                        Column::Function { symbol, arg_cols, .. } => {
                            let args = args_of(arg_cols);
                            let graph = functions.entry(symbol.clone()).or_default();
                            match graph.get(&args) {
                                Some(old) if old != value => return Err(conflict(symbol, &args)),
                                _ => {
                                    graph.insert(args, value.clone());
                                }
                            }
                        }
                        Column::Relation { symbol, arg_cols } => {
                            let args = args_of(arg_cols);
                            let holds = *value == Value::elem("Yes");
                            let set = relations.entry(symbol.clone()).or_default();
                            match set.get(&args) {
                                Some(old) if *old != holds => return Err(conflict(symbol, &args)),
                                _ => {
                                    set.insert(args, holds);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let mut s = Structure::default();
    for (symbol, graph) in functions {
        let sig = vocab.symbol(&symbol).expect("resolved symbol");
        let mut missing = None;
        for_each_tuple(&sig.arg_types, vocab, &mut |args| {
            if missing.is_none() && !graph.contains_key(args) {
                missing = Some(args.to_vec());
            }
        });
        if let Some(args) = missing {
            let shown: Vec<String> = args.iter().map(ToString::to_string).collect();
            return Err(TranslateError::IncompleteFunctionData { symbol, args: shown.join(", ") }.into());
        }
        s.interps.insert(symbol, Interp::Function(graph));
    }
    for (symbol, tuples) in relations {
        let sig = vocab.symbol(&symbol).expect("resolved symbol");
        if sig.arg_types.is_empty() {
            s.set_proposition(&symbol, tuples.get(&Vec::new()).copied().unwrap_or(false));
        } else {
            let set: BTreeSet<Vec<Value>> = tuples.into_iter().filter(|(_, h)| *h).map(|(a, _)| a).collect();
            s.interps.insert(symbol, Interp::Relation(set));
        }
    }
    Ok(s)
}

/// Calls `f` for every tuple of the product of the types' domains.
pub(crate) fn for_each_tuple(types: &[String], vocab: &Vocabulary, f: &mut dyn FnMut(&[Value])) {
    fn go(types: &[String], vocab: &Vocabulary, acc: &mut Vec<Value>, f: &mut dyn FnMut(&[Value])) {
        let Some((first, rest)) = types.split_first() else {
            f(acc);
            return;
        };
        for v in vocab.domain(first).unwrap_or(&[]) {
            acc.push(v.clone());
            go(rest, vocab, acc, f);
            acc.pop();
        }
    }
    go(types, vocab, &mut Vec::new(), f);
}
