//! Brute-force reference enumerator.
//!
//! Tries every total extension of the data structure and keeps those on
//! which every sentence evaluates to true. It shares no code with the
//! grounder or the search, which makes it a cross-check for both.

use std::collections::BTreeMap;

use crate::fo::{eval_formula, Env, Interp, Structure, Value};
use crate::glossary::SymbolKind;
use crate::translate::CompiledModel;

use super::SolveError;

/// Largest number of candidate structures the oracle will try.
pub const ORACLE_CAP: u128 = 1_000_000;

struct Slot {
    symbol: String,
    args: Vec<Value>,
    kind: SymbolKind,
    values: Vec<Value>,
}

fn product(types: &[String], s: &Structure) -> Vec<Vec<Value>> {
    let mut out = vec![Vec::new()];
    for ty in types {
        let d = s.domain(ty).unwrap_or(&[]);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                d.iter().map(move |v| {
                    let mut t = prefix.clone();
                    t.push(v.clone());
                    t
                })
            })
            .collect();
    }
    out
}

fn set(s: &mut Structure, slot: &Slot, k: usize) {
    match slot.kind {
        SymbolKind::Boolean => s.set_proposition(&slot.symbol, k == 1),
        SymbolKind::Relation => s.set_relation(&slot.symbol, slot.args.clone(), k == 1),
        SymbolKind::Function | SymbolKind::Constant => s.set_function(&slot.symbol, slot.args.clone(), slot.values[k].clone()),
    }
}

/// Every model of the theory extending the data, in lexicographic order of
/// the open entries (symbol name, then argument tuple; values in domain
/// order with null last).
pub fn oracle_enumerate(model: &CompiledModel) -> Result<Vec<Structure>, SolveError> {
    let data = &model.data;
    let mut slots = Vec::new();
    for (name, sig) in &model.vocabulary.symbols {
        if data.interps.contains_key(name) {
            continue;
        }
        let values = match sig.kind {
            SymbolKind::Boolean | SymbolKind::Relation => vec![Value::Int(0), Value::Int(1)],
            SymbolKind::Function | SymbolKind::Constant => {
                let ty = sig.result_type.as_deref().unwrap_or_default();
                let mut d = data.domain(ty).ok_or_else(|| SolveError::EmptyDomain(ty.to_string()))?.to_vec();
                if model.nullable.contains(name) {
                    d.push(Value::Null);
                }
                d
            }
        };
        for args in product(&sig.arg_types, data) {
            slots.push(Slot { symbol: name.clone(), args, kind: sig.kind, values: values.clone() });
        }
    }
    let mut total: u128 = 1;
    for slot in &slots {
        total = total.saturating_mul(slot.values.len() as u128);
        if total > ORACLE_CAP {
            return Err(SolveError::OracleBlowup { size: total, cap: ORACLE_CAP });
        }
    }
    if slots.iter().any(|s| s.values.is_empty()) {
        return Ok(Vec::new());
    }

    let mut s = data.clone();
    for (name, sig) in &model.vocabulary.symbols {
        if !data.interps.contains_key(name) {
            let empty = match sig.kind {
                SymbolKind::Boolean => Interp::Proposition(false),
                SymbolKind::Relation => Interp::Relation(Default::default()),
                _ => Interp::Function(BTreeMap::new()),
            };
            s.interps.insert(name.clone(), empty);
        }
    }
    let mut idx = vec![0usize; slots.len()];
    for (slot, &k) in slots.iter().zip(&idx) {
        set(&mut s, slot, k);
    }
    let mut out = Vec::new();
    loop {
        let ok = model.theory.formulas().all(|f| matches!(eval_formula(f, &s, &mut Env::new()), Ok(true)));
        if ok {
            out.push(s.clone());
        }
        // The last entry varies fastest.
        let mut pos = slots.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < slots[pos].values.len() {
                set(&mut s, &slots[pos], idx[pos]);
                break;
            }
            idx[pos] = 0;
            set(&mut s, &slots[pos], 0);
        }
    }
}
