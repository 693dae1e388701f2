//! A cell entry under its header becomes a formula about the header's term.

use crate::fo::{CmpOp, Formula, Term, Value};
use crate::glossary::Vocabulary;

use super::header::{resolve_term, ExprType, HeaderExpr, Scope};
use super::syntax::{CellExpr, SynTerm};
use super::ExprError;

fn typed(syn: &SynTerm, vocab: &Vocabulary, scope: &Scope) -> Result<(Term, ExprType), ExprError> {
    let h = resolve_term(syn, vocab, scope)?;
    match (h.term(), h.ty()) {
        (Some(t), Some(ty)) => Ok((t, ty)),
        _ => Err(ExprError::AtomAsTerm(syn.to_string())),
    }
}

fn check(
    op: CmpOp,
    header_ty: &ExprType,
    syn: &SynTerm,
    value_ty: &ExprType,
    vocab: &Vocabulary,
) -> Result<(), ExprError> {
    let ok = match op {
        CmpOp::Eq | CmpOp::Neq => header_ty.compatible(value_ty, vocab),
        _ => header_ty.is_numeric(vocab) && value_ty.is_numeric(vocab),
    };
    if ok {
        Ok(())
    } else {
        let expected = match op {
            CmpOp::Eq | CmpOp::Neq => header_ty.to_string(),
            _ => "a number".to_string(),
        };
        Err(ExprError::TypeMismatch { phrase: syn.to_string(), expected, found: value_ty.to_string() })
    }
}

fn has_element(vocab: &Vocabulary, ty: &ExprType, name: &str) -> bool {
    match ty {
        ExprType::Named(t) => vocab.domain(t).is_some_and(|d| d.contains(&Value::elem(name))),
        ExprType::Int => false,
    }
}

/// Translates the cell under `header`; cell terms see every variable of the table.
pub fn cell_to_formula(
    cell: &CellExpr,
    header: &HeaderExpr,
    vocab: &Vocabulary,
    scope: &Scope,
) -> Result<Formula, ExprError> {
    if let CellExpr::Irrelevant = cell {
        return Ok(Formula::True);
    }
    if let Some(atom) = header.atom() {
        return match cell {
            CellExpr::YesAtom => Ok(atom),
            CellExpr::NoAtom => Ok(Formula::not(atom)),
            other => Err(ExprError::ExpectedYesNo { header: header.to_string(), cell: other.to_string() }),
        };
    }
    let (Some(x), Some(hty)) = (header.term(), header.ty()) else {
        return Err(ExprError::AtomAsTerm(header.to_string()));
    };
    let cmp = |op: CmpOp, syn: &SynTerm| -> Result<Formula, ExprError> {
        let (t, ty) = typed(syn, vocab, scope)?;
        check(op, &hty, syn, &ty, vocab)?;
        Ok(Formula::cmp(op, x.clone(), t))
    };
    match cell {
        CellExpr::Irrelevant => Ok(Formula::True),
        CellExpr::YesAtom | CellExpr::NoAtom => {
            let name = if *cell == CellExpr::YesAtom { "Yes" } else { "No" };
            if has_element(vocab, &hty, name) {
                Ok(Formula::eq(x, Term::elem(name)))
            } else {
                Err(ExprError::YesNoOnTerm(header.to_string()))
            }
        }
        CellExpr::Compare(op, e) => cmp(*op, e),
        CellExpr::Not(e) => cmp(CmpOp::Neq, e),
        CellExpr::Single(e) => cmp(CmpOp::Eq, e),
        CellExpr::List(items) => {
            let parts = items.iter().map(|e| cmp(CmpOp::Eq, e)).collect::<Result<Vec<_>, _>>()?;
            Ok(Formula::Or(parts))
        }
        CellExpr::Range { lo, lo_closed, hi, hi_closed } => {
            let lower = cmp(if *lo_closed { CmpOp::Geq } else { CmpOp::Gt }, lo)?;
            let upper = cmp(if *hi_closed { CmpOp::Leq } else { CmpOp::Lt }, hi)?;
            Ok(Formula::And(vec![lower, upper]))
        }
    }
}

/// The term of a value cell (a single expression, or Yes/No when the
/// vocabulary has such elements). Other cell forms give `None`.
pub fn cell_term(cell: &CellExpr, vocab: &Vocabulary, scope: &Scope) -> Result<Option<HeaderExpr>, ExprError> {
    match cell {
        CellExpr::Single(e) => {
            let h = resolve_term(e, vocab, scope)?;
            if h.is_atom() {
                return Err(ExprError::AtomAsTerm(e.to_string()));
            }
            Ok(Some(h))
        }
        CellExpr::YesAtom | CellExpr::NoAtom => {
            let name = if *cell == CellExpr::YesAtom { "Yes" } else { "No" };
            Ok(vocab
                .auto_constants
                .get(name)
                .map(|ty| HeaderExpr::Literal(Value::elem(name), ExprType::Named(ty.clone()))))
        }
        _ => Ok(None),
    }
}
