//! Cell entries and column headers: syntax, typed resolution against the
//! vocabulary, and translation of a cell under its header to a formula.

pub mod formula;
pub mod header;
pub mod syntax;

use thiserror::Error;

use crate::glossary::GlossaryError;

pub use formula::{cell_term, cell_to_formula};
pub use header::{parse_header, resolve_term, ExprType, HeaderExpr, Scope};
pub use syntax::{parse_cell, parse_term, CellExpr, PhraseItem, SynTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("cannot parse `{0}`")]
    MalformedExpression(String),
    #[error("malformed range `{0}`; write it as [a, b], [a, b), (a, b] or (a, b)")]
    MalformedRange(String),
    #[error("`{0}` matches no type, variable or symbol")]
    UnknownHeaderSymbol(String),
    #[error("`{phrase}` has type {found}, expected {expected}")]
    TypeMismatch { phrase: String, expected: String, found: String },
    #[error("variable `{name}` is already of type {existing}, not {requested}")]
    VariableRedeclaration { name: String, existing: String, requested: String },
    #[error("variable name `{0}` is already a constant, element or type")]
    VariableShadowsConstant(String),
    #[error("`{0}` refers to a variable that no input column introduces")]
    UnboundVariable(String),
    #[error("`{0}` introduces a variable outside an input column")]
    VariableOutsideInput(String),
    #[error("Yes/No under `{0}`, which is not an atom")]
    YesNoOnTerm(String),
    #[error("`{cell}` under atom `{header}`; only Yes, No or - are allowed")]
    ExpectedYesNo { header: String, cell: String },
    #[error("`{0}` is a relation or boolean, not a term")]
    AtomAsTerm(String),
    #[error(transparent)]
    Glossary(#[from] GlossaryError),
}
