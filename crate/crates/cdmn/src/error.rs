use std::fmt;

use thiserror::Error;

use crate::engine::SolveError;
use crate::expr::ExprError;
use crate::fo::EvalError;
use crate::glossary::GlossaryError;
use crate::grid::GridError;
use crate::translate::TranslateError;

/// A cell position in the workbook: table name plus 1-based file row/column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub table: String,
    pub row: usize,
    pub column: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "table `{}`, row {}", self.table, self.row)?;
        if let Some(c) = self.column {
            write!(f, ", column {c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Glossary(#[from] GlossaryError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{location}: {source}")]
    At { location: Location, source: Box<Error> },
}

impl Error {
    pub fn at(self, table: &str, row: usize, column: Option<usize>) -> Error {
        match self {
            located @ Error::At { .. } => located,
            other => Error::At {
                location: Location { table: table.to_string(), row, column },
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, stripped of location wrappers.
    pub fn kind(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.kind(),
            other => other,
        }
    }

    pub fn location(&self) -> Option<&Location> {
        match self {
            Error::At { location, .. } => Some(location),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
