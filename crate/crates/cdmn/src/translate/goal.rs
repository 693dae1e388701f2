//! The goal table selects the inference task.
//!
//! Its single body cell reads `get N models`, `get all models`,
//! `minimize <term>` or `maximize <term>` (keywords case-insensitive).

use crate::error::{Error, Result};
use crate::expr::{parse_term, resolve_term, Scope};
use crate::glossary::Vocabulary;
use crate::grid::TableBlock;

use super::{ModelCount, Task, TranslateError};

pub fn parse_goal(text: &str, vocab: &Vocabulary) -> Result<Task, TranslateError> {
    let malformed = || TranslateError::MalformedGoal(text.to_string());
    let trimmed = text.trim();
    let words: Vec<&str> = trimmed.split_whitespace().collect();
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    match lower.first().map(String::as_str) {
        Some("get") => {
            if lower.len() != 3 || !matches!(lower[2].as_str(), "model" | "models") {
                return Err(malformed());
            }
            if lower[1] == "all" {
                return Ok(Task::ModelExpand(ModelCount::All));
            }
            match lower[1].parse::<usize>() {
                Ok(n) if n > 0 => Ok(Task::ModelExpand(ModelCount::N(n))),
                _ => Err(malformed()),
            }
        }
        Some(dir @ ("minimize" | "maximize")) => {
            let rest = words[1..].join(" ");
            let syn = parse_term(&rest).map_err(|_| malformed())?;
            let h = resolve_term(&syn, vocab, &Scope::new()).map_err(|e| TranslateError::GoalTerm(e.to_string()))?;
            let (Some(term), Some(ty)) = (h.term(), h.ty()) else {
                return Err(TranslateError::NonNumericObjective(rest));
            };
            if !ty.is_numeric(vocab) {
                return Err(TranslateError::NonNumericObjective(rest));
            }
            Ok(if dir == "minimize" { Task::Minimize(term) } else { Task::Maximize(term) })
        }
        _ => Err(malformed()),
    }
}

pub fn translate_goal(block: &TableBlock, vocab: &Vocabulary) -> Result<Task> {
    let cell = block.body.first().and_then(|r| r.first()).map(String::as_str).unwrap_or("");
    parse_goal(cell, vocab).map_err(|e| Error::from(e).at(&block.name, block.body_row(0), Some(block.file_column(0))))
}
