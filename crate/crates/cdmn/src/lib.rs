//! Compiler and finite-domain reasoning engine for cDMN workbooks.
//!
//! A workbook is a comma-separated grid of tables: glossary tables declare
//! types and symbols, decision and constraint tables state the logic, data
//! tables fix an instance and a goal table picks the task. The pipeline is
//!
//! 1. [`grid`]: split the grid into table blocks,
//! 2. [`glossary`]: build the vocabulary,
//! 3. [`expr`]: read headers and cells as terms and formulas,
//! 4. [`translate`]: turn tables into a typed first-order theory ([`fo`]),
//! 5. [`engine`]: ground the theory and search for models.
//!
//! ```
//! let model = cdmn::compile_str(
//!     "Glossary Type\nName,Type,Values\nColor,String,\"Red, Green\"\n\n\
//!      Glossary Constant\nName,Type\nfavourite,Color\n",
//! )
//! .unwrap();
//! let solution = cdmn::engine::solve(&model, &Default::default()).unwrap();
//! assert!(matches!(solution.result, cdmn::engine::SolveResult::Models { .. }));
//! ```

pub mod cli;
pub mod engine;
pub mod error;
pub mod expr;
pub mod fo;
pub mod glossary;
pub mod grid;
pub mod translate;

pub use error::{Error, Location, Result};
pub use translate::{compile, compile_str, CompiledModel, ModelCount, Task};
