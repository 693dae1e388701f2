//! Cross-check the solver against brute-force enumeration.

use std::collections::BTreeSet;

use cdmn::engine::{oracle_enumerate, solve, SolveResult};
use cdmn::{ModelCount, Task};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut model = cdmn::compile_str(include_str!("../models/monkey_business.cdmn"))?;
    model.task = Task::ModelExpand(ModelCount::All);
    let solved: BTreeSet<_> = match solve(&model, &Default::default())?.result {
        SolveResult::Models { models, .. } => models.into_iter().collect(),
        _ => BTreeSet::new(),
    };
    let oracle: BTreeSet<_> = oracle_enumerate(&model)?.into_iter().collect();
    println!("solver {} models, oracle {} models, equal: {}", solved.len(), oracle.len(), solved == oracle);
    Ok(())
}
