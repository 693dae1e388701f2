//! Model expansion: colour a map so that neighbours differ, then count
//! every colouring.

use cdmn::cli::render_model;
use cdmn::engine::{solve, SolveResult};
use cdmn::{ModelCount, Task};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut model = cdmn::compile_str(include_str!("../models/map_coloring.cdmn"))?;
    let solution = solve(&model, &Default::default())?;
    if let SolveResult::Models { models, .. } = &solution.result {
        print!("{}", render_model(&models[0], &model));
    }
    model.task = Task::ModelExpand(ModelCount::All);
    let solution = solve(&model, &Default::default())?;
    if let SolveResult::Models { models, .. } = &solution.result {
        println!("{} colourings, {} search nodes", models.len(), solution.stats.nodes);
    }
    Ok(())
}
