//! Branch and bound: split four employees into two balanced groups with
//! maximal diversity.

use cdmn::cli::render_model;
use cdmn::engine::{solve, SolveResult};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = cdmn::compile_str(include_str!("../models/balanced_assignment.cdmn"))?;
    println!("goal: {}", model.task);
    if let SolveResult::Optimum { model: best, value } = solve(&model, &Default::default())?.result {
        println!("optimum {value}");
        print!("{}", render_model(&best, &model));
    }
    Ok(())
}
