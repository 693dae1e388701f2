//! Quantified constraint tables (E*): three monkeys, no shared fruit or
//! place, and whoever sits on the rock eats the apple.

use cdmn::cli::render_model;
use cdmn::engine::{solve, SolveResult};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = cdmn::compile_str(include_str!("../models/monkey_business.cdmn"))?;
    match solve(&model, &Default::default())?.result {
        SolveResult::Models { models, exhausted } => {
            print!("{}", render_model(&models[0], &model));
            println!("{} models (exhausted: {exhausted})", models.len());
        }
        other => println!("{other:?}"),
    }
    Ok(())
}
