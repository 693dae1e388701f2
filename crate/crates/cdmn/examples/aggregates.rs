//! Sum (C+) and count (C#) tables.

use cdmn::cli::render_model;
use cdmn::engine::{solve, SolveResult};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in [
        ("shopping", include_str!("../models/shopping.cdmn")),
        ("invitations", include_str!("../models/invitations.cdmn")),
    ] {
        let model = cdmn::compile_str(text)?;
        println!("{name}: {}", model.theory.sentences[0]);
        if let SolveResult::Models { models, .. } = solve(&model, &Default::default())?.result {
            print!("{}", render_model(&models[0], &model));
        }
    }
    Ok(())
}
