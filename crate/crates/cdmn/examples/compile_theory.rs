//! Compile a decision table into first-order sentences.

fn main() -> Result<(), cdmn::Error> {
    let model = cdmn::compile_str(include_str!("../models/adult.cdmn"))?;
    for sig in model.vocabulary.symbols.values() {
        println!("symbol {}", sig.render());
    }
    for sentence in &model.theory.sentences {
        println!("{sentence}");
    }
    println!("goal: {}", model.task);
    Ok(())
}
