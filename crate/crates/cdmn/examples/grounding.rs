//! Inspect the ground constraints produced for a model.

use cdmn::engine::ground;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = cdmn::compile_str(include_str!("../models/map_coloring.cdmn"))?;
    let problem = ground(&model, 100_000)?;
    println!("{} cells", problem.cells.len());
    for cell in &problem.cells {
        println!("  {cell} in {} values", cell.domain.len());
    }
    for c in &problem.constraints {
        println!("{}", problem.show(c));
    }
    Ok(())
}
