//! Split a workbook into its table blocks and print each one back.

use cdmn::grid::{parse_grid, segment_blocks};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = parse_grid(include_str!("../models/map_coloring.cdmn"))?;
    for block in segment_blocks(&grid)? {
        let policy = block.hit_policy.map(|h| h.token()).unwrap_or("-");
        println!(
            "{:?} `{}` ({policy}): {} inputs, {} outputs, {} rows",
            block.kind,
            block.name,
            block.n_inputs,
            block.n_outputs,
            block.body.len()
        );
    }
    Ok(())
}
