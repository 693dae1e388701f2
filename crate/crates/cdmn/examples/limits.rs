//! Resource limits: a node budget, a grounding cap and a stop flag.

use std::sync::atomic::AtomicBool;
use std::sync::Arc;

use cdmn::engine::{solve, SolveConfig};
use cdmn::{ModelCount, Task};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut model = cdmn::compile_str(include_str!("../models/map_coloring.cdmn"))?;
    model.task = Task::ModelExpand(ModelCount::All);
    let configs = [
        ("node budget", SolveConfig { max_nodes: Some(10), ..SolveConfig::default() }),
        ("grounding cap", SolveConfig { max_ground: 4, ..SolveConfig::default() }),
        ("stop flag", SolveConfig { stop: Some(Arc::new(AtomicBool::new(true))), ..SolveConfig::default() }),
    ];
    for (name, cfg) in configs {
        match solve(&model, &cfg) {
            Ok(s) => println!("{name}: finished after {} nodes", s.stats.nodes),
            Err(e) => println!("{name}: {e}"),
        }
    }
    Ok(())
}
