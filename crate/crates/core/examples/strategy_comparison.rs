// Held-out comparison of strategies A-D on the basic synthetic scenario,
// plus feature diagnostics on its training split.

use std::sync::Arc;

use actionable::corpus::generate_synthetic;
use actionable::metrics::render_diagnostics;
use actionable::pipeline::{basic_scenario, compare_strategies, feature_diagnostics, prepare, render_strategy_table};
use actionable::resources::SharedResources;
use actionable::selection::SelectionConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_synthetic(&basic_scenario(), 42)?;
    let prepared = prepare(&corpus, Arc::new(SharedResources::bundled()), 42, 0.2)?;
    let outcomes = compare_strategies(&prepared, &SelectionConfig { seed: 42, ..Default::default() }, 0)?;
    print!("{}", render_strategy_table(&outcomes));
    for o in &outcomes {
        assert!(o.unavailable.is_empty());
    }
    let rows = feature_diagnostics(&prepared.train, 2);
    print!("{}", render_diagnostics(&rows[..8]));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
