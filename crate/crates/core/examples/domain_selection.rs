// Candidate models over a target's eight generalizations and the four
// selection strategies.

use std::sync::Arc;

use actionable::corpus::{generate_synthetic, DomainKey, Source};
use actionable::pipeline::{basic_scenario, prepare};
use actionable::resources::SharedResources;
use actionable::selection::{enumerate_generalizations, select, selection_census, train_candidates, SelectionConfig, Strategy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_synthetic(&basic_scenario(), 21)?;
    let prepared = prepare(&corpus, Arc::new(SharedResources::bundled()), 21, 0.2)?;
    let target = DomainKey::full("initech", "es", Source::Fb);
    for g in enumerate_generalizations(&target)? {
        println!("{:<10} {g}", g.category());
    }

    let config = SelectionConfig { seed: 21, ..Default::default() };
    let set = train_candidates(&prepared.train, &target, &config)?;
    println!("{} candidates, {} sources skipped", set.candidates.len(), set.skipped.len());
    let mut chosen = Vec::new();
    for strategy in Strategy::ALL {
        let s = select(strategy, &set)?;
        println!("{strategy}: {} {} cv F {:.3}", s.source, s.technique, s.cv_f);
        chosen.push(s);
    }
    assert!(chosen[3].cv_f >= chosen[2].cv_f);
    print!("{}", selection_census(&chosen).render_table());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
