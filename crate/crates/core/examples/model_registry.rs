// Select a model per domain, persist the registry, reload it and classify.

use std::sync::Arc;

use actionable::corpus::{generate_synthetic, DomainKey, Source};
use actionable::features::MessageAnalysis;
use actionable::pipeline::{basic_scenario, candidate_sets, prepare, select_all};
use actionable::resources::SharedResources;
use actionable::selection::{ModelRegistry, RegistryHandle, SelectionConfig, Strategy};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shared = Arc::new(SharedResources::bundled());
    let corpus = generate_synthetic(&basic_scenario(), 8)?;
    let prepared = prepare(&corpus, shared.clone(), 8, 0.2)?;
    let sets = candidate_sets(&prepared.train, &SelectionConfig::default());
    let (registry, unavailable) = select_all(&sets, Strategy::C, 0);
    assert!(unavailable.is_empty());

    let dir = tempfile::tempdir()?;
    let path = registry.persist(dir.path())?;
    let loaded = ModelRegistry::load(dir.path())?;
    assert_eq!(loaded, registry);
    println!("{} models in {}", loaded.len(), path.display());

    let handle = RegistryHandle::new(loaded);
    let snapshot = handle.snapshot();
    let domain = DomainKey::full("acme", "en", Source::Tw);
    let model = snapshot.get(&domain).ok_or("missing domain")?;
    let message = corpus.messages_in(&domain).next().ok_or("empty domain")?;
    let p = model.predict(&MessageAnalysis::new(&message.text, "en", &shared));
    println!("{} -> {} ({:.3}), truth {}", message.text, p.label, p.score, message.label);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
