// Sparse feature vectors for messages under one domain's lexicons.

use std::sync::Arc;

use actionable::corpus::{generate_synthetic, DomainKey, Source};
use actionable::features::{extract, write_feature_dump, DomainResources, Feature};
use actionable::lexicon::MIN_DOC_FREQ;
use actionable::pipeline::basic_scenario;
use actionable::resources::SharedResources;
use actionable::selection::AnalyzedCorpus;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shared = Arc::new(SharedResources::bundled());
    let corpus = AnalyzedCorpus::new(generate_synthetic(&basic_scenario(), 3)?, &shared);
    let domain = DomainKey::full("globex", "en", Source::Fb);
    let resources = DomainResources {
        lexicons: Arc::new(corpus.domain_lexicons(&domain, MIN_DOC_FREQ)?),
        shared,
    };

    for message in corpus.corpus.messages_in(&domain).take(3) {
        println!("# {} [{}] {}", message.id, message.label, message.text);
        let vector = extract(message, &resources);
        assert!(vector.iter().all(|(_, v)| v.is_finite()));
        assert!(vector.contains(Feature::Chars100));
        let mut dump = Vec::new();
        write_feature_dump(&mut dump, &message.id, &vector)?;
        print!("{}", String::from_utf8(dump)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
