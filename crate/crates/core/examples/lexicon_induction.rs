// Per-domain keyword lexicons from a synthetic corpus, plus a polarity
// lookup in the bundled sentiment sample.

use actionable::corpus::{generate_synthetic, DomainKey, Label, Source};
use actionable::lexicon::{build_lexicons, build_term_stats, export_top_keywords, SentimentLexicon, MIN_DOC_FREQ};
use actionable::pipeline::basic_scenario;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = generate_synthetic(&basic_scenario(), 11)?;
    let domain = DomainKey::full("acme", "en", Source::Tw);
    let stats_a = build_term_stats(&corpus, &domain, Label::Actionable)?;
    let stats_n = build_term_stats(&corpus, &domain, Label::NonActionable)?;
    let lexicons = build_lexicons(&stats_a, &stats_n, MIN_DOC_FREQ)?;

    for label in Label::BOTH {
        println!("{domain} {label}:");
        let scores = lexicons.get(label).scores.iter().map(|(t, s)| (t.as_str(), *s));
        for row in export_top_keywords(scores, 5) {
            println!("  {row}");
        }
    }
    // A term carries weight in at most one of the two lexicons.
    for (term, _) in lexicons.actionable.sorted() {
        assert_eq!(lexicons.non_actionable.score(term), 0.0);
    }

    let sentiment = SentimentLexicon::bundled_sample();
    for word in ["good", "terrible", "phone"] {
        println!("{word}: +{} -{}", sentiment.positive(word), sentiment.negative(word));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
