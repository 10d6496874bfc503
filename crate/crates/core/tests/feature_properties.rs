mod common;

use std::sync::OnceLock;

use actionable::corpus::{DomainKey, Label, Source};
use actionable::features::{marker_features, Feature, MessageAnalysis};
use actionable::lexicon::{lexicons_from_documents, DomainLexicons};
use actionable::resources::SharedResources;
use actionable::textproc::{tokenize, Marker, MarkerOccurrence};
use common::any_text;
use proptest::prelude::*;

const WORDS: &[&str] = &["refund", "broken", "love", "great", "phone", "store", "happy", "terrible", "why", "now"];

fn shared() -> &'static SharedResources {
    static SHARED: OnceLock<SharedResources> = OnceLock::new();
    SHARED.get_or_init(SharedResources::bundled)
}

fn lexicons() -> &'static DomainLexicons {
    static LEX: OnceLock<DomainLexicons> = OnceLock::new();
    LEX.get_or_init(|| {
        let act = ["refund broken why", "refund now phone", "broken phone why", "refund broken"];
        let non = ["love great store", "happy great", "love store now", "great happy phone"];
        let docs: Vec<(Label, _)> = act
            .iter()
            .map(|t| (Label::Actionable, tokenize(t)))
            .chain(non.iter().map(|t| (Label::NonActionable, tokenize(t))))
            .collect();
        let key = DomainKey::full("acme", "en", Source::Tw);
        lexicons_from_documents(&key, docs.iter().map(|(l, d)| (*l, d)), 1).unwrap()
    })
}

const BINARY: &[Feature] = &[
    Feature::HasUrl,
    Feature::EmoHasAny,
    Feature::Gt10Chars,
    Feature::Gt100Chars,
    Feature::Gt10Words,
    Feature::Gt100Words,
];

proptest! {
    #[test]
    fn features_are_finite_and_bounded(text in any_text(), english in any::<bool>()) {
        let language = if english { "en" } else { "es" };
        let v = MessageAnalysis::new(&text, language, shared()).features(lexicons());
        for (feature, value) in v.iter() {
            prop_assert!(value.is_finite(), "{} = {}", feature, value);
            prop_assert!(value >= 0.0, "{} = {}", feature, value);
            if BINARY.contains(&feature) {
                prop_assert!(value == 0.0 || value == 1.0);
            } else if feature.name().starts_with("mark.") || feature.name().starts_with("read.") || feature.name().starts_with("emo.") {
                prop_assert!(value <= 1.0, "{} = {}", feature, value);
            }
        }
        prop_assert_eq!(&v, &MessageAnalysis::new(&text, language, shared()).features(lexicons()));
    }

    #[test]
    fn lexicon_features_ignore_word_order(words in prop::collection::vec(prop::sample::select(WORDS), 1..20).prop_shuffle(), seed in any::<u64>()) {
        let mut permuted = words.clone();
        let n = permuted.len();
        permuted.rotate_left((seed as usize) % n);
        permuted.reverse();
        let a = MessageAnalysis::new(&words.join(" "), "en", shared()).features(lexicons());
        let b = MessageAnalysis::new(&permuted.join(" "), "en", shared()).features(lexicons());
        for f in [Feature::LexActionable, Feature::LexNonActionable, Feature::LexPositive, Feature::LexNegative] {
            prop_assert!((a.value(f) - b.value(f)).abs() <= 1e-12);
        }
    }

    #[test]
    fn marker_positions_move_the_right_way(length in 2usize..500, i in 0usize..500, j in 0usize..500) {
        let (i, j) = (i % length, j % length);
        prop_assume!(i < j);
        let value = |marker, at| {
            marker_features(&[MarkerOccurrence { marker, ordinal: 0, char_index: at }], length)[0].1
        };
        prop_assert!(value(Marker::At, i) > value(Marker::At, j));
        for marker in [Marker::Question, Marker::Exclaim, Marker::Rt, Marker::Via, Marker::Hash] {
            prop_assert!(value(marker, i) < value(marker, j));
            prop_assert!((0.0..=1.0).contains(&value(marker, j)));
        }
    }
}

#[test]
fn registry_is_stable() {
    assert_eq!(Feature::ALL.len(), 28);
    for (i, f) in Feature::ALL.iter().enumerate() {
        assert_eq!(f.index(), i);
        assert_eq!(Feature::from_name(f.name()), Some(*f));
    }
}
