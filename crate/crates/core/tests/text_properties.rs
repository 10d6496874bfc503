mod common;

use std::collections::BTreeMap;

use actionable::textproc::{extract_markers, readability_counts, syllables, tokenize, EasyWords};
use common::any_text;
use proptest::prelude::*;

proptest! {
    #[test]
    fn token_counts_are_consistent(text in any_text()) {
        let doc = tokenize(&text);
        prop_assert_eq!(doc.term_freq.values().map(|&n| n as usize).sum::<usize>(), doc.tokens.len());
        prop_assert_eq!(doc.word_count, doc.tokens.len());
        prop_assert_eq!(doc.char_length, text.chars().count());
        prop_assert!(doc.tokens.iter().all(|t| !t.is_empty() && !t.chars().any(char::is_whitespace)));
    }

    #[test]
    fn tokenize_is_idempotent_on_joined_tokens(text in any_text()) {
        let doc = tokenize(&text);
        prop_assert_eq!(&doc, &tokenize(&text));
        let again = tokenize(&doc.tokens.join(" "));
        prop_assert_eq!(again.tokens, doc.tokens);
    }

    #[test]
    fn marker_ordinals_are_consecutive(text in any_text()) {
        let markers = extract_markers(&text);
        let length = text.chars().count();
        let mut next: BTreeMap<&str, usize> = BTreeMap::new();
        let mut last = None;
        for m in &markers {
            prop_assert!(m.char_index < length);
            let expected = next.entry(m.marker.symbol()).or_insert(0);
            prop_assert_eq!(m.ordinal, *expected);
            *expected += 1;
            prop_assert!(last.map_or(true, |p| p <= m.char_index));
            last = Some(m.char_index);
        }
    }

    #[test]
    fn readability_counts_are_bounded(text in any_text()) {
        let c = readability_counts(&text, &EasyWords::bundled());
        prop_assert!(c.difficult_words <= c.words);
        prop_assert!(c.syllables >= c.words);
    }

    #[test]
    fn every_word_has_a_syllable(word in "[a-zA-Zéè]{1,15}") {
        prop_assert!(syllables(&word) >= 1);
    }
}
