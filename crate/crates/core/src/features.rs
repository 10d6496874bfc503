//! Per-message sparse feature vectors.
//!
//! Every feature name comes from the fixed [`Feature`] registry. Families:
//! lexicon dot products, positional marker features, readability (English
//! only), emoticon presence and amplitude, and document length.

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use crate::corpus::Message;
use crate::learners::SparseVector;
use crate::lexicon::{lexicon_terms, DomainLexicons, SentimentLexicon};
use crate::resources::SharedResources;
use crate::textproc::{
    detect_emoticons, extract_markers, readability_counts, tokenize, EmoticonHit, Marker, MarkerOccurrence,
    Polarity, ReadabilityCounts, TokenizedDocument, FALLBACK_AMPLITUDE,
};

macro_rules! registry {
    ($($variant:ident => $name:literal,)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Feature {
            $($variant,)*
        }

        impl Feature {
            pub const ALL: &'static [Feature] = &[$(Feature::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Feature::$variant => $name,)*
                }
            }
        }
    };
}

registry! {
    LexActionable => "lex.actionable",
    LexNonActionable => "lex.non_actionable",
    LexPositive => "lex.positive",
    LexNegative => "lex.negative",
    Question0 => "mark.?-0",
    Question1 => "mark.?-1",
    Exclaim0 => "mark.!-0",
    Exclaim1 => "mark.!-1",
    Rt0 => "mark.rt-0",
    Rt1 => "mark.rt-1",
    Via0 => "mark.via-0",
    Via1 => "mark.via-1",
    At0 => "mark.@-0",
    At1 => "mark.@-1",
    Hash0 => "mark.#-0",
    Hash1 => "mark.#-1",
    HasUrl => "mark.has-url",
    DaleChall => "read.dale_chall",
    FleschKincaid => "read.flesch_kincaid",
    EmoHasAny => "emo.has_any",
    EmoPositive => "emo.positive",
    EmoNegative => "emo.negative",
    Chars100 => "len.chars_100",
    Chars1000 => "len.chars_1000",
    Gt10Chars => "len.gt10c",
    Gt100Chars => "len.gt100c",
    Gt10Words => "len.gt10w",
    Gt100Words => "len.gt100w",
}

impl Feature {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Feature> {
        Feature::ALL.get(i).copied()
    }

    pub fn from_name(name: &str) -> Option<Feature> {
        Feature::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Positional feature for the first two occurrences of a marker. Urls map
    /// to the binary `mark.has-url` instead.
    pub fn for_marker(marker: Marker, ordinal: usize) -> Option<Feature> {
        use Feature::*;
        let pair = match marker {
            Marker::Question => [Question0, Question1],
            Marker::Exclaim => [Exclaim0, Exclaim1],
            Marker::Rt => [Rt0, Rt1],
            Marker::Via => [Via0, Via1],
            Marker::At => [At0, At1],
            Marker::Hash => [Hash0, Hash1],
            Marker::Url => return Some(HasUrl),
        };
        pair.get(ordinal).copied()
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Number of registry entries.
pub const FEATURE_COUNT: usize = Feature::ALL.len();

/// Sparse feature map, sorted by registry order. Absent features are 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FeatureVector {
    values: Vec<(Feature, f64)>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, feature: Feature, value: f64) {
        match self.values.binary_search_by_key(&feature, |(f, _)| *f) {
            Ok(i) => self.values[i].1 = value,
            Err(i) => self.values.insert(i, (feature, value)),
        }
    }

    pub fn extend(&mut self, values: impl IntoIterator<Item = (Feature, f64)>) {
        for (f, v) in values {
            self.set(f, v);
        }
    }

    pub fn get(&self, feature: Feature) -> Option<f64> {
        self.values
            .binary_search_by_key(&feature, |(f, _)| *f)
            .ok()
            .map(|i| self.values[i].1)
    }

    pub fn value(&self, feature: Feature) -> f64 {
        self.get(feature).unwrap_or(0.0)
    }

    pub fn contains(&self, feature: Feature) -> bool {
        self.get(feature).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Feature, f64)> + '_ {
        self.values.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn fires(&self, feature: Feature) -> bool {
        self.value(feature) != 0.0
    }

    pub fn to_sparse(&self) -> SparseVector {
        SparseVector::new(self.values.iter().map(|(f, v)| (f.index() as u32, *v)).collect())
    }
}

impl FromIterator<(Feature, f64)> for FeatureVector {
    fn from_iter<T: IntoIterator<Item = (Feature, f64)>>(iter: T) -> Self {
        let mut v = FeatureVector::new();
        v.extend(iter);
        v
    }
}

/// `message_id<TAB>feature<TAB>value` rows.
pub fn write_feature_dump<W: Write>(mut w: W, id: &str, vector: &FeatureVector) -> io::Result<()> {
    for (f, v) in vector.iter() {
        writeln!(w, "{id}\t{f}\t{v}")?;
    }
    Ok(())
}

/// Lexicons and shared resources resolved for one classification domain.
#[derive(Clone, Debug)]
pub struct DomainResources {
    pub lexicons: Arc<DomainLexicons>,
    pub shared: Arc<SharedResources>,
}

/// `(tf . w) / |d|`, 0 for an empty document.
pub fn lexicon_dot(doc: &TokenizedDocument, score: impl Fn(&str) -> f64) -> f64 {
    if doc.word_count == 0 {
        return 0.0;
    }
    let dot: f64 = lexicon_terms(doc)
        .into_iter()
        .map(|(t, n)| n as f64 * score(t))
        .sum();
    dot / doc.word_count as f64
}

fn sentiment_features(doc: &TokenizedDocument, sentiment: &SentimentLexicon) -> [(Feature, f64); 2] {
    [
        (Feature::LexPositive, lexicon_dot(doc, |t| sentiment.positive(t))),
        (Feature::LexNegative, lexicon_dot(doc, |t| sentiment.negative(t))),
    ]
}

fn domain_lexicon_features(doc: &TokenizedDocument, lexicons: &DomainLexicons) -> [(Feature, f64); 2] {
    [
        (Feature::LexActionable, lexicon_dot(doc, |t| lexicons.actionable.score(t))),
        (Feature::LexNonActionable, lexicon_dot(doc, |t| lexicons.non_actionable.score(t))),
    ]
}

pub fn lexicon_features(doc: &TokenizedDocument, resources: &DomainResources) -> [(Feature, f64); 4] {
    let [a, n] = domain_lexicon_features(doc, &resources.lexicons);
    let [p, q] = sentiment_features(doc, &resources.shared.sentiment);
    [a, n, p, q]
}

/// Positional values for ordinals 0 and 1: `1 - index/length` for `@`,
/// `index/length` for the other markers; urls give binary `mark.has-url`.
pub fn marker_features(markers: &[MarkerOccurrence], char_length: usize) -> Vec<(Feature, f64)> {
    let mut out: Vec<(Feature, f64)> = Vec::new();
    for occ in markers {
        let Some(feature) = Feature::for_marker(occ.marker, occ.ordinal) else {
            continue;
        };
        if out.iter().any(|(f, _)| *f == feature) {
            continue;
        }
        let value = match occ.marker {
            Marker::Url => 1.0,
            _ if char_length == 0 => continue,
            Marker::At => 1.0 - occ.char_index as f64 / char_length as f64,
            _ => occ.char_index as f64 / char_length as f64,
        };
        out.push((feature, value));
    }
    out
}

pub fn dale_chall_raw(c: &ReadabilityCounts) -> f64 {
    0.159 * (c.difficult_words as f64 / c.words as f64) + 0.0496 * (c.words as f64 / c.sentences as f64)
}

pub fn flesch_kincaid_raw(c: &ReadabilityCounts) -> f64 {
    0.39 * (c.words as f64 / c.sentences as f64) + 11.8 * (c.syllables as f64 / c.words as f64) - 15.59
}

pub const DALE_CHALL_MAX: f64 = 10.0;
pub const FLESCH_KINCAID_MAX: f64 = 18.0;

/// Both readability scores rescaled to [0, 1]; `None` unless the language is
/// English and the text has words.
pub fn readability_features(counts: &ReadabilityCounts, language: &str) -> Option<[(Feature, f64); 2]> {
    if language != "en" || counts.words == 0 {
        return None;
    }
    Some([
        (Feature::DaleChall, dale_chall_raw(counts).clamp(0.0, DALE_CHALL_MAX) / DALE_CHALL_MAX),
        (Feature::FleschKincaid, flesch_kincaid_raw(counts).clamp(0.0, FLESCH_KINCAID_MAX) / FLESCH_KINCAID_MAX),
    ])
}

/// Presence plus clamped positive / negative amplitude. A described hit adds
/// the dominant side of its description's sentiment sum; hits without a
/// usable description add the fixed fallback amplitude to their polarity.
pub fn emoticon_features(hits: &[EmoticonHit], sentiment: &SentimentLexicon) -> [(Feature, f64); 3] {
    let (mut pos, mut neg) = (0.0, 0.0);
    for h in hits {
        let (p, n) = h
            .description
            .as_deref()
            .map(|d| sentiment.description_amplitude(d))
            .unwrap_or((0.0, 0.0));
        if p > n {
            pos += p;
        } else if n > p {
            neg += n;
        } else {
            match h.polarity {
                Polarity::Positive => pos += FALLBACK_AMPLITUDE,
                Polarity::Negative => neg += FALLBACK_AMPLITUDE,
                Polarity::Neutral | Polarity::Unknown => {}
            }
        }
    }
    [
        (Feature::EmoHasAny, if hits.is_empty() { 0.0 } else { 1.0 }),
        (Feature::EmoPositive, pos.clamp(0.0, 1.0)),
        (Feature::EmoNegative, neg.clamp(0.0, 1.0)),
    ]
}

pub fn length_features(doc: &TokenizedDocument) -> [(Feature, f64); 6] {
    let chars = doc.char_length as f64;
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    [
        (Feature::Chars100, chars / 100.0),
        (Feature::Chars1000, chars / 1000.0),
        (Feature::Gt10Chars, flag(doc.char_length > 10)),
        (Feature::Gt100Chars, flag(doc.char_length > 100)),
        (Feature::Gt10Words, flag(doc.word_count > 10)),
        (Feature::Gt100Words, flag(doc.word_count > 100)),
    ]
}

/// The domain-independent part of a message's features, computed once and
/// combined with any domain's lexicons.
#[derive(Clone, Debug, PartialEq)]
pub struct MessageAnalysis {
    pub doc: TokenizedDocument,
    base: Vec<(Feature, f64)>,
}

impl MessageAnalysis {
    pub fn new(text: &str, language: &str, shared: &SharedResources) -> Self {
        let doc = tokenize(text);
        let mut base: Vec<(Feature, f64)> = Vec::with_capacity(FEATURE_COUNT);
        base.extend(sentiment_features(&doc, &shared.sentiment));
        base.extend(marker_features(&extract_markers(text), doc.char_length));
        if let Some(r) = readability_features(&readability_counts(text, &shared.easy_words), language) {
            base.extend(r);
        }
        let hits = detect_emoticons(text, &shared.catalogs);
        if !hits.is_empty() {
            base.extend(emoticon_features(&hits, &shared.sentiment));
        }
        base.extend(length_features(&doc));
        MessageAnalysis { doc, base }
    }

    pub fn of_message(message: &Message, shared: &SharedResources) -> Self {
        Self::new(&message.text, &message.language, shared)
    }

    pub fn features(&self, lexicons: &DomainLexicons) -> FeatureVector {
        let mut v: FeatureVector = self.base.iter().copied().collect();
        v.extend(domain_lexicon_features(&self.doc, lexicons));
        v
    }
}

pub fn extract(message: &Message, resources: &DomainResources) -> FeatureVector {
    MessageAnalysis::of_message(message, &resources.shared).features(&resources.lexicons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DomainKey, Label, Source};
    use crate::lexicon::{Lexicon, StatsSummary};
    use crate::textproc::EmoticonKind;

    fn lexicons(act: &[(&str, f64)], non: &[(&str, f64)]) -> DomainLexicons {
        let key = DomainKey::full("acme", "en", Source::Tw);
        let mk = |label, pairs: &[(&str, f64)]| Lexicon {
            domain: key.clone(),
            label,
            scores: pairs.iter().map(|(t, s)| (t.to_string(), *s)).collect(),
        };
        let stats = StatsSummary {
            doc_count: 1,
            p95_count: 1,
        };
        DomainLexicons {
            domain: key.clone(),
            actionable: mk(Label::Actionable, act),
            non_actionable: mk(Label::NonActionable, non),
            actionable_stats: stats,
            non_actionable_stats: stats,
        }
    }

    fn resources(act: &[(&str, f64)]) -> DomainResources {
        DomainResources {
            lexicons: Arc::new(lexicons(act, &[("news", 1.0)])),
            shared: Arc::new(SharedResources::bundled()),
        }
    }

    fn message(text: &str, language: &str) -> Message {
        Message {
            id: "m".into(),
            text: text.into(),
            company: "acme".into(),
            language: language.into(),
            source: Source::Tw,
            label: Label::Actionable,
            timestamp: None,
        }
    }

    #[test]
    fn registry_is_consistent() {
        assert_eq!(FEATURE_COUNT, 28);
        for (i, f) in Feature::ALL.iter().enumerate() {
            assert_eq!(f.index(), i);
            assert_eq!(Feature::from_name(f.name()), Some(*f));
            assert_eq!(Feature::from_index(i), Some(*f));
        }
    }

    #[test]
    fn lexicon_dot_product() {
        let res = resources(&[("password", 0.5), ("reset", 0.2)]);
        let doc = tokenize("password reset password");
        let [(f, v), (_, non), _, _] = lexicon_features(&doc, &res);
        assert_eq!(f, Feature::LexActionable);
        assert!((v - 0.4).abs() < 1e-12);
        assert_eq!(non, 0.0);
        let empty = lexicon_features(&tokenize(""), &res);
        assert!(empty.iter().all(|(_, v)| *v == 0.0));
    }

    #[test]
    fn marker_positions() {
        let text = "@acme help?";
        let m = marker_features(&extract_markers(text), text.chars().count());
        assert_eq!(m, vec![(Feature::At0, 1.0), (Feature::Question0, 10.0 / 11.0)]);
        let text = "#a bc #d e"; // '#' at 0 and 6, length 10
        let m = marker_features(&extract_markers(text), 10);
        assert_eq!(m, vec![(Feature::Hash0, 0.0), (Feature::Hash1, 0.6)]);
    }

    #[test]
    fn marker_ordinals_beyond_one_ignored() {
        let text = "a?b?c?d";
        let m = marker_features(&extract_markers(text), 7);
        assert_eq!(m.len(), 2);
        let url = marker_features(&extract_markers("x http://a.b http://c.d"), 23);
        assert_eq!(url, vec![(Feature::HasUrl, 1.0)]);
    }

    #[test]
    fn dale_chall_as_printed() {
        let c = ReadabilityCounts {
            sentences: 1,
            words: 10,
            difficult_words: 2,
            syllables: 13,
        };
        assert!((dale_chall_raw(&c) - 0.5278).abs() < 1e-12);
        assert!((flesch_kincaid_raw(&c) - 3.65).abs() < 1e-12);
        let [(_, dc), (_, fk)] = readability_features(&c, "en").unwrap();
        assert!((dc - 0.05278).abs() < 1e-12);
        assert!((fk - 3.65 / 18.0).abs() < 1e-12);
        assert!(readability_features(&c, "es").is_none());
        assert!(readability_features(&ReadabilityCounts::default(), "en").is_none());
    }

    #[test]
    fn readability_clamps() {
        let c = ReadabilityCounts {
            sentences: 1,
            words: 1,
            difficult_words: 0,
            syllables: 1,
        };
        // 0.39 + 11.8 - 15.59 < 0
        let [_, (_, fk)] = readability_features(&c, "en").unwrap();
        assert_eq!(fk, 0.0);
    }

    fn hit(description: Option<&str>, polarity: Polarity) -> EmoticonHit {
        EmoticonHit {
            surface: "x".into(),
            kind: EmoticonKind::Emoji,
            description: description.map(String::from),
            polarity,
            score: 0.0,
        }
    }

    #[test]
    fn emoticon_amplitudes() {
        let sentiment = SentimentLexicon {
            positive: [("grinning".to_string(), 0.4), ("face".to_string(), 0.1)].into_iter().collect(),
            negative: Default::default(),
        };
        let none = emoticon_features(&[], &sentiment);
        assert!(none.iter().all(|(_, v)| *v == 0.0));
        let fb = emoticon_features(&[hit(None, Polarity::Negative)], &sentiment);
        assert_eq!(fb.map(|(_, v)| v), [1.0, 0.0, 0.5]);
        let em = emoticon_features(&[hit(Some("grinning face"), Polarity::Neutral)], &sentiment);
        assert!((em[1].1 - 0.5).abs() < 1e-12);
        let many = emoticon_features(&vec![hit(None, Polarity::Positive); 5], &sentiment);
        assert_eq!(many[1].1, 1.0);
        let unknown = emoticon_features(&[hit(None, Polarity::Unknown)], &sentiment);
        assert_eq!(unknown.map(|(_, v)| v), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn length_values() {
        let text = format!("{} {}", "a".repeat(50), "b ".repeat(24).trim());
        let doc = tokenize(&text);
        assert_eq!(doc.char_length, 98);
        let mut doc = tokenize(&"x".repeat(100));
        doc.word_count = 18;
        let l = length_features(&doc);
        assert_eq!(l.map(|(_, v)| v), [1.0, 0.1, 1.0, 0.0, 1.0, 0.0]);
        assert!(length_features(&tokenize("")).iter().all(|(_, v)| *v == 0.0));
        assert_eq!(length_features(&tokenize(&"y".repeat(250)))[0].1, 2.5);
    }

    #[test]
    fn extract_without_markers_has_lexicon_and_length_only() {
        let v = extract(&message("password reset please", "es"), &resources(&[("password", 0.5)]));
        let names: Vec<&str> = v.iter().map(|(f, _)| f.name()).collect();
        assert!(names.iter().all(|n| n.starts_with("lex.") || n.starts_with("len.")), "{names:?}");
        assert_eq!(v.len(), 10);
    }

    #[test]
    fn extract_domain_locality_and_determinism() {
        let m = message("@acme my password broke :( http://x.co", "en");
        let a = extract(&m, &resources(&[("password", 0.5)]));
        let b = extract(&m, &resources(&[("broke", 0.9)]));
        assert_eq!(a, extract(&m, &resources(&[("password", 0.5)])));
        for (f, v) in a.iter() {
            if f != Feature::LexActionable {
                assert_eq!(b.get(f), Some(v), "{f}");
            }
        }
        assert_ne!(a.value(Feature::LexActionable), b.value(Feature::LexActionable));
        assert_eq!(a.value(Feature::EmoHasAny), 1.0);
        assert!(a.value(Feature::EmoNegative) > 0.0);
        assert_eq!(a.value(Feature::HasUrl), 1.0);
        assert!(a.contains(Feature::DaleChall));
    }

    #[test]
    fn feature_dump_rows() {
        let v: FeatureVector = [(Feature::HasUrl, 1.0), (Feature::LexActionable, 0.25)].into_iter().collect();
        let mut buf = Vec::new();
        write_feature_dump(&mut buf, "m1", &v).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "m1\tlex.actionable\t0.25\nm1\tmark.has-url\t1\n");
    }
}
