#![allow(dead_code)]

use actionable::corpus::{Label, LabeledCorpus, Message, Source};
use proptest::prelude::*;

/// Fragments that exercise every text-processing path: words, markers, urls,
/// emoticons, emoji sequences, RTL script and zero-width characters.
pub const FRAGMENTS: &[&str] = &[
    "phone", "won't", "Charge", "café", "naïve", "RT", "via", "@acme", "#help", "#", "@", "?", "!", "?!",
    "http://t.co/x1", "www.example.com/a?b", ":)", ":-(", ";P", "(T_T)", "(^_^)", "<3", "😡", "👍🏽", "👨‍👩‍👧",
    "🇪🇸", "مرحبا", "שלום", "\u{200b}", "\u{200d}", "\u{200f}", "\u{feff}", "e\u{301}", "...", "12:30", "Ünïcödé",
    "x", "-", "'", "\"", "\t", "\n",
];

pub fn fragment_text() -> impl Strategy<Value = String> {
    prop::collection::vec((prop::sample::select(FRAGMENTS), prop::bool::ANY), 0..24).prop_map(|parts| {
        let mut s = String::new();
        for (p, space) in parts {
            s.push_str(p);
            if space {
                s.push(' ');
            }
        }
        s
    })
}

/// Either structured fragments or arbitrary unicode.
pub fn any_text() -> impl Strategy<Value = String> {
    prop_oneof![fragment_text(), "\\PC{0,60}", any::<String>()]
}

pub fn message(id: usize, company: &str, language: &str, source: Source, label: Label, text: &str) -> Message {
    Message {
        id: format!("m{id}"),
        text: text.to_string(),
        company: company.to_string(),
        language: language.to_string(),
        source,
        label,
        timestamp: None,
    }
}

/// A corpus over a few companies and languages with arbitrary class sizes.
pub fn small_corpus() -> impl Strategy<Value = LabeledCorpus> {
    let cell = (0usize..3, 0usize..2, prop::bool::ANY, prop::bool::ANY, 0usize..4);
    prop::collection::vec(cell, 0..120).prop_map(|cells| {
        let messages = cells
            .into_iter()
            .enumerate()
            .map(|(i, (c, l, tw, act, w))| {
                let source = if tw { Source::Tw } else { Source::Fb };
                let label = if act { Label::Actionable } else { Label::NonActionable };
                let text = format!("word{w} other{} msg{i}", (i * 7) % 5);
                message(i, ["acme", "globex", "initech"][c], ["en", "es"][l], source, label, &text)
            })
            .collect();
        LabeledCorpus::from_messages(messages)
    })
}

fn entropy_bits(counts: impl Iterator<Item = usize>, n: usize) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

/// Independent mutual-information oracle: `H(X) + H(Y) - H(X, Y)` from
/// per-sample tallies.
pub fn brute_force_mi(xs: &[bool], ys: &[bool]) -> f64 {
    let n = xs.len();
    if n == 0 {
        return 0.0;
    }
    let mut joint = std::collections::HashMap::new();
    let (mut x1, mut y1) = (0, 0);
    for (&x, &y) in xs.iter().zip(ys) {
        *joint.entry((x, y)).or_insert(0usize) += 1;
        x1 += x as usize;
        y1 += y as usize;
    }
    let hx = entropy_bits([x1, n - x1].into_iter(), n);
    let hy = entropy_bits([y1, n - y1].into_iter(), n);
    let hxy = entropy_bits(joint.into_values(), n);
    hx + hy - hxy
}
