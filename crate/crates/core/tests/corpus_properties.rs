mod common;

use std::collections::BTreeMap;

use actionable::corpus::{balance, generate_synthetic, ingest, split, LabeledCorpus};
use actionable::pipeline::basic_scenario;
use common::small_corpus;
use proptest::prelude::*;

fn id_multiset(corpus: &LabeledCorpus) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for m in corpus.messages() {
        *out.entry(m.id.clone()).or_insert(0) += 1;
    }
    out
}

proptest! {
    #[test]
    fn balance_equalizes_every_domain(corpus in small_corpus(), seed in any::<u64>()) {
        let balanced = balance(&corpus, seed);
        for key in balanced.corpus.domains() {
            let (a, n) = balanced.corpus.label_counts(key);
            prop_assert_eq!(a, n);
            prop_assert_eq!(a, {
                let (a0, n0) = corpus.label_counts(key);
                a0.min(n0)
            });
        }
        for key in &balanced.dropped {
            let (a, n) = corpus.label_counts(key);
            prop_assert!(a == 0 || n == 0);
        }
    }

    #[test]
    fn split_is_a_partition(corpus in small_corpus(), seed in any::<u64>(), fraction in 0.05f64..0.95) {
        let parts = split(&corpus, fraction, seed).unwrap();
        let mut joined = id_multiset(&parts.train);
        for (id, n) in id_multiset(&parts.eval) {
            *joined.entry(id).or_insert(0) += n;
        }
        prop_assert_eq!(joined, id_multiset(&corpus));
        for key in parts.eval.domains() {
            let (a, n) = parts.train.label_counts(key);
            prop_assert!(a >= 1 && n >= 1);
        }
    }

    #[test]
    fn ingest_is_idempotent_on_its_output(corpus in small_corpus()) {
        prop_assume!(!corpus.is_empty());
        let mut first = Vec::new();
        corpus.write_jsonl(&mut first).unwrap();
        let once = ingest(first.as_slice()).unwrap();
        prop_assert_eq!(once.report.rejected(), 0);
        let mut second = Vec::new();
        once.corpus.write_jsonl(&mut second).unwrap();
        prop_assert_eq!(&first, &second);
        prop_assert_eq!(once.corpus.messages(), corpus.messages());
    }
}

#[test]
fn synthetic_generation_is_seeded() {
    let render = |seed| {
        let mut out = Vec::new();
        generate_synthetic(&basic_scenario(), seed).unwrap().write_jsonl(&mut out).unwrap();
        out
    };
    assert_eq!(render(9), render(9));
    assert_ne!(render(9), render(10));
}
