//! Actionability lexicons from adjusted document frequency, and polarity
//! lexicons in SentiWordNet layout.
//!
//! For a (domain, label) pair with document counts `n(t)`:
//!
//! ```text
//! adf(t) = ln(1 + n(t)) / ln(1 + p95)
//! w_a(t) = adf_a(t) - adf_b(t)   if adf_a(t) > adf_b(t), else 0
//! ```
//!
//! where `p95` is the nearest-rank 95th percentile of the document counts of all
//! terms seen under that pair. The score difference keeps every term in at most
//! one of the two label lexicons of a domain.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::corpus::{DomainKey, Label, LabeledCorpus};
use crate::textproc::{tokenize, TokenizedDocument};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("no documents for {domain} / {label}")]
    EmptyStats { domain: DomainKey, label: Label },
    #[error("degenerate term statistics: 95th percentile count is 0")]
    Degenerate,
    #[error("sentiment lexicon has no usable rows ({skipped} skipped)")]
    EmptySentiment { skipped: usize },
    #[error("lexicon file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Lexicon terms of a document with their frequencies. `#tag` and `@handle`
/// tokens also count under their bare form.
pub fn lexicon_terms(doc: &TokenizedDocument) -> BTreeMap<&str, u32> {
    let mut out = BTreeMap::new();
    for (term, &n) in &doc.term_freq {
        *out.entry(term.as_str()).or_insert(0) += n;
        if let Some(bare) = term.strip_prefix(['#', '@']) {
            *out.entry(bare).or_insert(0) += n;
        }
    }
    out
}

/// Nearest-rank 95th percentile: element at 1-based rank `ceil(0.95 * n)` of
/// the ascending counts. Returns 0 for an empty slice.
pub fn nearest_rank_p95(counts: &[u32]) -> u32 {
    if counts.is_empty() {
        return 0;
    }
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let rank = (0.95 * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

#[derive(Clone, Debug, PartialEq)]
pub struct TermStats {
    pub domain: DomainKey,
    pub label: Label,
    pub doc_count: usize,
    pub term_doc_counts: HashMap<String, u32>,
    pub p95_count: u32,
}

impl TermStats {
    pub fn from_documents<'a, I>(domain: DomainKey, label: Label, docs: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = &'a TokenizedDocument>,
    {
        let mut doc_count = 0;
        let mut counts: HashMap<String, u32> = HashMap::new();
        for doc in docs {
            doc_count += 1;
            for term in lexicon_terms(doc).into_keys() {
                match counts.get_mut(term) {
                    Some(n) => *n += 1,
                    None => {
                        counts.insert(term.to_string(), 1);
                    }
                }
            }
        }
        if doc_count == 0 {
            return Err(LexiconError::EmptyStats { domain, label });
        }
        Ok(Self::with_counts(domain, label, doc_count, counts))
    }

    fn with_counts(domain: DomainKey, label: Label, doc_count: usize, counts: HashMap<String, u32>) -> Self {
        let values: Vec<u32> = counts.values().copied().collect();
        TermStats {
            domain,
            label,
            doc_count,
            p95_count: nearest_rank_p95(&values),
            term_doc_counts: counts,
        }
    }

    /// Sums document counts of disjoint parts (e.g. the fully specified
    /// children of a generalized domain) under a new key.
    pub fn merge<'a, I>(domain: DomainKey, label: Label, parts: I) -> Self
    where
        I: IntoIterator<Item = &'a TermStats>,
    {
        let mut doc_count = 0;
        let mut counts: HashMap<String, u32> = HashMap::new();
        for part in parts {
            doc_count += part.doc_count;
            for (t, n) in &part.term_doc_counts {
                *counts.entry(t.clone()).or_insert(0) += n;
            }
        }
        Self::with_counts(domain, label, doc_count, counts)
    }

    pub fn doc_count_of(&self, term: &str) -> u32 {
        self.term_doc_counts.get(term).copied().unwrap_or(0)
    }

    /// Normalized document frequency `n(t) / |M|`.
    pub fn ndf(&self, term: &str) -> f64 {
        self.doc_count_of(term) as f64 / self.doc_count as f64
    }
}

/// Tokenizes the corpus messages under `domain` with `label` and counts them.
pub fn build_term_stats(corpus: &LabeledCorpus, domain: &DomainKey, label: Label) -> Result<TermStats, LexiconError> {
    let docs: Vec<TokenizedDocument> = corpus
        .messages_in(domain)
        .filter(|m| m.label == label)
        .map(|m| tokenize(&m.text))
        .collect();
    TermStats::from_documents(domain.clone(), label, &docs)
}

pub type AdfMap = BTreeMap<String, f64>;

pub fn adf_value(doc_count: u32, p95_count: u32) -> f64 {
    (doc_count as f64).ln_1p() / (p95_count as f64).ln_1p()
}

pub fn compute_adf(stats: &TermStats) -> Result<AdfMap, LexiconError> {
    if stats.p95_count == 0 {
        return Err(LexiconError::Degenerate);
    }
    Ok(stats
        .term_doc_counts
        .iter()
        .map(|(t, &n)| (t.clone(), adf_value(n, stats.p95_count)))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    pub domain: DomainKey,
    pub label: Label,
    /// Strictly positive keyword scores.
    pub scores: HashMap<String, f64>,
}

impl Lexicon {
    pub fn empty(domain: DomainKey, label: Label) -> Self {
        Lexicon {
            domain,
            label,
            scores: HashMap::new(),
        }
    }

    pub fn score(&self, term: &str) -> f64 {
        self.scores.get(term).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Scores sorted by term.
    pub fn sorted(&self) -> Vec<(&str, f64)> {
        let mut v: Vec<(&str, f64)> = self.scores.iter().map(|(t, s)| (t.as_str(), *s)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }
}

/// Positive adf margins over the union vocabulary; missing terms have adf 0.
pub fn compute_keyword_scores(domain: &DomainKey, adf_a: &AdfMap, adf_n: &AdfMap) -> (Lexicon, Lexicon) {
    let mut actionable = Lexicon::empty(domain.clone(), Label::Actionable);
    let mut non_actionable = Lexicon::empty(domain.clone(), Label::NonActionable);
    let vocab: BTreeSet<&String> = adf_a.keys().chain(adf_n.keys()).collect();
    for term in vocab {
        let a = adf_a.get(term).copied().unwrap_or(0.0);
        let n = adf_n.get(term).copied().unwrap_or(0.0);
        if a > n {
            actionable.scores.insert(term.clone(), a - n);
        } else if n > a {
            non_actionable.scores.insert(term.clone(), n - a);
        }
    }
    (actionable, non_actionable)
}

/// Summary carried into lexicon manifests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StatsSummary {
    pub doc_count: usize,
    pub p95_count: u32,
}

impl From<&TermStats> for StatsSummary {
    fn from(s: &TermStats) -> Self {
        StatsSummary {
            doc_count: s.doc_count,
            p95_count: s.p95_count,
        }
    }
}

/// The actionable / non-actionable lexicon pair of one domain.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainLexicons {
    pub domain: DomainKey,
    pub actionable: Lexicon,
    pub non_actionable: Lexicon,
    pub actionable_stats: StatsSummary,
    pub non_actionable_stats: StatsSummary,
}

impl DomainLexicons {
    pub fn get(&self, label: Label) -> &Lexicon {
        match label {
            Label::Actionable => &self.actionable,
            Label::NonActionable => &self.non_actionable,
        }
    }

    pub fn stats(&self, label: Label) -> StatsSummary {
        match label {
            Label::Actionable => self.actionable_stats,
            Label::NonActionable => self.non_actionable_stats,
        }
    }
}

/// Default document-frequency floor for a term to enter its label's lexicon.
pub const MIN_DOC_FREQ: u32 = 2;

/// Builds both label lexicons. A term keeps its score only if it occurs in at
/// least `min_doc_freq` documents of its own label; the percentile and the
/// opposite label's adf always use the full vocabulary.
pub fn build_lexicons(stats_a: &TermStats, stats_n: &TermStats, min_doc_freq: u32) -> Result<DomainLexicons, LexiconError> {
    let adf_a = compute_adf(stats_a)?;
    let adf_n = compute_adf(stats_n)?;
    let (mut actionable, mut non_actionable) = compute_keyword_scores(&stats_a.domain, &adf_a, &adf_n);
    actionable.scores.retain(|t, _| stats_a.doc_count_of(t) >= min_doc_freq);
    non_actionable.scores.retain(|t, _| stats_n.doc_count_of(t) >= min_doc_freq);
    Ok(DomainLexicons {
        domain: stats_a.domain.clone(),
        actionable,
        non_actionable,
        actionable_stats: stats_a.into(),
        non_actionable_stats: stats_n.into(),
    })
}

/// Builds term statistics for both labels from pre-tokenized documents.
pub fn lexicons_from_documents<'a, I>(domain: &DomainKey, docs: I, min_doc_freq: u32) -> Result<DomainLexicons, LexiconError>
where
    I: IntoIterator<Item = (Label, &'a TokenizedDocument)>,
{
    let (mut act, mut non) = (Vec::new(), Vec::new());
    for (label, doc) in docs {
        match label {
            Label::Actionable => act.push(doc),
            Label::NonActionable => non.push(doc),
        }
    }
    let stats_a = TermStats::from_documents(domain.clone(), Label::Actionable, act)?;
    let stats_n = TermStats::from_documents(domain.clone(), Label::NonActionable, non)?;
    build_lexicons(&stats_a, &stats_n, min_doc_freq)
}

/// Writes `term<TAB>score` rows after a manifest line.
pub fn write_lexicon<W: Write>(mut w: W, lexicon: &Lexicon, stats: StatsSummary, built: i64) -> io::Result<()> {
    writeln!(
        w,
        "# lexicon\tdomain={}\tlabel={}\tdoc_count={}\tp95_count={}\tbuilt={}",
        lexicon.domain.key_string(),
        lexicon.label,
        stats.doc_count,
        stats.p95_count,
        built
    )?;
    for (term, score) in lexicon.sorted() {
        writeln!(w, "{term}\t{score}")?;
    }
    Ok(())
}

/// Parses the format written by [`write_lexicon`].
pub fn read_lexicon<R: BufRead>(reader: R) -> Result<(Lexicon, StatsSummary, i64), LexiconError> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or_else(|| LexiconError::Format("missing manifest line".into()))??;
    let mut fields: HashMap<&str, &str> = HashMap::new();
    let mut parts = header.split('\t');
    if parts.next() != Some("# lexicon") {
        return Err(LexiconError::Format(format!("bad manifest line `{header}`")));
    }
    for p in parts {
        if let Some((k, v)) = p.split_once('=') {
            fields.insert(k, v);
        }
    }
    let field = |k: &str| {
        fields
            .get(k)
            .copied()
            .ok_or_else(|| LexiconError::Format(format!("manifest lacks `{k}`")))
    };
    let bad = |k: &str| LexiconError::Format(format!("bad manifest value for `{k}`"));
    let domain: DomainKey = field("domain")?.parse().map_err(|_| bad("domain"))?;
    let label: Label = field("label")?.parse().map_err(|_| bad("label"))?;
    let stats = StatsSummary {
        doc_count: field("doc_count")?.parse().map_err(|_| bad("doc_count"))?,
        p95_count: field("p95_count")?.parse().map_err(|_| bad("p95_count"))?,
    };
    let built: i64 = field("built")?.parse().map_err(|_| bad("built"))?;
    let mut lexicon = Lexicon::empty(domain, label);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (term, score) = line
            .split_once('\t')
            .ok_or_else(|| LexiconError::Format(format!("row {}: expected term<TAB>score", i + 2)))?;
        let score: f64 = score
            .parse()
            .map_err(|_| LexiconError::Format(format!("row {}: bad score", i + 2)))?;
        lexicon.scores.insert(term.to_string(), score);
    }
    Ok((lexicon, stats, built))
}

/// Polarity lexicon: summed PosScore / NegScore per word, ignoring POS.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SentimentLexicon {
    pub positive: HashMap<String, f64>,
    pub negative: HashMap<String, f64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SentimentLoad {
    pub rows: usize,
    pub skipped: usize,
}

impl SentimentLexicon {
    /// The small SentiWordNet-layout sample shipped with the crate.
    pub fn bundled_sample() -> Self {
        load_sentiment_lexicon(include_str!("../data/sentiment_sample.tsv").as_bytes())
            .expect("bundled sample")
            .0
    }

    pub fn positive(&self, term: &str) -> f64 {
        self.positive.get(term).copied().unwrap_or(0.0)
    }

    pub fn negative(&self, term: &str) -> f64 {
        self.negative.get(term).copied().unwrap_or(0.0)
    }

    /// (positive, negative) sums over the whitespace-separated words of a
    /// description.
    pub fn description_amplitude(&self, description: &str) -> (f64, f64) {
        description
            .split_whitespace()
            .map(str::to_lowercase)
            .fold((0.0, 0.0), |(p, n), w| (p + self.positive(&w), n + self.negative(&w)))
    }
}

/// Reads `POS<TAB>ID<TAB>PosScore<TAB>NegScore<TAB>SynsetTerms<TAB>Gloss` rows.
/// Every `word#k` in SynsetTerms contributes its row's scores to `word`.
pub fn load_sentiment_lexicon<R: BufRead>(reader: R) -> Result<(SentimentLexicon, SentimentLoad), LexiconError> {
    let mut lex = SentimentLexicon::default();
    let mut load = SentimentLoad::default();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let parsed = (|| {
            if cols.len() < 5 {
                return None;
            }
            let pos: f64 = cols[2].trim().parse().ok()?;
            let neg: f64 = cols[3].trim().parse().ok()?;
            if !(pos.is_finite() && neg.is_finite() && pos >= 0.0 && neg >= 0.0) {
                return None;
            }
            let terms: Vec<String> = cols[4]
                .split_whitespace()
                .map(|t| t.split_once('#').map_or(t, |(w, _)| w).to_lowercase())
                .filter(|t| !t.is_empty())
                .collect();
            (!terms.is_empty()).then_some((pos, neg, terms))
        })();
        let Some((pos, neg, terms)) = parsed else {
            load.skipped += 1;
            continue;
        };
        load.rows += 1;
        for t in terms {
            *lex.positive.entry(t.clone()).or_insert(0.0) += pos;
            *lex.negative.entry(t).or_insert(0.0) += neg;
        }
    }
    if load.rows == 0 {
        return Err(LexiconError::EmptySentiment { skipped: load.skipped });
    }
    Ok((lex, load))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedTerm {
    pub rank: usize,
    pub term: String,
    pub score: f64,
}

impl fmt::Display for RankedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.rank, self.term, self.score)
    }
}

/// Top `k` terms by descending score, ties broken lexicographically.
pub fn export_top_keywords<'a, I>(scores: I, k: usize) -> Vec<RankedTerm>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    let mut all: Vec<(&str, f64)> = scores.into_iter().collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    all.into_iter()
        .take(k)
        .enumerate()
        .map(|(i, (term, score))| RankedTerm {
            rank: i + 1,
            term: term.to_string(),
            score,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScatterRow {
    pub term: String,
    pub adf_actionable: f64,
    pub adf_non_actionable: f64,
}

/// One row per term of the union vocabulary, sorted by term.
pub fn export_scatter(adf_a: &AdfMap, adf_n: &AdfMap) -> Vec<ScatterRow> {
    let vocab: BTreeSet<&String> = adf_a.keys().chain(adf_n.keys()).collect();
    vocab
        .into_iter()
        .map(|t| ScatterRow {
            term: t.clone(),
            adf_actionable: adf_a.get(t).copied().unwrap_or(0.0),
            adf_non_actionable: adf_n.get(t).copied().unwrap_or(0.0),
        })
        .collect()
}

pub fn write_scatter<W: Write>(mut w: W, rows: &[ScatterRow]) -> io::Result<()> {
    writeln!(w, "term\tadf_actionable\tadf_non_actionable")?;
    for r in rows {
        writeln!(w, "{}\t{}\t{}", r.term, r.adf_actionable, r.adf_non_actionable)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Message, Source};

    fn key() -> DomainKey {
        DomainKey::full("yahoo", "en", Source::Tw)
    }

    fn stats_from(counts: &[(&str, u32)], doc_count: usize) -> TermStats {
        TermStats::with_counts(
            key(),
            Label::Actionable,
            doc_count,
            counts.iter().map(|(t, n)| (t.to_string(), *n)).collect(),
        )
    }

    #[test]
    fn ndf_is_ratio() {
        let docs: Vec<TokenizedDocument> = (0..12)
            .map(|i| tokenize(if i < 3 { "password reset" } else { "hello" }))
            .collect();
        let s = TermStats::from_documents(key(), Label::Actionable, &docs).unwrap();
        assert_eq!(s.ndf("password"), 0.25);
        assert_eq!(s.doc_count_of("hello"), 9);
    }

    #[test]
    fn doc_counts_ignore_repeats() {
        let docs = [tokenize("help help help"), tokenize("help me")];
        let s = TermStats::from_documents(key(), Label::Actionable, &docs).unwrap();
        assert_eq!(s.doc_count_of("help"), 2);
    }

    #[test]
    fn sigil_tokens_also_count_bare() {
        let docs = [tokenize("#outage now"), tokenize("outage again")];
        let s = TermStats::from_documents(key(), Label::Actionable, &docs).unwrap();
        assert_eq!(s.doc_count_of("outage"), 2);
        assert_eq!(s.doc_count_of("#outage"), 1);
    }

    #[test]
    fn p95_nearest_rank() {
        assert_eq!(nearest_rank_p95(&[1, 1, 1, 1, 1, 1, 1, 1, 1, 9]), 9);
        assert_eq!(nearest_rank_p95(&[5]), 5);
        assert_eq!(nearest_rank_p95(&[]), 0);
        // 20 values: rank ceil(19) = 19
        let v: Vec<u32> = (1..=20).collect();
        assert_eq!(nearest_rank_p95(&v), 19);
    }

    #[test]
    fn empty_stats_is_error() {
        let none: Vec<TokenizedDocument> = Vec::new();
        assert!(matches!(
            TermStats::from_documents(key(), Label::Actionable, &none),
            Err(LexiconError::EmptyStats { .. })
        ));
    }

    #[test]
    fn adf_values() {
        let s = stats_from(&[("a", 9), ("b", 99), ("c", 1)], 100);
        let mut s = s;
        s.p95_count = 9;
        let adf = compute_adf(&s).unwrap();
        assert_eq!(adf["a"], 1.0);
        assert!((adf["b"] - 2.0).abs() < 1e-12);
        assert!(adf["c"] < 1.0);
        assert_eq!(adf_value(0, 9), 0.0);
        s.p95_count = 0;
        assert!(matches!(compute_adf(&s), Err(LexiconError::Degenerate)));
    }

    fn adf(pairs: &[(&str, f64)]) -> AdfMap {
        pairs.iter().map(|(t, v)| (t.to_string(), *v)).collect()
    }

    #[test]
    fn keyword_score_branches() {
        let (a, n) = compute_keyword_scores(
            &key(),
            &adf(&[("x", 0.8), ("tie", 0.7), ("y", 0.2), ("only_a", 0.4)]),
            &adf(&[("x", 0.5), ("tie", 0.7), ("y", 0.9), ("only_n", 0.3)]),
        );
        assert!((a.score("x") - 0.3).abs() < 1e-12);
        assert_eq!(n.score("x"), 0.0);
        assert_eq!(a.score("tie"), 0.0);
        assert_eq!(n.score("tie"), 0.0);
        assert!((n.score("y") - 0.7).abs() < 1e-12);
        assert_eq!(a.score("y"), 0.0);
        assert_eq!(a.score("only_a"), 0.4);
        assert_eq!(n.score("only_n"), 0.3);
        assert!(!a.scores.contains_key("tie"));
    }

    #[test]
    fn min_doc_freq_floor() {
        let a_docs = [tokenize("reset password"), tokenize("reset now"), tokenize("rare")];
        let n_docs = [tokenize("news today"), tokenize("news now")];
        let sa = TermStats::from_documents(key(), Label::Actionable, &a_docs).unwrap();
        let sn = TermStats::from_documents(key(), Label::NonActionable, &n_docs).unwrap();
        let lex = build_lexicons(&sa, &sn, 2).unwrap();
        assert!(lex.actionable.score("reset") > 0.0);
        assert_eq!(lex.actionable.score("rare"), 0.0);
        assert!(lex.non_actionable.score("news") > 0.0);
        let loose = build_lexicons(&sa, &sn, 1).unwrap();
        assert!(loose.actionable.score("rare") > 0.0);
    }

    #[test]
    fn generalized_stats_aggregate_sources() {
        let msgs: Vec<Message> = [("tw", "help a"), ("fb", "help b"), ("tw", "c")]
            .iter()
            .enumerate()
            .map(|(i, (s, t))| Message {
                id: i.to_string(),
                text: t.to_string(),
                company: "yahoo".into(),
                language: "en".into(),
                source: s.parse().unwrap(),
                label: Label::Actionable,
                timestamp: None,
            })
            .collect();
        let corpus = LabeledCorpus::from_messages(msgs);
        let cl = key().project(true, true, false);
        let s = build_term_stats(&corpus, &cl, Label::Actionable).unwrap();
        assert_eq!(s.doc_count, 3);
        assert_eq!(s.doc_count_of("help"), 2);
        let tw = build_term_stats(&corpus, &key(), Label::Actionable).unwrap();
        let fb = build_term_stats(&corpus, &DomainKey::full("yahoo", "en", Source::Fb), Label::Actionable).unwrap();
        assert_eq!(TermStats::merge(cl, Label::Actionable, [&tw, &fb]), s);
    }

    #[test]
    fn sentiment_sums_across_pos() {
        let rows = "# comment\na\t1\t0.5\t0.0\tgood#1\tgloss\nn\t2\t0.25\t0.0\tgood#2 Goodness#1\tgloss\nr\t3\t0.0\t0.625\tbad#1\tx\nbroken row\na\t4\tx\t0\tfoo#1\tg\n";
        let (lex, load) = load_sentiment_lexicon(rows.as_bytes()).unwrap();
        assert_eq!(load, SentimentLoad { rows: 3, skipped: 2 });
        assert_eq!(lex.positive("good"), 0.75);
        assert_eq!(lex.positive("goodness"), 0.25);
        assert_eq!(lex.negative("bad"), 0.625);
        assert_eq!(lex.positive("absent"), 0.0);
        assert_eq!(lex.description_amplitude("good bad"), (0.75, 0.625));
    }

    #[test]
    fn sentiment_empty_is_error() {
        assert!(matches!(
            load_sentiment_lexicon("# nothing\nbad\n".as_bytes()),
            Err(LexiconError::EmptySentiment { skipped: 1 })
        ));
        assert!(SentimentLexicon::bundled_sample().positive("happy") > 0.0);
    }

    #[test]
    fn top_keywords() {
        let m = [("a", 0.9), ("b", 0.1)];
        let top = export_top_keywords(m, 1);
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].term, "a");
        let tie = export_top_keywords([("mail", 0.5), ("help", 0.5)], 5);
        assert_eq!(tie[0].term, "help");
        assert_eq!(tie[1].rank, 2);
        assert_eq!(export_top_keywords(m, 10).len(), 2);
        assert_eq!(tie[0].to_string(), "1\thelp\t0.5");
    }

    #[test]
    fn scatter_rows() {
        let rows = export_scatter(&adf(&[("only", 0.4), ("both", 0.6)]), &adf(&[("both", 0.6)]));
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].term, "only");
        assert_eq!(rows[1].adf_non_actionable, 0.0);
        assert_eq!(rows[0].adf_actionable, rows[0].adf_non_actionable);
        assert!(export_scatter(&AdfMap::new(), &AdfMap::new()).is_empty());
    }

    #[test]
    fn lexicon_file_round_trip() {
        let (a, _) = compute_keyword_scores(&key(), &adf(&[("x", 0.8), ("y", 1.0 / 3.0)]), &AdfMap::new());
        let stats = StatsSummary {
            doc_count: 12,
            p95_count: 3,
        };
        let mut buf = Vec::new();
        write_lexicon(&mut buf, &a, stats, 42).unwrap();
        let (back, s, built) = read_lexicon(buf.as_slice()).unwrap();
        assert_eq!(back, a);
        assert_eq!(s, stats);
        assert_eq!(built, 42);
        assert!(read_lexicon("term\t1\n".as_bytes()).is_err());
    }
}
