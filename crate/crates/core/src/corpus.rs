//! Labeled message corpora: ingestion, domain indexing, class balancing,
//! stratified splitting and synthetic multi-domain generation.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus is empty: no valid records")]
    Empty,
    #[error("eval fraction must lie in (0, 1), got {0}")]
    EvalFraction(f64),
    #[error("synthetic scenario: {0}")]
    Scenario(String),
    #[error("invalid domain key `{0}`")]
    DomainKey(String),
    #[error("read error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Tw,
    Fb,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Tw => "tw",
            Source::Fb => "fb",
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tw" => Ok(Source::Tw),
            "fb" => Ok(Source::Fb),
            other => Err(format!("unknown source `{other}`")),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Actionable,
    NonActionable,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::Actionable, Label::NonActionable];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Actionable => "actionable",
            Label::NonActionable => "non_actionable",
        }
    }

    pub fn opposite(self) -> Label {
        match self {
            Label::Actionable => Label::NonActionable,
            Label::NonActionable => Label::Actionable,
        }
    }

    pub fn is_actionable(self) -> bool {
        self == Label::Actionable
    }

    /// +1 for actionable, -1 otherwise.
    pub fn sign(self) -> f64 {
        if self.is_actionable() {
            1.0
        } else {
            -1.0
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "actionable" => Ok(Label::Actionable),
            "non_actionable" => Ok(Label::NonActionable),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub id: String,
    pub text: String,
    pub company: String,
    pub language: String,
    pub source: Source,
    pub label: Label,
    pub timestamp: Option<i64>,
}

impl Message {
    pub fn domain(&self) -> DomainKey {
        DomainKey::full(&self.company, &self.language, self.source)
    }
}

/// A subset of the {company, language, source} attributes.
///
/// Keys order by company, then language, then source, with absent attributes
/// sorting first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainKey {
    pub company: Option<String>,
    pub language: Option<String>,
    pub source: Option<Source>,
}

impl DomainKey {
    pub fn full(company: &str, language: &str, source: Source) -> Self {
        DomainKey {
            company: Some(company.to_string()),
            language: Some(language.to_string()),
            source: Some(source),
        }
    }

    /// The fully generalized domain `{}`.
    pub fn global() -> Self {
        DomainKey::default()
    }

    pub fn fully_specified(&self) -> bool {
        self.specificity() == 3
    }

    pub fn specificity(&self) -> usize {
        self.company.is_some() as usize + self.language.is_some() as usize + self.source.is_some() as usize
    }

    /// True if every attribute present in `self` has the same value in `other`,
    /// i.e. `self` is a generalization of (or equal to) `other`.
    pub fn generalizes(&self, other: &DomainKey) -> bool {
        fn ok<T: PartialEq>(mine: &Option<T>, theirs: &Option<T>) -> bool {
            mine.is_none() || mine == theirs
        }
        ok(&self.company, &other.company) && ok(&self.language, &other.language) && ok(&self.source, &other.source)
    }

    /// Keep only the attributes selected by the mask.
    pub fn project(&self, company: bool, language: bool, source: bool) -> DomainKey {
        DomainKey {
            company: if company { self.company.clone() } else { None },
            language: if language { self.language.clone() } else { None },
            source: if source { self.source } else { None },
        }
    }

    /// Attribute pattern such as `{c,l}` or `{}`.
    pub fn category(&self) -> String {
        let mut parts = Vec::new();
        if self.company.is_some() {
            parts.push("c");
        }
        if self.language.is_some() {
            parts.push("l");
        }
        if self.source.is_some() {
            parts.push("s");
        }
        format!("{{{}}}", parts.join(","))
    }

    /// Parseable form `company/language/source`, `*` for absent attributes,
    /// each value percent-encoded outside `[a-z0-9.-]`.
    pub fn key_string(&self) -> String {
        self.encoded_parts().join("/")
    }

    /// URL- and filesystem-safe name, e.g. `nokia_es_tw`.
    pub fn file_stem(&self) -> String {
        self.encoded_parts().join("_")
    }

    fn encoded_parts(&self) -> [String; 3] {
        let enc = |v: Option<&str>| v.map(percent_encode).unwrap_or_else(|| "*".to_string());
        [
            enc(self.company.as_deref()),
            enc(self.language.as_deref()),
            enc(self.source.map(Source::as_str)),
        ]
    }
}

impl fmt::Display for DomainKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [
            self.company.as_deref(),
            self.language.as_deref(),
            self.source.map(Source::as_str),
        ]
        .into_iter()
        .flatten()
        .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromStr for DomainKey {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CorpusError::DomainKey(s.to_string());
        let parts: Vec<&str> = s.split('/').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let dec = |p: &str| -> Result<Option<String>, CorpusError> {
            if p == "*" {
                Ok(None)
            } else {
                percent_decode(p).map(Some).ok_or_else(bad)
            }
        };
        let source = match dec(parts[2])? {
            None => None,
            Some(v) => Some(v.parse::<Source>().map_err(|_| bad())?),
        };
        Ok(DomainKey {
            company: dec(parts[0])?,
            language: dec(parts[1])?,
            source,
        })
    }
}

fn percent_encode(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for b in value.bytes() {
        if b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'.' || b == b'-' {
            out.push(b as char);
        } else {
            out.push_str(&format!("%{b:02X}"));
        }
    }
    out
}

fn percent_decode(value: &str) -> Option<String> {
    let bytes = value.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'%' {
            let hex = value.get(i + 1..i + 3)?;
            out.push(u8::from_str_radix(hex, 16).ok()?);
            i += 3;
        } else {
            out.push(bytes[i]);
            i += 1;
        }
    }
    String::from_utf8(out).ok()
}

/// Messages indexed by their fully specified domain.
///
/// `population` holds the total message volume per fully specified domain
/// (labeled plus unlabeled) and is carried unchanged through balancing and
/// splitting; it defaults to the ingested count.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabeledCorpus {
    messages: Vec<Message>,
    index: BTreeMap<DomainKey, Vec<usize>>,
    population: BTreeMap<DomainKey, usize>,
}

impl LabeledCorpus {
    pub fn from_messages(messages: Vec<Message>) -> Self {
        let mut corpus = LabeledCorpus {
            messages,
            ..Default::default()
        };
        corpus.reindex();
        corpus.population = corpus.index.iter().map(|(k, v)| (k.clone(), v.len())).collect();
        corpus
    }

    fn with_population(messages: Vec<Message>, population: &BTreeMap<DomainKey, usize>) -> Self {
        let mut corpus = LabeledCorpus {
            messages,
            ..Default::default()
        };
        corpus.reindex();
        corpus.population = corpus
            .index
            .iter()
            .map(|(k, v)| (k.clone(), population.get(k).copied().unwrap_or(v.len())))
            .collect();
        corpus
    }

    fn reindex(&mut self) {
        self.index.clear();
        for (pos, m) in self.messages.iter().enumerate() {
            self.index.entry(m.domain()).or_default().push(pos);
        }
    }

    /// Overrides population counts for the listed domains. Values smaller than
    /// the labeled count are raised to it.
    pub fn set_populations(&mut self, populations: &BTreeMap<DomainKey, usize>) {
        for (key, labeled) in &self.index {
            if let Some(&p) = populations.get(key) {
                self.population.insert(key.clone(), p.max(labeled.len()));
            }
        }
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// Fully specified domains present in the index, in key order.
    pub fn domains(&self) -> impl Iterator<Item = &DomainKey> {
        self.index.keys()
    }

    pub fn populations(&self) -> &BTreeMap<DomainKey, usize> {
        &self.population
    }

    /// Positions (into [`messages`](Self::messages)) of every message whose
    /// domain is covered by `key`, in corpus order.
    pub fn positions(&self, key: &DomainKey) -> Vec<usize> {
        if key.fully_specified() {
            return self.index.get(key).cloned().unwrap_or_default();
        }
        let mut out: Vec<usize> = self
            .index
            .iter()
            .filter(|(k, _)| key.generalizes(k))
            .flat_map(|(_, v)| v.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    pub fn messages_in<'a>(&'a self, key: &DomainKey) -> impl Iterator<Item = &'a Message> + 'a {
        self.positions(key).into_iter().map(move |p| &self.messages[p])
    }

    pub fn ids(&self, key: &DomainKey) -> Vec<&str> {
        self.messages_in(key).map(|m| m.id.as_str()).collect()
    }

    /// (actionable, non_actionable) counts under `key`.
    pub fn label_counts(&self, key: &DomainKey) -> (usize, usize) {
        self.messages_in(key).fold((0, 0), |(a, n), m| match m.label {
            Label::Actionable => (a + 1, n),
            Label::NonActionable => (a, n + 1),
        })
    }

    /// Summed population of every fully specified domain covered by `key`.
    pub fn population_of(&self, key: &DomainKey) -> usize {
        self.population.iter().filter(|(k, _)| key.generalizes(k)).map(|(_, p)| *p).sum()
    }

    /// Newline-delimited JSON in the ingest schema.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> io::Result<()> {
        for m in &self.messages {
            let rec = RecordOut {
                id: &m.id,
                text: &m.text,
                company: &m.company,
                language: &m.language,
                source: m.source,
                label: m.label,
                ts: m.timestamp,
            };
            serde_json::to_writer(&mut w, &rec)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    /// `key_string<TAB>population` per fully specified domain.
    pub fn write_populations<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, p) in &self.population {
            writeln!(w, "{}\t{}", k.key_string(), p)?;
        }
        Ok(())
    }
}

/// Parses the `key_string<TAB>population` format written by
/// [`LabeledCorpus::write_populations`].
pub fn read_populations<R: BufRead>(reader: R) -> Result<BTreeMap<DomainKey, usize>, CorpusError> {
    let mut out = BTreeMap::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, count) = line
            .split_once('\t')
            .ok_or_else(|| CorpusError::DomainKey(line.to_string()))?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| CorpusError::DomainKey(line.to_string()))?;
        out.insert(key.parse()?, count);
    }
    Ok(out)
}

#[derive(Serialize)]
struct RecordOut<'a> {
    id: &'a str,
    text: &'a str,
    company: &'a str,
    language: &'a str,
    source: Source,
    label: Label,
    #[serde(skip_serializing_if = "Option::is_none")]
    ts: Option<i64>,
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    text: Option<String>,
    company: Option<String>,
    language: Option<String>,
    source: Option<String>,
    label: Option<String>,
    ts: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub accepted: usize,
    pub rejections: Vec<Rejection>,
    /// (actionable, non_actionable) per fully specified domain.
    pub domain_sizes: BTreeMap<DomainKey, (usize, usize)>,
}

impl IngestReport {
    pub fn rejected(&self) -> usize {
        self.rejections.len()
    }
}

impl fmt::Display for IngestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "accepted\t{}", self.accepted)?;
        writeln!(f, "rejected\t{}", self.rejected())?;
        writeln!(f, "domains\t{}", self.domain_sizes.len())?;
        for (k, (a, n)) in &self.domain_sizes {
            writeln!(f, "domain\t{}\tactionable={}\tnon_actionable={}", k.key_string(), a, n)?;
        }
        for r in &self.rejections {
            writeln!(f, "reject\tline={}\t{}", r.line, r.reason)?;
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub corpus: LabeledCorpus,
    pub report: IngestReport,
}

fn normalize_attr(value: Option<String>, field: &str) -> Result<String, String> {
    let value = value.ok_or_else(|| format!("missing field `{field}`"))?;
    let value = value.trim().to_lowercase();
    if value.is_empty() {
        return Err(format!("empty field `{field}`"));
    }
    Ok(value)
}

fn parse_record(line: &str) -> Result<Message, String> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| format!("parse: {e}"))?;
    let id = raw.id.map(|s| s.trim().to_string()).filter(|s| !s.is_empty());
    let id = id.ok_or_else(|| "missing field `id`".to_string())?;
    let text = raw.text.ok_or_else(|| "missing field `text`".to_string())?;
    let text: String = text.nfc().collect();
    if text.trim().is_empty() {
        return Err("empty field `text`".to_string());
    }
    let company = normalize_attr(raw.company, "company")?;
    let language = normalize_attr(raw.language, "language")?;
    let source = normalize_attr(raw.source, "source")?.parse::<Source>()?;
    let label = normalize_attr(raw.label, "label")?.parse::<Label>()?;
    Ok(Message {
        id,
        text,
        company,
        language,
        source,
        label,
        timestamp: raw.ts,
    })
}

/// Reads newline-delimited records. Malformed records and duplicate ids are
/// rejected individually; only an input without any valid record is an error.
pub fn ingest<R: BufRead>(reader: R) -> Result<Ingested, CorpusError> {
    let mut report = IngestReport::default();
    let mut seen = HashSet::new();
    let mut messages = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(m) => {
                if !seen.insert(m.id.clone()) {
                    report.rejections.push(Rejection {
                        line: n + 1,
                        reason: format!("duplicate id `{}`", m.id),
                    });
                    continue;
                }
                messages.push(m);
            }
            Err(reason) => report.rejections.push(Rejection { line: n + 1, reason }),
        }
    }
    if messages.is_empty() {
        return Err(CorpusError::Empty);
    }
    report.accepted = messages.len();
    let corpus = LabeledCorpus::from_messages(messages);
    for key in corpus.domains() {
        report.domain_sizes.insert(key.clone(), corpus.label_counts(key));
    }
    Ok(Ingested { corpus, report })
}

/// Mixes a run seed with a stable per-item tag (FNV-1a) so independent items
/// draw from independent streams.
pub(crate) fn mix_seed(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub(crate) fn rng_for(seed: u64, tag: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, tag))
}

#[derive(Debug)]
pub struct Balanced {
    pub corpus: LabeledCorpus,
    /// Domains removed because one class was empty.
    pub dropped: Vec<DomainKey>,
}

/// Downsamples the majority class of every fully specified domain to the size
/// of the minority class.
pub fn balance(corpus: &LabeledCorpus, seed: u64) -> Balanced {
    let mut keep = vec![false; corpus.messages.len()];
    let mut dropped = Vec::new();
    for (key, positions) in &corpus.index {
        let (act, non): (Vec<usize>, Vec<usize>) = positions
            .iter()
            .partition(|&&p| corpus.messages[p].label.is_actionable());
        let target = act.len().min(non.len());
        if target == 0 {
            dropped.push(key.clone());
            continue;
        }
        let mut rng = rng_for(seed, &key.key_string());
        for mut class in [act, non] {
            if class.len() > target {
                class.shuffle(&mut rng);
                class.truncate(target);
            }
            for p in class {
                keep[p] = true;
            }
        }
    }
    let messages = corpus
        .messages
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(m, _)| m.clone())
        .collect();
    Balanced {
        corpus: LabeledCorpus::with_population(messages, &corpus.population),
        dropped,
    }
}

#[derive(Debug)]
pub struct Split {
    pub train: LabeledCorpus,
    pub eval: LabeledCorpus,
    /// Domains routed entirely to train because a (domain, label) cell had
    /// fewer than two messages.
    pub warnings: Vec<DomainKey>,
}

/// Stratified split per (domain, label) cell. Each cell contributes
/// `round(n * eval_fraction)` messages to eval, clamped to `1..=n-1`.
pub fn split(corpus: &LabeledCorpus, eval_fraction: f64, seed: u64) -> Result<Split, CorpusError> {
    if !(eval_fraction > 0.0 && eval_fraction < 1.0) {
        return Err(CorpusError::EvalFraction(eval_fraction));
    }
    let mut to_eval = vec![false; corpus.messages.len()];
    let mut warnings = Vec::new();
    for (key, positions) in &corpus.index {
        let (act, non): (Vec<usize>, Vec<usize>) = positions
            .iter()
            .partition(|&&p| corpus.messages[p].label.is_actionable());
        if act.len() < 2 || non.len() < 2 {
            warnings.push(key.clone());
            continue;
        }
        let mut rng = rng_for(seed, &format!("split:{}", key.key_string()));
        for mut cell in [act, non] {
            let n = cell.len();
            let k = ((n as f64) * eval_fraction).round().clamp(1.0, (n - 1) as f64) as usize;
            cell.shuffle(&mut rng);
            for &p in &cell[..k] {
                to_eval[p] = true;
            }
        }
    }
    let (mut train, mut eval) = (Vec::new(), Vec::new());
    for (m, e) in corpus.messages.iter().zip(&to_eval) {
        if *e {
            eval.push(m.clone());
        } else {
            train.push(m.clone());
        }
    }
    Ok(Split {
        train: LabeledCorpus::with_population(train, &corpus.population),
        eval: LabeledCorpus::with_population(eval, &corpus.population),
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticDomain {
    /// Fully specified domain.
    pub key: DomainKey,
    pub actionable: usize,
    pub non_actionable: usize,
    /// Total volume including unlabeled messages; `None` means labeled count.
    pub population: Option<usize>,
    /// Domain-specific actionable keywords.
    pub keywords: Vec<String>,
}

/// Actionable keywords shared by every fully specified domain under `key`.
#[derive(Clone, Debug, PartialEq)]
pub struct SharedPool {
    pub key: DomainKey,
    pub keywords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticScenario {
    pub domains: Vec<SyntheticDomain>,
    pub shared_pools: Vec<SharedPool>,
    /// Keywords planted in non-actionable messages.
    pub non_actionable_keywords: Vec<String>,
    /// Label-independent filler vocabulary.
    pub background: Vec<String>,
    /// Inclusive range of filler words per message.
    pub background_words: (usize, usize),
    /// Inclusive range of planted keywords per message (minimum at least 1).
    pub planted_words: (usize, usize),
    /// Probability that a message draws its planted keywords from the other
    /// class's pool.
    pub noise_rate: f64,
    /// Probability of a label-correlated marker (`?` for actionable, `via @x`
    /// or a url otherwise).
    pub marker_rate: f64,
    /// Probability of a label-correlated emoticon.
    pub emoticon_rate: f64,
}

impl Default for SyntheticScenario {
    fn default() -> Self {
        SyntheticScenario {
            domains: Vec::new(),
            shared_pools: Vec::new(),
            non_actionable_keywords: Vec::new(),
            background: Vec::new(),
            background_words: (3, 8),
            planted_words: (1, 2),
            noise_rate: 0.0,
            marker_rate: 0.0,
            emoticon_rate: 0.0,
        }
    }
}

impl SyntheticScenario {
    /// Actionable pool for a fully specified domain: its own keywords plus
    /// every shared pool whose key generalizes it.
    pub fn actionable_pool(&self, domain: &SyntheticDomain) -> Vec<String> {
        let mut pool: BTreeSet<String> = domain.keywords.iter().cloned().collect();
        for shared in &self.shared_pools {
            if shared.key.generalizes(&domain.key) {
                pool.extend(shared.keywords.iter().cloned());
            }
        }
        pool.into_iter().collect()
    }

    fn validate(&self) -> Result<(), CorpusError> {
        let err = |m: String| Err(CorpusError::Scenario(m));
        if self.domains.is_empty() {
            return err("no domains".into());
        }
        if self.non_actionable_keywords.is_empty() {
            return err("empty non-actionable keyword pool".into());
        }
        if self.planted_words.0 == 0 || self.planted_words.0 > self.planted_words.1 {
            return err("planted_words must be a range starting at 1 or more".into());
        }
        if self.background_words.0 > self.background_words.1 {
            return err("background_words range is inverted".into());
        }
        if self.background_words.1 > 0 && self.background.is_empty() {
            return err("background words requested but vocabulary is empty".into());
        }
        for rate in [self.noise_rate, self.marker_rate, self.emoticon_rate] {
            if !(0.0..=1.0).contains(&rate) {
                return err(format!("rate {rate} outside [0, 1]"));
            }
        }
        let mut seen = HashSet::new();
        for d in &self.domains {
            if !d.key.fully_specified() {
                return err(format!("domain {} is not fully specified", d.key));
            }
            if !seen.insert(&d.key) {
                return err(format!("domain {} listed twice", d.key));
            }
            if self.actionable_pool(d).is_empty() {
                return err(format!("empty keyword pool for domain {}", d.key));
            }
        }
        Ok(())
    }
}

/// Renders keyword bags as message text. Seed-deterministic; each domain draws
/// from its own stream.
pub fn generate_synthetic(scenario: &SyntheticScenario, seed: u64) -> Result<LabeledCorpus, CorpusError> {
    scenario.validate()?;
    let mut messages = Vec::new();
    let mut populations = BTreeMap::new();
    for domain in &scenario.domains {
        let mut rng = rng_for(seed, &format!("synth:{}", domain.key.key_string()));
        let act_pool = scenario.actionable_pool(domain);
        let company = domain.key.company.clone().unwrap_or_default();
        let language = domain.key.language.clone().unwrap_or_default();
        let source = domain.key.source.unwrap_or(Source::Tw);
        let labels = std::iter::repeat(Label::Actionable)
            .take(domain.actionable)
            .chain(std::iter::repeat(Label::NonActionable).take(domain.non_actionable));
        for (n, label) in labels.enumerate() {
            let noisy = rng.gen_bool(scenario.noise_rate);
            let pool = match (label, noisy) {
                (Label::Actionable, false) | (Label::NonActionable, true) => &act_pool,
                _ => &scenario.non_actionable_keywords,
            };
            let mut words: Vec<&str> = Vec::new();
            let planted = rng.gen_range(scenario.planted_words.0..=scenario.planted_words.1);
            for _ in 0..planted {
                words.push(pool.choose(&mut rng).expect("validated non-empty"));
            }
            let filler = rng.gen_range(scenario.background_words.0..=scenario.background_words.1);
            for _ in 0..filler {
                words.push(scenario.background.choose(&mut rng).expect("validated non-empty"));
            }
            words.shuffle(&mut rng);
            let mut text = words.join(" ");
            if rng.gen_bool(scenario.marker_rate) {
                match label {
                    Label::Actionable => text = format!("@{company} {text}?"),
                    Label::NonActionable if rng.gen_bool(0.5) => text = format!("{text} via @{company}news"),
                    Label::NonActionable => text = format!("{text} http://t.co/{:06x}", rng.gen_range(0..0xffffff)),
                }
            }
            if rng.gen_bool(scenario.emoticon_rate) {
                text.push_str(if label.is_actionable() { " :(" } else { " :)" });
            }
            messages.push(Message {
                id: format!("{}-{:05}", domain.key.file_stem(), n),
                text,
                company: company.clone(),
                language: language.clone(),
                source,
                label,
                timestamp: None,
            });
        }
        let labeled = domain.actionable + domain.non_actionable;
        populations.insert(domain.key.clone(), domain.population.unwrap_or(labeled).max(labeled));
    }
    Ok(LabeledCorpus::with_population(messages, &populations))
}
