//! Reproducible batch runs: configuration, preprocessing, built-in synthetic
//! scenarios and the command implementations behind the CLI.
//!
//! Every command reads a [`RunConfig`], writes its artifacts under the report
//! directory and returns a one-line summary. Outputs are ordered by domain key,
//! so identical configs and inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Deserialize;
use unicode_normalization::UnicodeNormalization;

use crate::corpus::{
    balance, generate_synthetic, ingest, read_populations, split, DomainKey, IngestReport, LabeledCorpus, Source,
    SharedPool, SyntheticDomain, SyntheticScenario,
};
use crate::error::{Error, Result};
use crate::features::{Feature, MessageAnalysis};
use crate::learners::{Hyperparameters, Technique};
use crate::lexicon::{build_term_stats, compute_adf, export_scatter, export_top_keywords, write_lexicon, write_scatter};
use crate::metrics::{
    aligned_table, coverage, diagnostics_tsv, mutual_information, rank_diagnostics, render_diagnostics, ConfusionCounts,
    DomainReport, EvaluationReport, FeatureDiagnostic,
};
use crate::resources::SharedResources;
use crate::selection::{
    selection_census, CandidateEngine, AnalyzedCorpus, ModelCandidateSet, ModelRegistry,
    SelectionConfig, SelectionError, Strategy,
};

/// Every key accepted in a config file or as a `--key value` flag.
pub const CONFIG_KEYS: &[&str] = &[
    "corpus",
    "populations",
    "sentiment",
    "easy_words",
    "emoticons",
    "registry",
    "report_dir",
    "seed",
    "eval_fraction",
    "cv_folds",
    "strategy",
    "techniques",
    "min_class_size",
    "min_doc_freq",
    "built",
    "scenario",
    "domain",
    "top",
    "input",
    "output",
    "pa_c",
    "confidence",
    "scw_c",
    "arow_r",
    "logistic_rate",
    "logistic_l2",
    "rda_rate",
    "rda_l1",
    "epochs",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Newline-delimited JSON corpus; defaults to `<report_dir>/corpus.jsonl`.
    pub corpus: Option<PathBuf>,
    /// `key_string<TAB>count` population file; defaults to
    /// `<report_dir>/populations.tsv`, used when present.
    pub populations: Option<PathBuf>,
    pub sentiment: Option<PathBuf>,
    pub easy_words: Option<PathBuf>,
    pub emoticons: Vec<PathBuf>,
    /// Registry root; defaults to `<report_dir>/registry`.
    pub registry: Option<PathBuf>,
    pub report_dir: PathBuf,
    pub seed: u64,
    pub eval_fraction: f64,
    pub cv_folds: usize,
    pub strategy: Strategy,
    pub techniques: Vec<Technique>,
    pub min_class_size: usize,
    pub min_doc_freq: u32,
    /// Build timestamp recorded in registries and lexicon manifests.
    pub built: i64,
    pub scenario: String,
    pub domain: Option<DomainKey>,
    pub top: usize,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Hyperparameter values by name; several comma-separated values form a grid.
    pub hyperparameters: BTreeMap<String, Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            populations: None,
            sentiment: None,
            easy_words: None,
            emoticons: Vec::new(),
            registry: None,
            report_dir: PathBuf::from("reports"),
            seed: 42,
            eval_fraction: 0.2,
            cv_folds: 5,
            strategy: Strategy::D,
            techniques: Technique::ALL.to_vec(),
            min_class_size: 20,
            min_doc_freq: crate::lexicon::MIN_DOC_FREQ,
            built: 0,
            scenario: "basic".into(),
            domain: None,
            top: 20,
            input: None,
            output: None,
            hyperparameters: BTreeMap::new(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| Error::Config(format!("{key}: cannot parse `{value}`: {e}")))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let path = || Some(PathBuf::from(value));
        match key {
            "corpus" => self.corpus = path(),
            "populations" => self.populations = path(),
            "sentiment" => self.sentiment = path(),
            "easy_words" => self.easy_words = path(),
            "emoticons" => self.emoticons = list(value).map(PathBuf::from).collect(),
            "registry" => self.registry = path(),
            "report_dir" => self.report_dir = PathBuf::from(value),
            "seed" => self.seed = parse(key, value)?,
            "eval_fraction" => self.eval_fraction = parse(key, value)?,
            "cv_folds" => self.cv_folds = parse(key, value)?,
            "strategy" => self.strategy = parse(key, value)?,
            "techniques" => {
                self.techniques = if value == "all" {
                    Technique::ALL.to_vec()
                } else {
                    list(value).map(|t| parse(key, t)).collect::<Result<_>>()?
                }
            }
            "min_class_size" => self.min_class_size = parse(key, value)?,
            "min_doc_freq" => self.min_doc_freq = parse(key, value)?,
            "built" => self.built = parse(key, value)?,
            "scenario" => self.scenario = value.to_string(),
            "domain" => self.domain = Some(parse(key, value)?),
            "top" => self.top = parse(key, value)?,
            "input" => self.input = path(),
            "output" => self.output = path(),
            k if Hyperparameters::NAMES.contains(&k) && k != "seed" => {
                let values: Vec<String> = list(value).map(String::from).collect();
                for v in &values {
                    Hyperparameters::default()
                        .set(k, v)
                        .map_err(|e| Error::Config(e.to_string()))?;
                }
                if values.is_empty() {
                    return Err(Error::Config(format!("{k}: empty value")));
                }
                self.hyperparameters.insert(k.to_string(), values);
            }
            _ => return Err(Error::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Flat `key = value` lines; blank lines and `#` comments are ignored.
    pub fn parse_str(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            self.set(k.trim(), v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.parse_str(&text)?;
        Ok(cfg)
    }

    pub fn corpus_path(&self) -> PathBuf {
        self.corpus.clone().unwrap_or_else(|| self.report_dir.join("corpus.jsonl"))
    }

    pub fn populations_path(&self) -> PathBuf {
        self.populations.clone().unwrap_or_else(|| self.report_dir.join("populations.tsv"))
    }

    pub fn registry_path(&self) -> PathBuf {
        self.registry.clone().unwrap_or_else(|| self.report_dir.join("registry"))
    }

    /// Base hyperparameters for a technique crossed with every listed value of
    /// the hyperparameters that technique uses.
    pub fn technique_grid(&self, technique: Technique) -> Vec<Hyperparameters> {
        let relevant: &[&str] = match technique {
            Technique::Perceptron => &["epochs"],
            Technique::PassiveAggressive => &["epochs", "pa_c"],
            Technique::ConfidenceWeighted => &["epochs", "confidence"],
            Technique::Arow => &["epochs", "arow_r"],
            Technique::Scw => &["epochs", "confidence", "scw_c"],
            Technique::AdagradRda => &["epochs", "rda_rate", "rda_l1"],
            Technique::Logistic => &["epochs", "logistic_rate", "logistic_l2"],
        };
        let mut base = Hyperparameters::default().with_seed(self.seed);
        for (k, values) in &self.hyperparameters {
            base.set(k, &values[0]).expect("validated on set");
        }
        let mut grid = vec![base];
        for name in relevant {
            let Some(values) = self.hyperparameters.get(*name) else { continue };
            grid = grid
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.set(name, v).expect("validated on set");
                        q
                    })
                })
                .collect();
        }
        grid
    }

    pub fn selection_config(&self) -> Result<SelectionConfig> {
        if self.techniques.is_empty() {
            return Err(Error::Config("techniques: empty list".into()));
        }
        let mut configs = Vec::new();
        for t in &self.techniques {
            for p in self.technique_grid(*t) {
                p.validate().map_err(|e| Error::Config(e.to_string()))?;
                configs.push((*t, p));
            }
        }
        Ok(SelectionConfig {
            configs,
            cv_folds: self.cv_folds,
            min_class_size: self.min_class_size,
            min_doc_freq: self.min_doc_freq,
            seed: self.seed,
        })
    }

    pub fn shared_resources(&self) -> Result<SharedResources> {
        let cats: Vec<&Path> = self.emoticons.iter().map(PathBuf::as_path).collect();
        SharedResources::load(self.sentiment.as_deref(), &cats, self.easy_words.as_deref())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Synth,
    Ingest,
    LexiconBuild,
    LexiconDump,
    LexiconScatter,
    Train,
    Select,
    Evaluate,
    Classify,
    ReportMi,
    ReportCensus,
    ReportStrategy,
}

fn pseudo_word(prefix: &str, i: usize) -> String {
    const SYL: [&str; 10] = ["ba", "ko", "ri", "tu", "me", "sa", "lo", "ni", "pe", "du"];
    let mut s = prefix.to_string();
    let digits = format!("{i:03}");
    for d in digits.bytes() {
        s.push_str(SYL[(d - b'0') as usize]);
    }
    s
}

fn words(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| pseudo_word(prefix, i)).collect()
}

/// A few companies, languages and sources with markers and emoticons.
pub fn basic_scenario() -> SyntheticScenario {
    let mut domains = Vec::new();
    let mut shared_pools = Vec::new();
    for (ci, company) in ["acme", "globex", "initech"].iter().enumerate() {
        for (li, language) in ["en", "es"].iter().enumerate() {
            shared_pools.push(SharedPool {
                key: DomainKey::full(company, language, Source::Tw).project(true, true, false),
                keywords: words(&format!("q{ci}{li}"), 12),
            });
            for source in [Source::Tw, Source::Fb] {
                let n = if source == Source::Tw { 150 } else { 60 };
                domains.push(SyntheticDomain {
                    key: DomainKey::full(company, language, source),
                    actionable: n,
                    non_actionable: n,
                    population: Some(n * 20),
                    keywords: words(&format!("k{ci}{li}{}", source.as_str()), 4),
                });
            }
        }
    }
    SyntheticScenario {
        domains,
        shared_pools,
        non_actionable_keywords: words("nv", 30),
        background: words("zz", 60),
        background_words: (3, 9),
        planted_words: (1, 2),
        noise_rate: 0.05,
        marker_rate: 0.3,
        emoticon_rate: 0.15,
    }
}

/// Thirty fully specified domains: ten sparse `fb` domains (40 labeled
/// messages) whose actionable vocabulary is shared with a rich `tw` sibling
/// under the same company and language, plus ten other rich domains. All
/// domains have equal population.
pub fn strategy_gains_scenario() -> SyntheticScenario {
    let mut domains = Vec::new();
    let mut shared_pools = Vec::new();
    for c in 0..10 {
        let company = format!("shared{c}");
        shared_pools.push(SharedPool {
            key: DomainKey::full(&company, "en", Source::Tw).project(true, true, false),
            keywords: words(&format!("s{c}x"), 150),
        });
        domains.push(SyntheticDomain {
            key: DomainKey::full(&company, "en", Source::Tw),
            actionable: 980,
            non_actionable: 980,
            population: Some(10_000),
            keywords: Vec::new(),
        });
        domains.push(SyntheticDomain {
            key: DomainKey::full(&company, "en", Source::Fb),
            actionable: 20,
            non_actionable: 20,
            population: Some(10_000),
            keywords: Vec::new(),
        });
    }
    for c in 0..10 {
        let language = if c % 2 == 0 { "es" } else { "fr" };
        let source = if c % 3 == 0 { Source::Fb } else { Source::Tw };
        domains.push(SyntheticDomain {
            key: DomainKey::full(&format!("solo{c}"), language, source),
            actionable: 980,
            non_actionable: 980,
            population: Some(10_000),
            keywords: words(&format!("o{c}x"), 150),
        });
    }
    SyntheticScenario {
        domains,
        shared_pools,
        non_actionable_keywords: words("nv", 300),
        background: words("zz", 80),
        background_words: (3, 8),
        planted_words: (1, 2),
        noise_rate: 0.05,
        marker_rate: 0.05,
        emoticon_rate: 0.05,
    }
}

pub fn scenario(name: &str) -> Result<SyntheticScenario> {
    match name {
        "basic" => Ok(basic_scenario()),
        "strategy_gains" => Ok(strategy_gains_scenario()),
        other => Err(Error::Config(format!(
            "unknown scenario `{other}` (expected basic or strategy_gains)"
        ))),
    }
}

/// Balanced, split and analyzed corpus ready for selection and evaluation.
#[derive(Debug)]
pub struct Prepared {
    pub shared: Arc<SharedResources>,
    pub train: AnalyzedCorpus,
    pub eval: AnalyzedCorpus,
    /// Domains removed by balancing because a class was empty.
    pub dropped: Vec<DomainKey>,
    /// Domains kept entirely in training because a class was too small to split.
    pub train_only: Vec<DomainKey>,
}

pub fn prepare(corpus: &LabeledCorpus, shared: Arc<SharedResources>, seed: u64, eval_fraction: f64) -> Result<Prepared> {
    let balanced = balance(corpus, seed);
    let parts = split(&balanced.corpus, eval_fraction, seed)?;
    Ok(Prepared {
        train: AnalyzedCorpus::new(parts.train, &shared),
        eval: AnalyzedCorpus::new(parts.eval, &shared),
        shared,
        dropped: balanced.dropped,
        train_only: parts.warnings,
    })
}

/// Candidate sets for every fully specified training domain, in key order.
pub fn candidate_sets(
    train: &AnalyzedCorpus,
    config: &SelectionConfig,
) -> Vec<(DomainKey, std::result::Result<ModelCandidateSet, SelectionError>)> {
    let targets: Vec<DomainKey> = train.corpus.domains().cloned().collect();
    let engine = CandidateEngine::new(train, config.clone());
    engine.prepare(&targets);
    targets
        .par_iter()
        .map(|t| (t.clone(), engine.train_candidates(t)))
        .collect()
}

/// Applies `strategy` to every candidate set. Targets where the strategy is
/// unavailable are returned separately with the reason.
pub fn select_all(
    sets: &[(DomainKey, std::result::Result<ModelCandidateSet, SelectionError>)],
    strategy: Strategy,
    built: i64,
) -> (ModelRegistry, Vec<(DomainKey, String)>) {
    let mut registry = ModelRegistry::new(built);
    let mut failures = Vec::new();
    for (target, set) in sets {
        let chosen = set
            .as_ref()
            .map_err(|e| e.to_string())
            .and_then(|s| crate::selection::select(strategy, s).map_err(|e| e.to_string()));
        match chosen {
            Ok(s) => registry.insert(s).expect("targets are fully specified"),
            Err(e) => failures.push((target.clone(), e)),
        }
    }
    (registry, failures)
}

/// Held-out evaluation of the registry on `eval`. Training sizes come from
/// `train`; domains without a selection or without eval messages are skipped.
pub fn evaluate_registry(
    registry: &ModelRegistry,
    eval: &AnalyzedCorpus,
    train: &LabeledCorpus,
    title: &str,
) -> Result<EvaluationReport> {
    let mut reports = Vec::new();
    for domain in eval.corpus.domains() {
        let Some(selected) = registry.get(domain) else { continue };
        let counts = ConfusionCounts::from_pairs(eval.corpus.positions(domain).into_iter().map(|p| {
            let actual = eval.corpus.messages()[p].label.is_actionable();
            (actual, selected.predict(&eval.analyses[p]).label.is_actionable())
        }));
        reports.push(DomainReport::new(
            domain.clone(),
            eval.corpus.population_of(domain),
            train.positions(domain).len(),
            counts,
        )?);
    }
    Ok(EvaluationReport::new(title, reports)?)
}

#[derive(Clone, Debug)]
pub struct StrategyOutcome {
    pub strategy: Strategy,
    pub registry: ModelRegistry,
    pub unavailable: Vec<(DomainKey, String)>,
    pub report: EvaluationReport,
}

impl StrategyOutcome {
    pub fn mean_cv_f(&self) -> f64 {
        let n = self.registry.len().max(1) as f64;
        self.registry.entries.values().map(|s| s.cv_f).sum::<f64>() / n
    }
}

/// Runs all four strategies on one candidate pool and evaluates each on the
/// held-out split.
pub fn compare_strategies(prepared: &Prepared, config: &SelectionConfig, built: i64) -> Result<Vec<StrategyOutcome>> {
    let sets = candidate_sets(&prepared.train, config);
    Strategy::ALL
        .iter()
        .map(|&strategy| {
            let (registry, unavailable) = select_all(&sets, strategy, built);
            let report = evaluate_registry(&registry, &prepared.eval, &prepared.train.corpus, &format!("strategy {strategy}"))?;
            Ok(StrategyOutcome {
                strategy,
                registry,
                unavailable,
                report,
            })
        })
        .collect()
}

pub fn render_strategy_table(outcomes: &[StrategyOutcome]) -> String {
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                o.strategy.to_string(),
                o.report.domains.len().to_string(),
                format!("{:.3}", o.report.f),
                format!("{:.3}", o.report.accuracy),
                format!("{:.3}", o.report.f_weighted),
                format!("{:.3}", o.report.accuracy_weighted),
                format!("{:.3}", o.mean_cv_f()),
            ]
        })
        .collect();
    aligned_table(&["strategy", "domains", "F", "A", "F^W", "A^W", "cv F"], &rows)
}

/// MI and coverage of every registry feature over the training split, each
/// message featurized with its own domain's lexicons.
pub fn feature_diagnostics(train: &AnalyzedCorpus, min_doc_freq: u32) -> Vec<FeatureDiagnostic> {
    let per_domain: Vec<Vec<(crate::features::FeatureVector, bool)>> = train
        .corpus
        .domains()
        .cloned()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|d| {
            let Ok(lex) = train.domain_lexicons(d, min_doc_freq) else {
                return Vec::new();
            };
            train
                .corpus
                .positions(d)
                .into_iter()
                .map(|p| (train.features(p, &lex), train.corpus.messages()[p].label.is_actionable()))
                .collect()
        })
        .collect();
    let rows: Vec<(crate::features::FeatureVector, bool)> = per_domain.into_iter().flatten().collect();
    let labels: Vec<bool> = rows.iter().map(|(_, l)| *l).collect();
    let diagnostics = Feature::ALL
        .iter()
        .map(|&f| {
            let firings: Vec<bool> = rows.iter().map(|(v, _)| v.fires(f)).collect();
            FeatureDiagnostic {
                feature: f.name().to_string(),
                mutual_information: mutual_information(&firings, &labels).unwrap_or(0.0),
                coverage: coverage(&firings),
            }
        })
        .collect();
    rank_diagnostics(diagnostics)
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Ingests the configured corpus and applies the population file when present.
pub fn load_corpus(cfg: &RunConfig) -> Result<(LabeledCorpus, IngestReport)> {
    let path = cfg.corpus_path();
    let ingested = ingest(open(&path)?).map_err(|e| match e {
        crate::corpus::CorpusError::Io(io) => Error::io(&path, io),
        other => other.into(),
    })?;
    let mut corpus = ingested.corpus;
    let pop_path = cfg.populations_path();
    if cfg.populations.is_some() || pop_path.exists() {
        corpus.set_populations(&read_populations(open(&pop_path)?)?);
    }
    Ok((corpus, ingested.report))
}

fn load_prepared(cfg: &RunConfig) -> Result<Prepared> {
    let (corpus, _) = load_corpus(cfg)?;
    prepare(&corpus, Arc::new(cfg.shared_resources()?), cfg.seed, cfg.eval_fraction)
}

fn selected_domains(cfg: &RunConfig, corpus: &LabeledCorpus) -> Vec<DomainKey> {
    match &cfg.domain {
        Some(d) => vec![d.clone()],
        None => corpus.domains().cloned().collect(),
    }
}

fn failures_tsv(failures: &[(DomainKey, String)]) -> String {
    let mut out = String::new();
    for (d, reason) in failures {
        let _ = writeln!(out, "{}\t{}", d.key_string(), reason.replace(['\t', '\n'], " "));
    }
    out
}

fn selections_tsv(registry: &ModelRegistry) -> String {
    let mut out = String::from("target\tsource\tcategory\ttechnique\tstrategy\tcv_f\n");
    for s in registry.entries.values() {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.target.key_string(),
            s.source.key_string(),
            s.source.category(),
            s.technique,
            s.strategy,
            s.cv_f
        );
    }
    out
}

#[derive(Deserialize)]
struct ClassifyRecord {
    id: String,
    text: String,
    company: String,
    language: String,
    source: String,
}

/// Runs one command. Returns a one-line summary for stdout; warnings go to
/// `warn`.
pub fn run(command: Command, cfg: &RunConfig, warn: &mut dyn Write) -> Result<String> {
    let report = |name: &str| cfg.report_dir.join(name);
    match command {
        Command::Synth => {
            let scenario = scenario(&cfg.scenario)?;
            let corpus = generate_synthetic(&scenario, cfg.seed)?;
            let mut jsonl = Vec::new();
            corpus.write_jsonl(&mut jsonl).expect("in-memory write");
            let mut pops = Vec::new();
            corpus.write_populations(&mut pops).expect("in-memory write");
            let (cp, pp) = (cfg.corpus_path(), cfg.populations_path());
            write_file(&cp, jsonl)?;
            write_file(&pp, pops)?;
            Ok(format!(
                "synth\tscenario={}\tmessages={}\tdomains={}\tcorpus={}",
                cfg.scenario,
                corpus.len(),
                corpus.populations().len(),
                cp.display()
            ))
        }
        Command::Ingest => {
            let (corpus, ingest_report) = load_corpus(cfg)?;
            write_file(&report("ingest.tsv"), ingest_report.to_string())?;
            Ok(format!(
                "ingest\taccepted={}\trejected={}\tdomains={}",
                ingest_report.accepted,
                ingest_report.rejected(),
                corpus.populations().len()
            ))
        }
        Command::LexiconBuild => {
            let prepared = load_prepared(cfg)?;
            let mut built = 0;
            for d in selected_domains(cfg, &prepared.train.corpus) {
                let lex = match prepared.train.domain_lexicons(&d, cfg.min_doc_freq) {
                    Ok(l) => l,
                    Err(e) => {
                        let _ = writeln!(warn, "warning\tdomain={}\t{e}", d.key_string());
                        continue;
                    }
                };
                for label in crate::corpus::Label::BOTH {
                    let mut buf = Vec::new();
                    write_lexicon(&mut buf, lex.get(label), lex.stats(label), cfg.built).expect("in-memory write");
                    write_file(&report(&format!("lexicons/{}.{}.tsv", d.file_stem(), label)), buf)?;
                }
                built += 1;
            }
            Ok(format!("lexicon build\tdomains={built}\tdir={}", report("lexicons").display()))
        }
        Command::LexiconDump => {
            let prepared = load_prepared(cfg)?;
            let mut out = String::from("domain\tlabel\trank\tterm\tscore\n");
            for d in selected_domains(cfg, &prepared.train.corpus) {
                let lex = prepared.train.domain_lexicons(&d, cfg.min_doc_freq)?;
                for label in crate::corpus::Label::BOTH {
                    let scores = lex.get(label).scores.iter().map(|(t, s)| (t.as_str(), *s));
                    for row in export_top_keywords(scores, cfg.top) {
                        let _ = writeln!(out, "{}\t{}\t{}", d.key_string(), label, row);
                    }
                }
            }
            let path = report("keywords.tsv");
            write_file(&path, out)?;
            Ok(format!("lexicon dump\ttop={}\tfile={}", cfg.top, path.display()))
        }
        Command::LexiconScatter => {
            let prepared = load_prepared(cfg)?;
            let domains = selected_domains(cfg, &prepared.train.corpus);
            for d in &domains {
                let stats_a = build_term_stats(&prepared.train.corpus, d, crate::corpus::Label::Actionable)?;
                let stats_n = build_term_stats(&prepared.train.corpus, d, crate::corpus::Label::NonActionable)?;
                let rows = export_scatter(&compute_adf(&stats_a)?, &compute_adf(&stats_n)?);
                let mut buf = Vec::new();
                write_scatter(&mut buf, &rows).expect("in-memory write");
                write_file(&report(&format!("scatter/{}.tsv", d.file_stem())), buf)?;
            }
            Ok(format!("lexicon scatter\tdomains={}\tdir={}", domains.len(), report("scatter").display()))
        }
        Command::Train => {
            let prepared = load_prepared(cfg)?;
            let sets = candidate_sets(&prepared.train, &cfg.selection_config()?);
            let mut out = String::from("target\tsource\tcategory\ttechnique\tconfig\ttraining_size\tcv_f\n");
            let mut failures = Vec::new();
            let mut count = 0;
            for (target, set) in &sets {
                match set {
                    Ok(set) => {
                        for c in &set.candidates {
                            count += 1;
                            let _ = writeln!(
                                out,
                                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                                target.key_string(),
                                c.source.key_string(),
                                c.source.category(),
                                c.technique,
                                c.config,
                                c.training_size,
                                c.cv_f
                            );
                        }
                    }
                    Err(e) => failures.push((target.clone(), e.to_string())),
                }
            }
            write_file(&report("candidates.tsv"), out)?;
            write_file(&report("candidate_failures.tsv"), failures_tsv(&failures))?;
            Ok(format!("train\ttargets={}\tcandidates={count}\tfailed={}", sets.len(), failures.len()))
        }
        Command::Select => {
            let prepared = load_prepared(cfg)?;
            let sets = candidate_sets(&prepared.train, &cfg.selection_config()?);
            let (registry, failures) = select_all(&sets, cfg.strategy, cfg.built);
            for (d, e) in &failures {
                let _ = writeln!(warn, "warning\tdomain={}\t{e}", d.key_string());
            }
            let dir = registry.persist(&cfg.registry_path())?;
            let census = selection_census(registry.entries.values());
            write_file(&report("selections.tsv"), selections_tsv(&registry))?;
            write_file(&report("selection_failures.tsv"), failures_tsv(&failures))?;
            write_file(&report("census.txt"), census.render_table())?;
            write_file(&report("census.tsv"), census.render_tsv())?;
            Ok(format!(
                "select\tstrategy={}\tselected={}\tunavailable={}\tregistry={}",
                cfg.strategy,
                registry.len(),
                failures.len(),
                dir.display()
            ))
        }
        Command::Evaluate => {
            let registry = ModelRegistry::load(&cfg.registry_path())?;
            let prepared = load_prepared(cfg)?;
            let r = evaluate_registry(&registry, &prepared.eval, &prepared.train.corpus, "held-out evaluation")?;
            write_file(&report("evaluation.txt"), r.render_table())?;
            write_file(&report("evaluation.tsv"), r.render_tsv())?;
            Ok(format!(
                "evaluate\tdomains={}\tf={:.6}\taccuracy={:.6}\tf_weighted={:.6}\taccuracy_weighted={:.6}",
                r.domains.len(),
                r.f,
                r.accuracy,
                r.f_weighted,
                r.accuracy_weighted
            ))
        }
        Command::Classify => {
            let input = cfg
                .input
                .as_ref()
                .ok_or_else(|| Error::Config("classify needs --input".into()))?;
            let reader = open(input)?;
            let registry = ModelRegistry::load(&cfg.registry_path())?;
            let shared = cfg.shared_resources()?;
            let out_path = cfg.output.clone().unwrap_or_else(|| report("classified.tsv"));
            let mut out = String::new();
            let (mut labeled, mut skipped) = (0, 0);
            for (n, line) in reader.lines().enumerate() {
                let line = line.map_err(|e| Error::io(input, e))?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: ClassifyRecord = serde_json::from_str(&line)
                    .map_err(|e| Error::Config(format!("{}: line {}: {e}", input.display(), n + 1)))?;
                let source: Source = rec.source.trim().to_lowercase().parse().map_err(|e: String| {
                    Error::Config(format!("{}: line {}: {e}", input.display(), n + 1))
                })?;
                let key = DomainKey::full(&rec.company.trim().to_lowercase(), &rec.language.trim().to_lowercase(), source);
                let Some(selected) = registry.get(&key) else {
                    skipped += 1;
                    let _ = writeln!(warn, "warning\tid={}\tunknown domain {}", rec.id, key.key_string());
                    continue;
                };
                let text: String = rec.text.nfc().collect();
                let p = selected.predict(&MessageAnalysis::new(&text, &key.language.clone().unwrap_or_default(), &shared));
                let _ = writeln!(out, "{}\t{}\t{}", rec.id, p.label, p.score);
                labeled += 1;
            }
            write_file(&out_path, out)?;
            Ok(format!("classify\tlabeled={labeled}\tskipped={skipped}\toutput={}", out_path.display()))
        }
        Command::ReportMi => {
            let prepared = load_prepared(cfg)?;
            let rows = feature_diagnostics(&prepared.train, cfg.min_doc_freq);
            write_file(&report("mi.txt"), render_diagnostics(&rows))?;
            write_file(&report("mi.tsv"), diagnostics_tsv(&rows))?;
            Ok(format!("report mi\tfeatures={}", rows.len()))
        }
        Command::ReportCensus => {
            let registry = ModelRegistry::load(&cfg.registry_path())?;
            let census = selection_census(registry.entries.values());
            write_file(&report("census.txt"), census.render_table())?;
            write_file(&report("census.tsv"), census.render_tsv())?;
            Ok(format!("report census\tselections={}", census.total))
        }
        Command::ReportStrategy => {
            let prepared = load_prepared(cfg)?;
            let outcomes = compare_strategies(&prepared, &cfg.selection_config()?, cfg.built)?;
            for o in &outcomes {
                write_file(&report(&format!("strategy_{}.tsv", o.strategy)), o.report.render_tsv())?;
            }
            let mut tsv = String::from("strategy\tdomains\tf\taccuracy\tf_weighted\taccuracy_weighted\tmean_cv_f\n");
            for o in &outcomes {
                let _ = writeln!(
                    tsv,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    o.strategy,
                    o.report.domains.len(),
                    o.report.f,
                    o.report.accuracy,
                    o.report.f_weighted,
                    o.report.accuracy_weighted,
                    o.mean_cv_f()
                );
            }
            write_file(&report("strategy.txt"), render_strategy_table(&outcomes))?;
            write_file(&report("strategy.tsv"), tsv)?;
            let fw: Vec<String> = outcomes.iter().map(|o| format!("{}={:.4}", o.strategy, o.report.f_weighted)).collect();
            Ok(format!("report strategy\tf_weighted\t{}", fw.join("\t")))
        }
    }
}
