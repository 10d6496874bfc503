//! Model selection over domain generalizations.
//!
//! Every fully specified target domain has eight candidate source domains
//! (its attribute power set). Each eligible source gets its own lexicons and
//! one model per configured technique; candidates are scored by mean F over
//! stratified folds of the target's training set, and the A/B/C/D strategies
//! pick among them. Winners are kept in a versioned [`ModelRegistry`].

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::{Arc, Mutex, RwLock};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::corpus::{mix_seed, DomainKey, Label, LabeledCorpus};
use crate::features::{Feature, FeatureVector, MessageAnalysis};
use crate::learners::{f_measure, stratified_folds, train, Hyperparameters, LabeledExample, Prediction, Technique, TrainedModel};
use crate::lexicon::{lexicons_from_documents, read_lexicon, write_lexicon, DomainLexicons, LexiconError, MIN_DOC_FREQ};
use crate::metrics::aligned_table;
use crate::resources::SharedResources;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error("domain {0} is not fully specified")]
    PartialDomain(String),
    #[error("no candidate models for {target}: {reason}")]
    NoCandidates { target: String, reason: String },
    #[error("strategy {strategy} unavailable for {target}: no {required} candidate")]
    StrategyUnavailable {
        strategy: Strategy,
        target: String,
        required: String,
    },
    #[error("registry {path}: {reason}")]
    Registry { path: PathBuf, reason: String },
    #[error("registry {path}: incompatible version `{found}` (supported: {REGISTRY_VERSION})")]
    IncompatibleVersion { path: PathBuf, found: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Logistic regression on the fully specified domain.
    A,
    /// Logistic regression on the fully generalized domain.
    B,
    /// Best domain for logistic regression.
    C,
    /// Best domain and technique.
    D,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::A, Strategy::B, Strategy::C, Strategy::D];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::A => "A",
            Strategy::B => "B",
            Strategy::C => "C",
            Strategy::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "A" | "a" => Ok(Strategy::A),
            "B" | "b" => Ok(Strategy::B),
            "C" | "c" => Ok(Strategy::C),
            "D" | "d" => Ok(Strategy::D),
            other => Err(format!("unknown strategy `{other}` (expected A, B, C or D)")),
        }
    }
}

/// The eight generalizations of a fully specified domain, most specific
/// first: `{c,l,s} {c,l} {c,s} {l,s} {c} {l} {s} {}`.
pub fn enumerate_generalizations(domain: &DomainKey) -> Result<Vec<DomainKey>, SelectionError> {
    if !domain.fully_specified() {
        return Err(SelectionError::PartialDomain(domain.to_string()));
    }
    const MASKS: [(bool, bool, bool); 8] = [
        (true, true, true),
        (true, true, false),
        (true, false, true),
        (false, true, true),
        (true, false, false),
        (false, true, false),
        (false, false, true),
        (false, false, false),
    ];
    Ok(MASKS.iter().map(|&(c, l, s)| domain.project(c, l, s)).collect())
}

/// Domain categories in the fixed display order.
pub const CATEGORY_ORDER: [&str; 8] = ["{c,l,s}", "{c,l}", "{c,s}", "{l,s}", "{c}", "{l}", "{s}", "{}"];

#[derive(Clone, Debug, PartialEq)]
pub struct SelectionConfig {
    /// Technique and hyperparameter pairs; several entries per technique form a grid.
    pub configs: Vec<(Technique, Hyperparameters)>,
    pub cv_folds: usize,
    /// Minimum training messages per class for a source domain to produce candidates.
    pub min_class_size: usize,
    pub min_doc_freq: u32,
    pub seed: u64,
}

impl Default for SelectionConfig {
    fn default() -> Self {
        SelectionConfig {
            configs: Technique::ALL.iter().map(|t| (*t, Hyperparameters::default())).collect(),
            cv_folds: 5,
            min_class_size: 20,
            min_doc_freq: MIN_DOC_FREQ,
            seed: 0,
        }
    }
}

/// A corpus with its domain-independent per-message analysis precomputed.
#[derive(Debug)]
pub struct AnalyzedCorpus {
    pub corpus: LabeledCorpus,
    pub analyses: Vec<MessageAnalysis>,
}

impl AnalyzedCorpus {
    pub fn new(corpus: LabeledCorpus, shared: &SharedResources) -> Self {
        let analyses = corpus
            .messages()
            .par_iter()
            .map(|m| MessageAnalysis::of_message(m, shared))
            .collect();
        AnalyzedCorpus { corpus, analyses }
    }

    fn examples(&self, positions: &[usize], lexicons: &DomainLexicons) -> Vec<LabeledExample> {
        positions
            .iter()
            .map(|&p| LabeledExample::new(self.analyses[p].features(lexicons).to_sparse(), self.corpus.messages()[p].label))
            .collect()
    }

    fn lexicons(&self, domain: &DomainKey, positions: &[usize], min_doc_freq: u32) -> Result<DomainLexicons, String> {
        let docs = positions.iter().map(|&p| (self.corpus.messages()[p].label, &self.analyses[p].doc));
        lexicons_from_documents(domain, docs, min_doc_freq).map_err(|e| e.to_string())
    }

    /// Lexicons built from every message under `domain`.
    pub fn domain_lexicons(&self, domain: &DomainKey, min_doc_freq: u32) -> Result<DomainLexicons, LexiconError> {
        let docs = self
            .corpus
            .positions(domain)
            .into_iter()
            .map(|p| (self.corpus.messages()[p].label, &self.analyses[p].doc));
        lexicons_from_documents(domain, docs, min_doc_freq)
    }

    /// Features of the message at `position` under `lexicons`.
    pub fn features(&self, position: usize, lexicons: &DomainLexicons) -> FeatureVector {
        self.analyses[position].features(lexicons)
    }
}

/// Lexicons plus one trained model per configuration for a source domain.
#[derive(Debug)]
pub struct SourceModels {
    pub source: DomainKey,
    pub lexicons: Arc<DomainLexicons>,
    pub models: Vec<Arc<TrainedModel>>,
    pub training_size: usize,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub source: DomainKey,
    pub technique: Technique,
    /// Index into [`SelectionConfig::configs`].
    pub config: usize,
    pub model: Arc<TrainedModel>,
    pub lexicons: Arc<DomainLexicons>,
    pub training_size: usize,
    pub cv_f: f64,
}

#[derive(Clone, Debug)]
pub struct ModelCandidateSet {
    pub target: DomainKey,
    pub candidates: Vec<Candidate>,
    /// Generalizations that produced no candidates, with the reason.
    pub skipped: Vec<(DomainKey, String)>,
}

/// Trains and caches source-domain models, and scores them against targets.
pub struct CandidateEngine<'a> {
    train: &'a AnalyzedCorpus,
    config: SelectionConfig,
    cache: Mutex<BTreeMap<DomainKey, Result<Arc<SourceModels>, String>>>,
}

impl<'a> CandidateEngine<'a> {
    pub fn new(train: &'a AnalyzedCorpus, config: SelectionConfig) -> Self {
        CandidateEngine {
            train,
            config,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn config(&self) -> &SelectionConfig {
        &self.config
    }

    /// `None` if the source has enough training data of both classes,
    /// otherwise the reason it is skipped.
    fn ineligibility(&self, source: &DomainKey) -> Option<String> {
        let (a, n) = self.train.corpus.label_counts(source);
        let min = self.config.min_class_size;
        (a.min(n) < min).then(|| format!("{a}/{n} training messages per class, minimum {min}"))
    }

    fn build_source(&self, source: &DomainKey) -> Result<Arc<SourceModels>, String> {
        let positions = self.train.corpus.positions(source);
        let lexicons = Arc::new(self.train.lexicons(source, &positions, self.config.min_doc_freq)?);
        let examples = self.train.examples(&positions, &lexicons);
        let models = self
            .config
            .configs
            .par_iter()
            .map(|(t, p)| {
                train(*t, p, &examples).map(|mut m| {
                    m.meta.domain = Some(source.clone());
                    Arc::new(m)
                })
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        Ok(Arc::new(SourceModels {
            source: source.clone(),
            lexicons,
            models,
            training_size: positions.len(),
        }))
    }

    /// Source models for `source`, trained on first use.
    pub fn source_models(&self, source: &DomainKey) -> Result<Arc<SourceModels>, String> {
        if let Some(r) = self.cache.lock().expect("cache lock").get(source) {
            return r.clone();
        }
        let built = self.build_source(source);
        self.cache
            .lock()
            .expect("cache lock")
            .entry(source.clone())
            .or_insert(built)
            .clone()
    }

    /// Trains every eligible source of every target up front, in parallel.
    pub fn prepare(&self, targets: &[DomainKey]) {
        let mut sources: Vec<DomainKey> = targets
            .iter()
            .filter_map(|t| enumerate_generalizations(t).ok())
            .flatten()
            .filter(|s| self.ineligibility(s).is_none())
            .collect();
        sources.sort();
        sources.dedup();
        let built: Vec<_> = sources.par_iter().map(|s| (s.clone(), self.build_source(s))).collect();
        let mut cache = self.cache.lock().expect("cache lock");
        for (s, r) in built {
            cache.entry(s).or_insert(r);
        }
    }

    /// Scores all candidates for `target` on stratified folds of its training set.
    /// The target's own domain is cross-validated with lexicons rebuilt per fold;
    /// other sources use their fixed models.
    pub fn train_candidates(&self, target: &DomainKey) -> Result<ModelCandidateSet, SelectionError> {
        let sources = enumerate_generalizations(target)?;
        let no_candidates = |reason: String| SelectionError::NoCandidates {
            target: target.to_string(),
            reason,
        };
        let positions = self.train.corpus.positions(target);
        let labels: Vec<Label> = positions.iter().map(|&p| self.train.corpus.messages()[p].label).collect();
        let k = self.config.cv_folds;
        let folds = stratified_folds(&labels, k, mix_seed(self.config.seed, &target.key_string()))
            .map_err(|e| no_candidates(e.to_string()))?;
        let mut candidates = Vec::new();
        let mut skipped = Vec::new();
        for source in sources {
            if let Some(reason) = self.ineligibility(&source) {
                skipped.push((source, reason));
                continue;
            }
            let built = match self.source_models(&source) {
                Ok(b) => b,
                Err(reason) => {
                    skipped.push((source, reason));
                    continue;
                }
            };
            let scores = if source == *target {
                self.own_domain_cv(target, &positions, &folds)
            } else {
                Ok(self.fixed_model_scores(&built, &positions, &folds))
            };
            let scores = match scores {
                Ok(s) => s,
                Err(reason) => {
                    skipped.push((source, reason));
                    continue;
                }
            };
            for (i, cv_f) in scores.into_iter().enumerate() {
                candidates.push(Candidate {
                    source: source.clone(),
                    technique: self.config.configs[i].0,
                    config: i,
                    model: built.models[i].clone(),
                    lexicons: built.lexicons.clone(),
                    training_size: built.training_size,
                    cv_f,
                });
            }
        }
        if candidates.is_empty() {
            let reasons: Vec<String> = skipped.iter().map(|(s, r)| format!("{s}: {r}")).collect();
            return Err(no_candidates(reasons.join("; ")));
        }
        Ok(ModelCandidateSet {
            target: target.clone(),
            candidates,
            skipped,
        })
    }

    fn fold_members(folds: &[usize], fold: usize, held: bool) -> Vec<usize> {
        (0..folds.len()).filter(|&i| (folds[i] == fold) == held).collect()
    }

    fn fixed_model_scores(&self, built: &SourceModels, positions: &[usize], folds: &[usize]) -> Vec<f64> {
        let examples = self.train.examples(positions, &built.lexicons);
        let k = self.config.cv_folds;
        built
            .models
            .iter()
            .map(|m| {
                (0..k)
                    .map(|fold| {
                        let held: Vec<&LabeledExample> =
                            Self::fold_members(folds, fold, true).into_iter().map(|i| &examples[i]).collect();
                        f_measure(m, &held)
                    })
                    .sum::<f64>()
                    / k as f64
            })
            .collect()
    }

    fn own_domain_cv(&self, target: &DomainKey, positions: &[usize], folds: &[usize]) -> Result<Vec<f64>, String> {
        let k = self.config.cv_folds;
        let per_fold: Vec<Vec<f64>> = (0..k)
            .into_par_iter()
            .map(|fold| {
                let train_pos: Vec<usize> = Self::fold_members(folds, fold, false).into_iter().map(|i| positions[i]).collect();
                let held_pos: Vec<usize> = Self::fold_members(folds, fold, true).into_iter().map(|i| positions[i]).collect();
                let lexicons = self.train.lexicons(target, &train_pos, self.config.min_doc_freq)?;
                let train_ex = self.train.examples(&train_pos, &lexicons);
                let held_ex = self.train.examples(&held_pos, &lexicons);
                let held: Vec<&LabeledExample> = held_ex.iter().collect();
                self.config
                    .configs
                    .iter()
                    .map(|(t, p)| train(*t, p, &train_ex).map(|m| f_measure(&m, &held)).map_err(|e| e.to_string()))
                    .collect()
            })
            .collect::<Result<_, String>>()?;
        Ok((0..self.config.configs.len())
            .map(|i| per_fold.iter().map(|f| f[i]).sum::<f64>() / k as f64)
            .collect())
    }
}

/// One-shot candidate training for a single target.
pub fn train_candidates(
    train: &AnalyzedCorpus,
    target: &DomainKey,
    config: &SelectionConfig,
) -> Result<ModelCandidateSet, SelectionError> {
    CandidateEngine::new(train, config.clone()).train_candidates(target)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectedModel {
    pub target: DomainKey,
    pub source: DomainKey,
    pub technique: Technique,
    pub strategy: Strategy,
    pub cv_f: f64,
    pub model: Arc<TrainedModel>,
    pub lexicons: Arc<DomainLexicons>,
}

impl SelectedModel {
    pub fn predict(&self, analysis: &MessageAnalysis) -> Prediction {
        self.model.predict(&analysis.features(&self.lexicons).to_sparse())
    }
}

/// Higher cv_f, then higher specificity, then larger training population,
/// then earlier technique, then earlier configuration.
fn better(a: &Candidate, b: &Candidate) -> bool {
    a.cv_f
        .total_cmp(&b.cv_f)
        .then(a.source.specificity().cmp(&b.source.specificity()))
        .then(a.training_size.cmp(&b.training_size))
        .then(b.technique.cmp(&a.technique))
        .then(b.config.cmp(&a.config))
        .is_gt()
}

pub fn select(strategy: Strategy, set: &ModelCandidateSet) -> Result<SelectedModel, SelectionError> {
    let target = &set.target;
    let global = DomainKey::global();
    let admissible = |c: &&Candidate| match strategy {
        Strategy::A => c.technique == Technique::Logistic && c.source == *target,
        Strategy::B => c.technique == Technique::Logistic && c.source == global,
        Strategy::C => c.technique == Technique::Logistic,
        Strategy::D => true,
    };
    let best = set
        .candidates
        .iter()
        .filter(admissible)
        .fold(None::<&Candidate>, |best, c| match best {
            Some(b) if !better(c, b) => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| SelectionError::StrategyUnavailable {
            strategy,
            target: target.to_string(),
            required: match strategy {
                Strategy::A => format!("logistic {}", target.category()),
                Strategy::B => "logistic {}".to_string(),
                Strategy::C => "logistic".to_string(),
                Strategy::D => "any".to_string(),
            },
        })?;
    Ok(SelectedModel {
        target: target.clone(),
        source: best.source.clone(),
        technique: best.technique,
        strategy,
        cv_f: best.cv_f,
        model: best.model.clone(),
        lexicons: best.lexicons.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub total: usize,
    /// Every category, sorted by count descending then display order.
    pub categories: Vec<(&'static str, usize)>,
    /// Every technique, sorted by count descending then declaration order.
    pub techniques: Vec<(Technique, usize)>,
}

fn percent(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

pub fn selection_census<'a>(selections: impl IntoIterator<Item = &'a SelectedModel>) -> Census {
    let mut categories: Vec<(&'static str, usize)> = CATEGORY_ORDER.iter().map(|c| (*c, 0)).collect();
    let mut techniques: Vec<(Technique, usize)> = Technique::ALL.iter().map(|t| (*t, 0)).collect();
    let mut total = 0;
    for s in selections {
        total += 1;
        let cat = s.source.category();
        if let Some(row) = categories.iter_mut().find(|(c, _)| *c == cat) {
            row.1 += 1;
        }
        if let Some(row) = techniques.iter_mut().find(|(t, _)| *t == s.technique) {
            row.1 += 1;
        }
    }
    categories.sort_by(|a, b| b.1.cmp(&a.1));
    techniques.sort_by(|a, b| b.1.cmp(&a.1));
    Census {
        total,
        categories,
        techniques,
    }
}

impl Census {
    pub fn category_percent(&self, category: &str) -> f64 {
        let n = self.categories.iter().find(|(c, _)| *c == category).map_or(0, |r| r.1);
        percent(n, self.total)
    }

    pub fn render_table(&self) -> String {
        let rows = |items: Vec<(String, usize)>| -> Vec<Vec<String>> {
            items
                .into_iter()
                .map(|(name, n)| vec![name, n.to_string(), format!("{:.1}%", percent(n, self.total))])
                .collect()
        };
        let cats = rows(self.categories.iter().map(|(c, n)| (c.to_string(), *n)).collect());
        let techs = rows(self.techniques.iter().map(|(t, n)| (t.to_string(), *n)).collect());
        let mut out = aligned_table(&["domain category", "selected", "percent"], &cats);
        out.push('\n');
        out.push_str(&aligned_table(&["technique", "selected", "percent"], &techs));
        out
    }

    pub fn render_tsv(&self) -> String {
        let mut out = String::from("kind\tname\tcount\tpercent\n");
        for (c, n) in &self.categories {
            let _ = writeln!(out, "category\t{c}\t{n}\t{}", percent(*n, self.total));
        }
        for (t, n) in &self.techniques {
            let _ = writeln!(out, "technique\t{t}\t{n}\t{}", percent(*n, self.total));
        }
        out
    }
}

pub const REGISTRY_VERSION: u32 = 1;
const MANIFEST_HEADER: &str = "actionable-registry";
const SELECTION_HEADER: &str = "actionable-selection 1";

/// Selected models keyed by fully specified target domain.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelRegistry {
    pub built: i64,
    pub entries: BTreeMap<DomainKey, SelectedModel>,
}

fn feature_name(i: u32) -> String {
    Feature::from_index(i as usize).map_or_else(|| format!("#{i}"), |f| f.name().to_string())
}

fn feature_index(name: &str) -> Option<u32> {
    Feature::from_name(name).map(|f| f.index() as u32)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ModelRegistry {
    pub fn new(built: i64) -> Self {
        ModelRegistry {
            built,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, selected: SelectedModel) -> Result<(), SelectionError> {
        if !selected.target.fully_specified() {
            return Err(SelectionError::PartialDomain(selected.target.to_string()));
        }
        self.entries.insert(selected.target.clone(), selected);
        Ok(())
    }

    pub fn get(&self, domain: &DomainKey) -> Option<&SelectedModel> {
        self.entries.get(domain)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Directory holding the current format version under `root`.
    pub fn version_dir(root: &Path) -> PathBuf {
        root.join(format!("v{REGISTRY_VERSION}"))
    }

    fn entry_bytes(s: &SelectedModel, built: i64) -> Vec<u8> {
        let mut out = Vec::new();
        let w = |out: &mut Vec<u8>| -> std::io::Result<()> {
            writeln!(out, "{SELECTION_HEADER}")?;
            writeln!(out, "target\t{}", s.target.key_string())?;
            writeln!(out, "source\t{}", s.source.key_string())?;
            writeln!(out, "strategy\t{}", s.strategy)?;
            writeln!(out, "cv_f\t{}", s.cv_f)?;
            s.model.write(&mut *out, feature_name)?;
            for label in Label::BOTH {
                write_lexicon(&mut *out, s.lexicons.get(label), s.lexicons.stats(label), built)?;
            }
            Ok(())
        };
        w(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    /// Writes `<root>/v<version>/manifest` plus one `.model` file per domain.
    /// The directory is assembled beside the destination and renamed into place.
    pub fn persist(&self, root: &Path) -> Result<PathBuf, crate::Error> {
        fs::create_dir_all(root).map_err(|e| crate::Error::io(root, e))?;
        let dest = Self::version_dir(root);
        let tmp = root.join(format!(".v{REGISTRY_VERSION}.tmp"));
        if tmp.exists() {
            fs::remove_dir_all(&tmp).map_err(|e| crate::Error::io(&tmp, e))?;
        }
        fs::create_dir_all(&tmp).map_err(|e| crate::Error::io(&tmp, e))?;
        let mut manifest = format!(
            "{MANIFEST_HEADER} {REGISTRY_VERSION}\nbuilt\t{}\nentries\t{}\n",
            self.built,
            self.entries.len()
        );
        for (key, s) in &self.entries {
            let file = format!("{}.model", key.file_stem());
            let bytes = Self::entry_bytes(s, self.built);
            let path = tmp.join(&file);
            fs::write(&path, &bytes).map_err(|e| crate::Error::io(&path, e))?;
            let _ = writeln!(manifest, "entry\t{}\t{}\t{}", key.key_string(), file, sha256_hex(&bytes));
        }
        let digest = sha256_hex(manifest.as_bytes());
        let _ = writeln!(manifest, "manifest-sha256\t{digest}");
        let mpath = tmp.join("manifest");
        fs::write(&mpath, manifest).map_err(|e| crate::Error::io(&mpath, e))?;
        let old = root.join(format!(".v{REGISTRY_VERSION}.old"));
        if dest.exists() {
            if old.exists() {
                fs::remove_dir_all(&old).map_err(|e| crate::Error::io(&old, e))?;
            }
            fs::rename(&dest, &old).map_err(|e| crate::Error::io(&dest, e))?;
        }
        fs::rename(&tmp, &dest).map_err(|e| crate::Error::io(&tmp, e))?;
        if old.exists() {
            fs::remove_dir_all(&old).map_err(|e| crate::Error::io(&old, e))?;
        }
        Ok(dest)
    }

    /// Loads from a registry root (or directly from a version directory),
    /// validating the manifest hash and every entry hash.
    pub fn load(root: &Path) -> Result<Self, SelectionError> {
        let dir = if root.join("manifest").is_file() {
            root.to_path_buf()
        } else {
            let dir = Self::version_dir(root);
            if !dir.is_dir() {
                let other = fs::read_dir(root)
                    .ok()
                    .into_iter()
                    .flatten()
                    .flatten()
                    .map(|e| e.file_name().to_string_lossy().into_owned())
                    .filter(|n| n.starts_with('v'))
                    .min();
                return Err(match other {
                    Some(found) => SelectionError::IncompatibleVersion {
                        path: root.to_path_buf(),
                        found,
                    },
                    None => SelectionError::Registry {
                        path: root.to_path_buf(),
                        reason: "no registry found".into(),
                    },
                });
            }
            dir
        };
        let mpath = dir.join("manifest");
        let bad = |path: &Path, reason: String| SelectionError::Registry {
            path: path.to_path_buf(),
            reason,
        };
        let text = fs::read_to_string(&mpath).map_err(|e| bad(&mpath, e.to_string()))?;
        let mut lines: Vec<&str> = text.lines().collect();
        let header = lines.first().copied().unwrap_or("");
        match header.strip_prefix(MANIFEST_HEADER).map(str::trim) {
            Some(v) if v == REGISTRY_VERSION.to_string() => {}
            Some(v) => {
                return Err(SelectionError::IncompatibleVersion {
                    path: mpath,
                    found: v.to_string(),
                })
            }
            None => return Err(bad(&mpath, "missing manifest header".into())),
        }
        let last = lines.pop().unwrap_or("");
        let Some(expected) = last.strip_prefix("manifest-sha256\t") else {
            return Err(bad(&mpath, "missing manifest hash".into()));
        };
        let body: String = lines.iter().map(|l| format!("{l}\n")).collect();
        if sha256_hex(body.as_bytes()) != expected {
            return Err(bad(&mpath, "manifest hash mismatch".into()));
        }
        let value = |line: Option<&&str>, key: &str| -> Result<String, SelectionError> {
            line.and_then(|l| l.strip_prefix(&format!("{key}\t")))
                .map(String::from)
                .ok_or_else(|| bad(&mpath, format!("missing `{key}`")))
        };
        let built: i64 = value(lines.get(1), "built")?
            .parse()
            .map_err(|_| bad(&mpath, "bad build timestamp".into()))?;
        let count: usize = value(lines.get(2), "entries")?
            .parse()
            .map_err(|_| bad(&mpath, "bad entry count".into()))?;
        let entry_lines = &lines[3.min(lines.len())..];
        if entry_lines.len() != count {
            return Err(bad(&mpath, format!("expected {count} entries, found {}", entry_lines.len())));
        }
        let mut registry = ModelRegistry::new(built);
        for line in entry_lines {
            let parts: Vec<&str> = line.split('\t').collect();
            let [_, key, file, hash] = parts[..] else {
                return Err(bad(&mpath, format!("bad entry `{line}`")));
            };
            if parts[0] != "entry" || file.contains(['/', '\\']) {
                return Err(bad(&mpath, format!("bad entry `{line}`")));
            }
            let key: DomainKey = key.parse().map_err(|_| bad(&mpath, format!("bad domain key `{key}`")))?;
            let path = dir.join(file);
            let bytes = fs::read(&path).map_err(|e| bad(&path, e.to_string()))?;
            if sha256_hex(&bytes) != hash {
                return Err(bad(&path, "content hash mismatch".into()));
            }
            let selected = parse_entry(&bytes).map_err(|reason| bad(&path, reason))?;
            if selected.target != key {
                return Err(bad(&path, "target does not match manifest".into()));
            }
            registry.insert(selected)?;
        }
        Ok(registry)
    }
}

fn parse_entry(bytes: &[u8]) -> Result<SelectedModel, String> {
    let mut reader = BufReader::new(bytes);
    let mut line = String::new();
    let mut next = |key: &str| -> Result<String, String> {
        line.clear();
        reader.read_line(&mut line).map_err(|e| e.to_string())?;
        let l = line.trim_end_matches('\n');
        if key.is_empty() {
            return Ok(l.to_string());
        }
        l.strip_prefix(&format!("{key}\t"))
            .map(String::from)
            .ok_or_else(|| format!("expected `{key}` row"))
    };
    if next("")? != SELECTION_HEADER {
        return Err("missing selection header".into());
    }
    let target: DomainKey = next("target")?.parse().map_err(|_| "bad target".to_string())?;
    let source: DomainKey = next("source")?.parse().map_err(|_| "bad source".to_string())?;
    let strategy: Strategy = next("strategy")?.parse()?;
    let cv_f: f64 = next("cv_f")?.parse().map_err(|_| "bad cv_f".to_string())?;
    let model = TrainedModel::read(&mut reader, feature_index).map_err(|e| e.to_string())?;
    let mut rest = String::new();
    std::io::Read::read_to_string(&mut reader, &mut rest).map_err(|e| e.to_string())?;
    let sections: Vec<&str> = rest
        .split_inclusive('\n')
        .fold(Vec::<(usize, usize)>::new(), |mut acc, l| {
            let start = acc.last().map_or(0, |s| s.1);
            if l.starts_with("# lexicon") || acc.is_empty() {
                acc.push((start, start + l.len()));
            } else if let Some(last) = acc.last_mut() {
                last.1 += l.len();
            }
            acc
        })
        .into_iter()
        .map(|(a, b)| &rest[a..b])
        .collect();
    if sections.len() != 2 {
        return Err(format!("expected 2 lexicon sections, found {}", sections.len()));
    }
    let (actionable, a_stats, _) = read_lexicon(sections[0].as_bytes()).map_err(|e| e.to_string())?;
    let (non_actionable, n_stats, _) = read_lexicon(sections[1].as_bytes()).map_err(|e| e.to_string())?;
    if actionable.label != Label::Actionable || non_actionable.label != Label::NonActionable {
        return Err("lexicon sections out of order".into());
    }
    Ok(SelectedModel {
        technique: model.technique,
        lexicons: Arc::new(DomainLexicons {
            domain: actionable.domain.clone(),
            actionable,
            non_actionable,
            actionable_stats: a_stats,
            non_actionable_stats: n_stats,
        }),
        model: Arc::new(model),
        target,
        source,
        strategy,
        cv_f,
    })
}

/// Shared registry with atomic replacement: readers hold an `Arc` snapshot
/// that a concurrent [`replace`](Self::replace) never mutates.
#[derive(Debug, Default)]
pub struct RegistryHandle {
    current: RwLock<Arc<ModelRegistry>>,
}

impl RegistryHandle {
    pub fn new(registry: ModelRegistry) -> Self {
        RegistryHandle {
            current: RwLock::new(Arc::new(registry)),
        }
    }

    pub fn snapshot(&self) -> Arc<ModelRegistry> {
        self.current.read().expect("registry lock").clone()
    }

    pub fn replace(&self, registry: ModelRegistry) -> Arc<ModelRegistry> {
        std::mem::replace(&mut *self.current.write().expect("registry lock"), Arc::new(registry))
    }
}
