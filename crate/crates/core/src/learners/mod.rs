//! Online binary linear classifiers over sparse vectors.
//!
//! All seven techniques share one contract: [`train`] runs `epochs` seeded,
//! shuffled passes of the technique's per-example update, and
//! [`TrainedModel::predict`] scores `w . x + bias`, labelling actionable only
//! for a strictly positive score.

mod online;

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use rand::seq::SliceRandom;
use thiserror::Error;

use crate::corpus::{rng_for, DomainKey, Label};
use crate::metrics::{prf_accuracy, ConfusionCounts};

pub use online::{logistic_gradient, logistic_loss};
use online::OnlineState;

#[derive(Debug, Error, PartialEq)]
pub enum LearnerError {
    #[error("training data is empty")]
    Empty,
    #[error("training data has a single class ({0})")]
    SingleClass(Label),
    #[error("cannot build {k} folds: smallest class has {smallest} examples")]
    Folds { k: usize, smallest: usize },
    #[error("invalid hyperparameter {name}: {reason}")]
    Hyperparameter { name: String, reason: String },
    #[error("unknown technique `{0}`")]
    UnknownTechnique(String),
    #[error("model file line {line}: {reason}")]
    Format { line: usize, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Technique {
    Perceptron,
    PassiveAggressive,
    ConfidenceWeighted,
    Arow,
    Scw,
    AdagradRda,
    Logistic,
}

impl Technique {
    /// Declaration order, which is also the tie-break order in selection.
    pub const ALL: [Technique; 7] = [
        Technique::Perceptron,
        Technique::PassiveAggressive,
        Technique::ConfidenceWeighted,
        Technique::Arow,
        Technique::Scw,
        Technique::AdagradRda,
        Technique::Logistic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Technique::Perceptron => "perceptron",
            Technique::PassiveAggressive => "passive_aggressive",
            Technique::ConfidenceWeighted => "confidence_weighted",
            Technique::Arow => "arow",
            Technique::Scw => "scw",
            Technique::AdagradRda => "adagrad_rda",
            Technique::Logistic => "logistic",
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Technique {
    type Err = LearnerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Technique::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| LearnerError::UnknownTechnique(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperparameters {
    /// Passive-aggressive aggressiveness.
    pub pa_c: f64,
    /// Confidence level for CW and SCW, in (0.5, 1).
    pub confidence: f64,
    pub scw_c: f64,
    pub arow_r: f64,
    pub logistic_rate: f64,
    pub logistic_l2: f64,
    pub rda_rate: f64,
    pub rda_l1: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            pa_c: 1.0,
            confidence: 0.9,
            scw_c: 1.0,
            arow_r: 1.0,
            logistic_rate: 0.1,
            logistic_l2: 1e-6,
            rda_rate: 0.1,
            rda_l1: 1e-6,
            epochs: 10,
            seed: 0,
        }
    }
}

impl Hyperparameters {
    pub const NAMES: [&'static str; 10] = [
        "pa_c",
        "confidence",
        "scw_c",
        "arow_r",
        "logistic_rate",
        "logistic_l2",
        "rda_rate",
        "rda_l1",
        "epochs",
        "seed",
    ];

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    /// `(name, value)` pairs in [`NAMES`](Self::NAMES) order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let v = [
            self.pa_c.to_string(),
            self.confidence.to_string(),
            self.scw_c.to_string(),
            self.arow_r.to_string(),
            self.logistic_rate.to_string(),
            self.logistic_l2.to_string(),
            self.rda_rate.to_string(),
            self.rda_l1.to_string(),
            self.epochs.to_string(),
            self.seed.to_string(),
        ];
        Self::NAMES.into_iter().zip(v).collect()
    }

    /// Sets one hyperparameter by name. Returns `Ok(false)` for unknown names.
    pub fn set(&mut self, name: &str, value: &str) -> Result<bool, LearnerError> {
        let bad = |reason: String| LearnerError::Hyperparameter {
            name: name.to_string(),
            reason,
        };
        let float = || value.parse::<f64>().map_err(|e| bad(e.to_string()));
        match name {
            "pa_c" => self.pa_c = float()?,
            "confidence" => self.confidence = float()?,
            "scw_c" => self.scw_c = float()?,
            "arow_r" => self.arow_r = float()?,
            "logistic_rate" => self.logistic_rate = float()?,
            "logistic_l2" => self.logistic_l2 = float()?,
            "rda_rate" => self.rda_rate = float()?,
            "rda_l1" => self.rda_l1 = float()?,
            "epochs" => self.epochs = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            "seed" => self.seed = value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    pub fn validate(&self) -> Result<(), LearnerError> {
        let bad = |name: &str, reason: &str| {
            Err(LearnerError::Hyperparameter {
                name: name.to_string(),
                reason: reason.to_string(),
            })
        };
        for (name, v) in [
            ("pa_c", self.pa_c),
            ("scw_c", self.scw_c),
            ("arow_r", self.arow_r),
            ("logistic_rate", self.logistic_rate),
            ("rda_rate", self.rda_rate),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(name, "must be positive");
            }
        }
        for (name, v) in [("logistic_l2", self.logistic_l2), ("rda_l1", self.rda_l1)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(name, "must be non-negative");
            }
        }
        if !(self.confidence > 0.5 && self.confidence < 1.0) {
            return bad("confidence", "must lie in (0.5, 1)");
        }
        if self.epochs == 0 {
            return bad("epochs", "must be at least 1");
        }
        Ok(())
    }
}

/// Sparse vector as sorted, deduplicated `(index, value)` pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
}

impl SparseVector {
    /// Sorts by index; duplicate indices are summed.
    pub fn new(mut entries: Vec<(u32, f64)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        entries.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        SparseVector { entries }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    /// One past the largest index, 0 when empty.
    pub fn dim(&self) -> usize {
        self.entries.last().map_or(0, |(i, _)| *i as usize + 1)
    }

    /// Indices beyond `w` contribute 0.
    pub fn dot(&self, w: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|&(i, v)| w.get(i as usize).map_or(0.0, |wi| wi * v))
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v * v).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_finite())
    }

    pub(crate) fn add_to(&self, w: &mut [f64], scale: f64) {
        for &(i, v) in &self.entries {
            w[i as usize] += scale * v;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LabeledExample {
    pub features: SparseVector,
    /// +1 actionable, -1 non-actionable.
    pub y: f64,
}

impl LabeledExample {
    pub fn new(features: SparseVector, label: Label) -> Self {
        LabeledExample {
            features,
            y: label.sign(),
        }
    }

    pub fn label(&self) -> Label {
        if self.y > 0.0 {
            Label::Actionable
        } else {
            Label::NonActionable
        }
    }
}

/// Technique-specific per-coordinate state kept alongside the weights.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelState {
    None,
    Variance {
        sigma: Vec<f64>,
        sigma_bias: f64,
    },
    DualAveraging {
        grad_sum: Vec<f64>,
        grad_sq: Vec<f64>,
        grad_sum_bias: f64,
        grad_sq_bias: f64,
        steps: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingMeta {
    pub domain: Option<DomainKey>,
    pub examples: usize,
    pub skipped: usize,
    pub epochs: usize,
    pub seed: u64,
    /// Number of examples that changed the model in each epoch.
    pub updates_per_epoch: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prediction {
    pub score: f64,
    pub label: Label,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub technique: Technique,
    pub params: Hyperparameters,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub state: ModelState,
    pub meta: TrainingMeta,
}

impl TrainedModel {
    pub fn score(&self, x: &SparseVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    pub fn predict(&self, x: &SparseVector) -> Prediction {
        let score = self.score(x);
        Prediction {
            score,
            label: if score > 0.0 { Label::Actionable } else { Label::NonActionable },
        }
    }

    /// Writes the model as a diff-able text block ending in `end-model`.
    /// `name` maps coordinate indices to feature names.
    pub fn write<W: Write>(&self, mut w: W, name: impl Fn(u32) -> String) -> io::Result<()> {
        writeln!(w, "{MODEL_HEADER}")?;
        writeln!(w, "technique\t{}", self.technique)?;
        let domain = self.meta.domain.as_ref().map_or("-".to_string(), DomainKey::key_string);
        writeln!(w, "domain\t{domain}")?;
        writeln!(w, "examples\t{}", self.meta.examples)?;
        writeln!(w, "skipped\t{}", self.meta.skipped)?;
        writeln!(w, "epochs\t{}", self.meta.epochs)?;
        writeln!(w, "seed\t{}", self.meta.seed)?;
        for (k, v) in self.params.entries() {
            writeln!(w, "param\t{k}\t{v}")?;
        }
        let updates: Vec<String> = self.meta.updates_per_epoch.iter().map(usize::to_string).collect();
        writeln!(w, "updates\t{}", updates.join(","))?;
        if let ModelState::DualAveraging { steps, .. } = &self.state {
            writeln!(w, "steps\t{steps}")?;
        }
        writeln!(w, "dim\t{}", self.weights.len())?;
        match &self.state {
            ModelState::None => writeln!(w, "bias\t{}", self.bias)?,
            ModelState::Variance { sigma_bias, .. } => writeln!(w, "bias\t{}\t{sigma_bias}", self.bias)?,
            ModelState::DualAveraging {
                grad_sum_bias,
                grad_sq_bias,
                ..
            } => writeln!(w, "bias\t{}\t{grad_sum_bias}\t{grad_sq_bias}", self.bias)?,
        }
        for (i, wt) in self.weights.iter().enumerate() {
            let n = name(i as u32);
            match &self.state {
                ModelState::None => writeln!(w, "feature\t{n}\t{wt}")?,
                ModelState::Variance { sigma, .. } => writeln!(w, "feature\t{n}\t{wt}\t{}", sigma[i])?,
                ModelState::DualAveraging { grad_sum, grad_sq, .. } => {
                    writeln!(w, "feature\t{n}\t{wt}\t{}\t{}", grad_sum[i], grad_sq[i])?
                }
            }
        }
        writeln!(w, "end-model")
    }

    /// Reads a block written by [`write`](Self::write). `lookup` maps feature
    /// names back to coordinate indices; unknown names are an error.
    pub fn read<R: BufRead>(reader: &mut R, lookup: impl Fn(&str) -> Option<u32>) -> Result<Self, LearnerError> {
        ModelParser::default().parse(reader, lookup)
    }
}

pub const MODEL_HEADER: &str = "actionable-model 1";

#[derive(Default)]
struct ModelParser {
    line: usize,
}

impl ModelParser {
    fn err(&self, reason: impl Into<String>) -> LearnerError {
        LearnerError::Format {
            line: self.line,
            reason: reason.into(),
        }
    }

    fn next<R: BufRead>(&mut self, r: &mut R) -> Result<String, LearnerError> {
        let mut s = String::new();
        let n = r.read_line(&mut s).map_err(|e| self.err(e.to_string()))?;
        self.line += 1;
        if n == 0 {
            return Err(self.err("unexpected end of file"));
        }
        Ok(s.trim_end_matches(['\n', '\r']).to_string())
    }

    fn field<R: BufRead>(&mut self, r: &mut R, key: &str) -> Result<Vec<String>, LearnerError> {
        let line = self.next(r)?;
        let mut parts = line.split('\t');
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected `{key}` row")));
        }
        Ok(parts.map(String::from).collect())
    }

    fn scalar<R: BufRead, T: FromStr>(&mut self, r: &mut R, key: &str) -> Result<T, LearnerError> {
        let row = self.field(r, key)?;
        row.first().and_then(|s| s.parse().ok()).ok_or_else(|| self.err("bad number"))
    }

    fn parse<R: BufRead>(&mut self, r: &mut R, lookup: impl Fn(&str) -> Option<u32>) -> Result<TrainedModel, LearnerError> {
        if self.next(r)? != MODEL_HEADER {
            return Err(self.err("missing model header"));
        }
        let technique: Technique = self.field(r, "technique")?.first().map_or("", String::as_str).parse()?;
        let domain = match self.field(r, "domain")?.first().map(String::as_str) {
            Some("-") => None,
            Some(k) => Some(k.parse::<DomainKey>().map_err(|e| self.err(e.to_string()))?),
            None => return Err(self.err("missing domain")),
        };
        let examples = self.scalar(r, "examples")?;
        let skipped = self.scalar(r, "skipped")?;
        let epochs = self.scalar(r, "epochs")?;
        let seed = self.scalar(r, "seed")?;
        let mut params = Hyperparameters::default();
        for name in Hyperparameters::NAMES {
            let row = self.field(r, "param")?;
            if row.len() != 2 || row[0] != name {
                return Err(self.err(format!("expected param {name}")));
            }
            params.set(name, &row[1])?;
        }
        let updates_row = self.field(r, "updates")?;
        let updates_per_epoch = match updates_row.first().map(String::as_str) {
            None | Some("") => Vec::new(),
            Some(s) => s
                .split(',')
                .map(|u| u.parse().map_err(|_| self.err("bad update count")))
                .collect::<Result<_, _>>()?,
        };
        let dual = technique == Technique::AdagradRda;
        let variance = matches!(technique, Technique::ConfidenceWeighted | Technique::Arow | Technique::Scw);
        let steps: u64 = if dual { self.scalar(r, "steps")? } else { 0 };
        let dim: usize = self.scalar(r, "dim")?;
        let extra = if dual { 2 } else if variance { 1 } else { 0 };
        let bias_row = self.field(r, "bias")?;
        if bias_row.len() != 1 + extra {
            return Err(self.err("bias row has wrong arity"));
        }
        let floats = |p: &Self, cells: &[String]| -> Result<Vec<f64>, LearnerError> {
            cells
                .iter()
                .map(|c| c.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| p.err("bad float")))
                .collect()
        };
        let bias_vals = floats(self, &bias_row)?;
        let mut weights = vec![0.0; dim];
        let mut aux = vec![vec![0.0; dim]; extra];
        let mut seen = vec![false; dim];
        for _ in 0..dim {
            let row = self.field(r, "feature")?;
            if row.len() != 2 + extra {
                return Err(self.err("feature row has wrong arity"));
            }
            let idx = lookup(&row[0]).ok_or_else(|| self.err(format!("unknown feature `{}`", row[0])))? as usize;
            if idx >= dim || seen[idx] {
                return Err(self.err(format!("feature `{}` out of range or repeated", row[0])));
            }
            seen[idx] = true;
            let vals = floats(self, &row[1..])?;
            weights[idx] = vals[0];
            for (a, v) in aux.iter_mut().zip(&vals[1..]) {
                a[idx] = *v;
            }
        }
        if self.next(r)? != "end-model" {
            return Err(self.err("missing end-model"));
        }
        let state = if dual {
            let mut it = aux.into_iter();
            ModelState::DualAveraging {
                grad_sum: it.next().unwrap_or_default(),
                grad_sq: it.next().unwrap_or_default(),
                grad_sum_bias: bias_vals[1],
                grad_sq_bias: bias_vals[2],
                steps,
            }
        } else if variance {
            ModelState::Variance {
                sigma: aux.into_iter().next().unwrap_or_default(),
                sigma_bias: bias_vals[1],
            }
        } else {
            ModelState::None
        };
        Ok(TrainedModel {
            technique,
            params,
            weights,
            bias: bias_vals[0],
            state,
            meta: TrainingMeta {
                domain,
                examples,
                skipped,
                epochs,
                seed,
                updates_per_epoch,
            },
        })
    }
}

/// Trains `technique` on `data`. Examples with non-finite values are skipped
/// and counted in the model metadata.
pub fn train(technique: Technique, params: &Hyperparameters, data: &[LabeledExample]) -> Result<TrainedModel, LearnerError> {
    params.validate()?;
    let usable: Vec<&LabeledExample> = data.iter().filter(|e| e.features.is_finite() && e.y.is_finite()).collect();
    let skipped = data.len() - usable.len();
    let Some(first) = usable.first() else {
        return Err(LearnerError::Empty);
    };
    if usable.iter().all(|e| (e.y > 0.0) == (first.y > 0.0)) {
        return Err(LearnerError::SingleClass(first.label()));
    }
    let dim = usable.iter().map(|e| e.features.dim()).max().unwrap_or(0);
    let mut state = OnlineState::new(technique, params, dim);
    let mut order: Vec<usize> = (0..usable.len()).collect();
    let mut rng = rng_for(params.seed, "train");
    let mut updates_per_epoch = Vec::with_capacity(params.epochs);
    for _ in 0..params.epochs {
        order.shuffle(&mut rng);
        let mut updates = 0;
        for &i in &order {
            let e = usable[i];
            updates += state.step(&e.features, e.y.signum()) as usize;
        }
        updates_per_epoch.push(updates);
    }
    let (weights, bias, state) = state.into_parts();
    Ok(TrainedModel {
        technique,
        params: params.clone(),
        weights,
        bias,
        state,
        meta: TrainingMeta {
            domain: None,
            examples: usable.len(),
            skipped,
            epochs: params.epochs,
            seed: params.seed,
            updates_per_epoch,
        },
    })
}

/// Fold index per example, stratified by class. Each class is shuffled and
/// dealt round-robin, continuing the rotation across classes.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<usize>, LearnerError> {
    let (mut act, mut non): (Vec<usize>, Vec<usize>) = (0..labels.len()).partition(|&i| labels[i].is_actionable());
    let smallest = act.len().min(non.len());
    if k < 2 || smallest < k {
        return Err(LearnerError::Folds { k, smallest });
    }
    let mut rng = rng_for(seed, "folds");
    act.shuffle(&mut rng);
    non.shuffle(&mut rng);
    let mut folds = vec![0; labels.len()];
    for (slot, &i) in act.iter().chain(&non).enumerate() {
        folds[i] = slot % k;
    }
    Ok(folds)
}

/// F1 (actionable positive) of `model` on `data`; 0 when `data` is empty.
pub fn f_measure(model: &TrainedModel, data: &[&LabeledExample]) -> f64 {
    let counts = ConfusionCounts::from_pairs(data.iter().map(|e| (e.y > 0.0, model.predict(&e.features).label.is_actionable())));
    prf_accuracy(&counts).map_or(0.0, |s| s.f)
}

/// Mean held-out F over stratified k folds.
pub fn cross_validate(
    technique: Technique,
    params: &Hyperparameters,
    data: &[LabeledExample],
    k: usize,
    seed: u64,
) -> Result<f64, LearnerError> {
    let labels: Vec<Label> = data.iter().map(LabeledExample::label).collect();
    let folds = stratified_folds(&labels, k, seed)?;
    let mut total = 0.0;
    for fold in 0..k {
        let train_set: Vec<LabeledExample> = data
            .iter()
            .zip(&folds)
            .filter(|(_, f)| **f != fold)
            .map(|(e, _)| e.clone())
            .collect();
        let held: Vec<&LabeledExample> = data.iter().zip(&folds).filter(|(_, f)| **f == fold).map(|(e, _)| e).collect();
        let model = train(technique, params, &train_set)?;
        total += f_measure(&model, &held);
    }
    Ok(total / k as f64)
}
