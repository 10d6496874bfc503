//! Actionability classification for short social-media messages.
//!
//! The crate is organised as a pipeline:
//!
//! * [`corpus`] ingests newline-delimited message records, balances classes per
//!   fully specified domain and produces stratified train/eval splits.
//! * [`textproc`] tokenizes text and finds markers, emoticons and readability counts.
//! * [`lexicon`] induces per-(domain, label) keyword lexicons from adjusted document
//!   frequencies and loads SentiWordNet-format polarity lexicons.
//! * [`features`] turns a message into a sparse, named [`features::FeatureVector`].
//! * [`learners`] holds seven online linear classifiers behind one train/predict contract.
//! * [`selection`] enumerates domain generalizations, scores candidate models and
//!   applies the A/B/C/D selection strategies.
//! * [`metrics`] computes P/R/F/A, population-weighted aggregates and feature diagnostics.
//! * [`pipeline`] wires everything into reproducible batch runs driven by a flat config.

pub mod corpus;
pub mod error;
pub mod features;
pub mod learners;
pub mod lexicon;
pub mod metrics;
pub mod pipeline;
pub mod resources;
pub mod selection;
pub mod textproc;

pub use corpus::{DomainKey, Label, LabeledCorpus, Message, Source};
pub use error::{Error, Result};
pub use features::{Feature, FeatureVector};
pub use learners::{Hyperparameters, Technique, TrainedModel};
pub use selection::Strategy;
