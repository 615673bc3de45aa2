//! Script Fidelity Rate (SFR) toolkit for multilingual ASR evaluation.
//!
//! SFR is the fraction of an ASR hypothesis's countable characters whose
//! code points fall in the target language's writing system. It needs no
//! reference transcription, which makes it usable as a continuous production
//! audit. The crate bundles the metric itself, WER/CER with
//! language-specific normalization, a dominant-script failure taxonomy,
//! collapse-threshold statistics over a model × language matrix, and a
//! streaming audit mode.

pub mod analysis;
pub mod audit;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod fidelity;
pub mod metrics;
pub mod script;
pub mod taxonomy;
pub mod validate;

pub use analysis::{classify_collapse, family_summary, gated_report, scatter_data, wilson_ci};
pub use error::{Result, SfrError};
pub use fidelity::{countable_chars, sfr_corpus, sfr_utterance, CorpusSfr, SfrResult, Utterance};
pub use metrics::{cer, edit_distance_stats, normalize, wer, EditStats, NormalizationPolicy};
pub use script::{builtin_registry, char_in_script, load_registry, ScriptConfig, ScriptRegistry};
pub use taxonomy::{classify_dominant, detect_looping, taxonomy_table, TaxonomyLabel};
