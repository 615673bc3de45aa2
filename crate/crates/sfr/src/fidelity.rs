//! Script Fidelity Rate: the fraction of countable hypothesis characters
//! whose code points fall in the target language's script.
//!
//! SFR is always computed on the raw hypothesis, never on text that has been
//! normalized for WER: normalization can drop or rewrite code points and
//! artificially inflate the rate.

use serde::Serialize;
use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_normalization::UnicodeNormalization;

use crate::script::{char_in_script, ScriptConfig};

/// One hypothesis flowing through the pipelines. `reference` and `model_id`
/// are optional; SFR never reads the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Utterance {
    pub id: String,
    pub language_id: String,
    pub hypothesis: String,
    pub reference: Option<String>,
    pub model_id: Option<String>,
}

/// Per-utterance SFR. `sfr` is absent exactly when the hypothesis has no
/// countable characters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SfrResult {
    pub utterance_id: String,
    pub countable_chars: usize,
    pub target_chars: usize,
    pub sfr: Option<f64>,
}

/// Corpus aggregate. `mean_sfr` is the unweighted mean over non-null
/// utterances (the headline value); `weighted_sfr` is the character-weighted
/// mean (total target chars over total countable chars). The two diverge for
/// unequal-length utterances, so both are reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSfr {
    pub utterance_count: usize,
    pub null_count: usize,
    pub mean_sfr: Option<f64>,
    pub weighted_sfr: Option<f64>,
    pub per_utterance: Vec<SfrResult>,
}

fn is_punctuation(cat: GeneralCategory) -> bool {
    matches!(
        cat,
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

fn is_other(cat: GeneralCategory) -> bool {
    matches!(
        cat,
        GeneralCategory::Control
            | GeneralCategory::Format
            | GeneralCategory::Surrogate
            | GeneralCategory::PrivateUse
            | GeneralCategory::Unassigned
    )
}

/// True if the character survives the countable filter: not whitespace, not
/// punctuation (P*), not a control/format character (C*).
pub fn is_countable(c: char) -> bool {
    let cat = get_general_category(c);
    !c.is_whitespace() && !is_punctuation(cat) && !is_other(cat)
}

/// NFC-normalizes the hypothesis and returns its countable characters in
/// order. Note that symbol categories (S*) survive the filter: `^` and
/// `` ` `` count, and for a Latin target whose range is taken literally from
/// U+0041-007A they even count as target characters.
pub fn countable_chars(hypothesis: &str) -> Vec<char> {
    hypothesis.nfc().filter(|&c| is_countable(c)).collect()
}

/// Computes SFR for one utterance against its target script config. An empty
/// countable set yields a null SFR, not an error.
pub fn sfr_utterance(utterance: &Utterance, cfg: &ScriptConfig) -> SfrResult {
    let countable = countable_chars(&utterance.hypothesis);
    let target = countable
        .iter()
        .filter(|&&c| char_in_script(c, cfg))
        .count();
    let sfr = if countable.is_empty() {
        None
    } else {
        Some(target as f64 / countable.len() as f64)
    };
    SfrResult {
        utterance_id: utterance.id.clone(),
        countable_chars: countable.len(),
        target_chars: target,
        sfr,
    }
}

/// Aggregates per-utterance results. Null utterances are excluded from both
/// means; they contribute zero to both sums of the weighted mean, so only the
/// all-null corpus needs special handling.
pub fn sfr_corpus(results: Vec<SfrResult>) -> CorpusSfr {
    let utterance_count = results.len();
    let null_count = results.iter().filter(|r| r.sfr.is_none()).count();
    let (mut sum, mut non_null) = (0.0_f64, 0usize);
    let (mut target_total, mut countable_total) = (0usize, 0usize);
    for r in &results {
        if let Some(v) = r.sfr {
            sum += v;
            non_null += 1;
        }
        target_total += r.target_chars;
        countable_total += r.countable_chars;
    }
    let mean_sfr = (non_null > 0).then(|| sum / non_null as f64);
    let weighted_sfr = (countable_total > 0).then(|| target_total as f64 / countable_total as f64);
    CorpusSfr {
        utterance_count,
        null_count,
        mean_sfr,
        weighted_sfr,
        per_utterance: results,
    }
}
