//! Known-positive / known-negative validation of the SFR implementation,
//! plus the imported-predictions check for Pashto.

use std::collections::BTreeMap;

use crate::corpus::CorpusRecord;
use crate::error::Result;
use crate::fidelity::{sfr_corpus, sfr_utterance, Utterance};
use crate::script::ScriptRegistry;

/// Corpus SFR bound for Whisper-model Pashto predictions.
pub const PASHTO_WHISPER_SFR_BOUND: f64 = 0.01;

/// Per-language strings with known SFR: positives must score exactly 1.0,
/// negatives exactly 0.0.
pub fn fixtures() -> Vec<(&'static str, &'static str, &'static str)> {
    // (language_id, positive, negative)
    vec![
        ("ps", "پښتو ژبه", "hello world"),
        ("ur", "اردو زبان", "hello world"),
        ("hi", "नमस्ते दुनिया", "hello world"),
        ("bn", "বাংলা ভাষা", "hello world"),
        ("ml", "മലയാളം", "hello world"),
        ("so", "waa maxay tahay", "سلام عليكم"),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationCheck {
    pub language: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check_utterance(
    registry: &ScriptRegistry,
    language: &str,
    text: &str,
    expected: f64,
    name: &str,
) -> ValidationCheck {
    let utterance = Utterance {
        id: format!("validate-{language}-{name}"),
        language_id: language.to_string(),
        hypothesis: text.to_string(),
        reference: None,
        model_id: None,
    };
    match registry.config(language) {
        Ok(cfg) => {
            let result = sfr_utterance(&utterance, cfg);
            let passed = result.sfr == Some(expected);
            ValidationCheck {
                language: language.to_string(),
                name: name.to_string(),
                passed,
                detail: format!("expected sfr {expected}, got {:?}", result.sfr),
            }
        }
        Err(e) => ValidationCheck {
            language: language.to_string(),
            name: name.to_string(),
            passed: false,
            detail: e.to_string(),
        },
    }
}

/// Runs the embedded positives and negatives against a registry.
pub fn validate_registry(registry: &ScriptRegistry) -> Vec<ValidationCheck> {
    let mut checks = Vec::new();
    for (language, positive, negative) in fixtures() {
        checks.push(check_utterance(registry, language, positive, 1.0, "positive"));
        checks.push(check_utterance(registry, language, negative, 0.0, "negative"));
    }
    checks
}

/// Checks imported Pashto predictions: for every Whisper model in the file,
/// corpus SFR (unweighted mean) must stay below the published 1% bound.
pub fn validate_pashto_predictions(
    records: &[(usize, CorpusRecord)],
    registry: &ScriptRegistry,
) -> Result<Vec<ValidationCheck>> {
    let cfg = registry.config("ps")?;
    let mut per_model: BTreeMap<String, Vec<_>> = BTreeMap::new();
    for (line, record) in records {
        let model = record.model.clone().unwrap_or_default();
        if !model.to_lowercase().contains("whisper") {
            continue;
        }
        let utterance = record.to_utterance(*line);
        per_model
            .entry(model)
            .or_default()
            .push(sfr_utterance(&utterance, cfg));
    }
    Ok(per_model
        .into_iter()
        .map(|(model, results)| {
            let corpus = sfr_corpus(results);
            let (passed, detail) = match corpus.mean_sfr {
                Some(mean) => (
                    mean < PASHTO_WHISPER_SFR_BOUND,
                    format!("corpus SFR {:.4} vs bound {PASHTO_WHISPER_SFR_BOUND}", mean),
                ),
                None => (false, "all utterances null".to_string()),
            };
            ValidationCheck {
                language: "ps".into(),
                name: format!("whisper-predictions/{model}"),
                passed,
                detail,
            }
        })
        .collect())
}
