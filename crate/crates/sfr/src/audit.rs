//! Reference-free streaming audit: sliding-window SFR per language with
//! edge-triggered alerts.
//!
//! The window is utterance-count based. Null utterances (no countable
//! characters) occupy window slots but are excluded from the window mean,
//! mirroring corpus-level null handling. An alert fires exactly once per
//! ok-to-alerting transition; recovery above the threshold re-arms it.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Result, SfrError};
use crate::fidelity::{sfr_utterance, SfrResult, Utterance};
use crate::script::ScriptRegistry;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditConfig {
    /// Window length in utterances.
    pub window_size: usize,
    /// Alert when the window mean drops below this ratio.
    pub alert_threshold: f64,
    /// Non-null results required in the window before alerts arm.
    pub min_window_fill: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            window_size: 100,
            alert_threshold: 0.8,
            min_window_fill: 100,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_size == 0 {
            return Err(SfrError::InvalidArgument("window size must be >= 1".into()));
        }
        if !(0.0 < self.alert_threshold && self.alert_threshold < 1.0) {
            return Err(SfrError::InvalidArgument(format!(
                "alert threshold must be in (0, 1), got {}",
                self.alert_threshold
            )));
        }
        if self.min_window_fill > self.window_size {
            return Err(SfrError::InvalidArgument(
                "min window fill cannot exceed window size".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlertStatus {
    Ok,
    Alerting,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlertEvent {
    pub language: String,
    pub window_mean: f64,
    pub window_size: usize,
    pub non_null: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

#[derive(Debug, Default)]
struct LanguageWindow {
    window: VecDeque<SfrResult>,
    status: Option<AlertStatus>,
}

/// Mutable audit state across all languages seen on the stream.
#[derive(Debug, Default)]
pub struct AuditState {
    languages: BTreeMap<String, LanguageWindow>,
    pub processed: usize,
    pub null_count: usize,
    pub alerts_fired: usize,
}

impl AuditState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn status(&self, language: &str) -> AlertStatus {
        self.languages
            .get(language)
            .and_then(|w| w.status)
            .unwrap_or(AlertStatus::Ok)
    }
}

/// Pushes one utterance into the stream. Only the hypothesis and the
/// language id are read; references are never consulted.
pub fn audit_step(
    state: &mut AuditState,
    utterance: &Utterance,
    registry: &ScriptRegistry,
    cfg: &AuditConfig,
) -> Result<Option<AlertEvent>> {
    let script_cfg = registry.config(&utterance.language_id)?;
    let result = sfr_utterance(utterance, script_cfg);

    state.processed += 1;
    if result.sfr.is_none() {
        state.null_count += 1;
    }

    let lang = state
        .languages
        .entry(utterance.language_id.clone())
        .or_default();
    lang.window.push_back(result);
    while lang.window.len() > cfg.window_size {
        lang.window.pop_front();
    }

    let non_null: Vec<f64> = lang.window.iter().filter_map(|r| r.sfr).collect();
    if non_null.len() < cfg.min_window_fill {
        return Ok(None);
    }
    let mean = non_null.iter().sum::<f64>() / non_null.len() as f64;
    let previous = lang.status.unwrap_or(AlertStatus::Ok);
    if mean < cfg.alert_threshold {
        lang.status = Some(AlertStatus::Alerting);
        if previous == AlertStatus::Ok {
            state.alerts_fired += 1;
            return Ok(Some(AlertEvent {
                language: utterance.language_id.clone(),
                window_mean: mean,
                window_size: lang.window.len(),
                non_null: non_null.len(),
                timestamp: None,
            }));
        }
    } else {
        lang.status = Some(AlertStatus::Ok);
    }
    Ok(None)
}
