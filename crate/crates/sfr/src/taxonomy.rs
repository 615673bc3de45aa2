//! Dominant-script classification of hypotheses and the per-group
//! distribution table, plus a detector for decoder looping.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Result, SfrError};
use crate::fidelity::{countable_chars, Utterance};
use crate::script::{char_in_script, ScriptConfig, ScriptRegistry};

/// Display buckets matching the published table scheme: everything that is
/// not Latin, Devanagari, or the target script (Arabic, Cyrillic, mixed,
/// unclassified, none) lands in `Other`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Bucket {
    Latin,
    Devanagari,
    Target,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyLabel {
    pub utterance_id: String,
    /// Script name, `"mixed"` when no script reaches the dominance
    /// threshold, `"none"` for null utterances.
    pub dominant_script: String,
    pub dominant_fraction: Option<f64>,
    /// Set when another script matched the dominant one's count exactly and
    /// the fixed detection order decided.
    pub tie: bool,
    pub bucket: Bucket,
    pub looping_flag: bool,
    pub looping_score: f64,
}

/// Looping detector parameters. The defaults are deliberately conservative:
/// a repeated phrase of up to five tokens must cover more than half of a
/// hypothesis at least ten tokens long.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopingConfig {
    pub max_ngram: usize,
    pub coverage_threshold: f64,
    pub min_tokens: usize,
}

impl Default for LoopingConfig {
    fn default() -> Self {
        Self {
            max_ngram: 5,
            coverage_threshold: 0.5,
            min_tokens: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxonomyConfig {
    /// Minimum share of countable characters a script needs to dominate.
    pub dominance_threshold: f64,
    pub looping: LoopingConfig,
}

impl Default for TaxonomyConfig {
    fn default() -> Self {
        Self {
            dominance_threshold: 0.5,
            looping: LoopingConfig::default(),
        }
    }
}

/// Scores how much of the hypothesis is covered by non-overlapping
/// repetitions of its most repetitive short n-gram, and flags looping when
/// that coverage exceeds the threshold on a long enough utterance.
///
/// A multi-token phrase only counts once it actually repeats (at least two
/// non-overlapping occurrences); otherwise any 5-gram of a healthy sentence
/// would trivially cover half of a 10-token utterance. The most frequent
/// single token always contributes its coverage.
pub fn detect_looping(hypothesis: &str, cfg: &LoopingConfig) -> (f64, bool) {
    let tokens: Vec<&str> = hypothesis.split_whitespace().collect();
    if tokens.is_empty() {
        return (0.0, false);
    }
    let mut best = 0.0_f64;
    for n in 1..=cfg.max_ngram.min(tokens.len()) {
        let mut seen: HashSet<&[&str]> = HashSet::new();
        for start in 0..=tokens.len() - n {
            let gram = &tokens[start..start + n];
            if !seen.insert(gram) {
                continue;
            }
            // Greedy left-to-right count of non-overlapping occurrences.
            let mut occurrences = 0usize;
            let mut i = 0usize;
            while i + n <= tokens.len() {
                if &tokens[i..i + n] == gram {
                    occurrences += 1;
                    i += n;
                } else {
                    i += 1;
                }
            }
            if n > 1 && occurrences < 2 {
                continue;
            }
            best = best.max((occurrences * n) as f64 / tokens.len() as f64);
        }
    }
    let flag = best > cfg.coverage_threshold && tokens.len() >= cfg.min_tokens;
    (best, flag)
}

/// Classifies one hypothesis by dominant output script. Characters matching
/// the target config (ranges or unique points) count for the target script;
/// everything else is attributed to the first detection script whose ranges
/// contain it, or to "unclassified".
pub fn classify_dominant(
    utterance: &Utterance,
    registry: &ScriptRegistry,
    target_cfg: &ScriptConfig,
    cfg: &TaxonomyConfig,
) -> TaxonomyLabel {
    let (looping_score, looping_flag) = detect_looping(&utterance.hypothesis, &cfg.looping);

    // Counting order doubles as the tie-break order: target script first,
    // then the registry's fixed detection order, then unclassified.
    let mut names: Vec<&str> = vec![target_cfg.script_name.as_str()];
    for d in &registry.detection_scripts {
        if d.name != target_cfg.script_name {
            names.push(d.name);
        }
    }
    names.push("unclassified");
    let mut counts = vec![0usize; names.len()];

    let countable = countable_chars(&utterance.hypothesis);
    for &c in &countable {
        let idx = if char_in_script(c, target_cfg) {
            0
        } else {
            registry
                .detection_scripts
                .iter()
                .filter(|d| d.name != target_cfg.script_name)
                .position(|d| d.ranges.iter().any(|r| r.contains(c)))
                .map(|p| p + 1)
                .unwrap_or(names.len() - 1)
        };
        counts[idx] += 1;
    }

    let total = countable.len();
    if total == 0 {
        return TaxonomyLabel {
            utterance_id: utterance.id.clone(),
            dominant_script: "none".into(),
            dominant_fraction: None,
            tie: false,
            bucket: Bucket::Other,
            looping_flag,
            looping_score,
        };
    }

    let best_idx = (0..names.len()).max_by_key(|&i| (counts[i], usize::MAX - i)).unwrap();
    let best_count = counts[best_idx];
    let share = best_count as f64 / total as f64;
    let tie = counts
        .iter()
        .enumerate()
        .any(|(i, &c)| i != best_idx && c == best_count && c > 0);

    let (dominant_script, bucket) = if share >= cfg.dominance_threshold {
        let name = names[best_idx];
        let bucket = if name == target_cfg.script_name {
            Bucket::Target
        } else if name == "Latin" {
            Bucket::Latin
        } else if name == "Devanagari" {
            Bucket::Devanagari
        } else {
            Bucket::Other
        };
        (name.to_string(), bucket)
    } else {
        ("mixed".to_string(), Bucket::Other)
    };

    TaxonomyLabel {
        utterance_id: utterance.id.clone(),
        dominant_script,
        dominant_fraction: Some(share),
        tie,
        bucket,
        looping_flag,
        looping_score,
    }
}

/// One row of the dominant-script distribution, per group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyTable {
    pub group_id: String,
    pub n: usize,
    pub counts: BucketCounts,
    /// Percentages rounded independently to integers; a displayed row may
    /// not sum to exactly 100.
    pub percents: BucketPercents,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BucketCounts {
    pub latin: usize,
    pub devanagari: usize,
    pub target: usize,
    pub other: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BucketPercents {
    pub latin: u32,
    pub devanagari: u32,
    pub target: u32,
    pub other: u32,
}

fn pct(count: usize, n: usize) -> u32 {
    (count as f64 * 100.0 / n as f64).round() as u32
}

/// Aggregates labels into one table row per group, sorted by group id.
pub fn taxonomy_table(
    labels: &[TaxonomyLabel],
    grouping: &HashMap<String, String>,
) -> Result<Vec<TaxonomyTable>> {
    let mut groups: BTreeMap<&str, BucketCounts> = BTreeMap::new();
    for label in labels {
        let group = grouping.get(&label.utterance_id).ok_or_else(|| {
            SfrError::UngroupedUtterance {
                id: label.utterance_id.clone(),
            }
        })?;
        let counts = groups.entry(group).or_default();
        match label.bucket {
            Bucket::Latin => counts.latin += 1,
            Bucket::Devanagari => counts.devanagari += 1,
            Bucket::Target => counts.target += 1,
            Bucket::Other => counts.other += 1,
        }
    }
    Ok(groups
        .into_iter()
        .map(|(group_id, counts)| {
            let n = counts.latin + counts.devanagari + counts.target + counts.other;
            TaxonomyTable {
                group_id: group_id.to_string(),
                n,
                counts,
                percents: BucketPercents {
                    latin: pct(counts.latin, n),
                    devanagari: pct(counts.devanagari, n),
                    target: pct(counts.target, n),
                    other: pct(counts.other, n),
                },
            }
        })
        .collect())
}
