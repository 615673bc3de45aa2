//! Language-specific text normalization and WER/CER.
//!
//! Both error rates are computed after normalization; SFR never is (see
//! [`crate::fidelity`]). WER can exceed 100% when the hypothesis carries
//! enough insertions, e.g. under decoder looping.

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::error::{Result, SfrError};
use crate::fidelity::Utterance;
use crate::script::{CodePointRange, NormalizationKind};

/// A normalization policy with its character ranges resolved. The diacritic
/// ranges apply only to `ArabicScript`, the digit ranges only to `Indic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationPolicy {
    pub kind: NormalizationKind,
    pub diacritic_ranges: Vec<CodePointRange>,
    pub digit_ranges: Vec<CodePointRange>,
}

fn range(start: u32, end: u32) -> CodePointRange {
    CodePointRange::new(start, end).expect("static range is valid")
}

impl NormalizationPolicy {
    /// Default ranges: harakat plus Quranic annotation marks for Arabic
    /// script, and the Devanagari/Bengali/Malayalam digit blocks for Indic.
    /// ASCII digits are never stripped.
    pub fn for_kind(kind: NormalizationKind) -> Self {
        match kind {
            NormalizationKind::ArabicScript => Self {
                kind,
                diacritic_ranges: vec![
                    range(0x064B, 0x065F),
                    range(0x0670, 0x0670),
                    range(0x06D6, 0x06ED),
                ],
                digit_ranges: vec![],
            },
            NormalizationKind::Indic => Self {
                kind,
                diacritic_ranges: vec![],
                digit_ranges: vec![
                    range(0x0966, 0x096F),
                    range(0x09E6, 0x09EF),
                    range(0x0D66, 0x0D6F),
                ],
            },
            NormalizationKind::LatinLowercase => Self {
                kind,
                diacritic_ranges: vec![],
                digit_ranges: vec![],
            },
        }
    }
}

fn is_punctuation(c: char) -> bool {
    matches!(
        get_general_category(c),
        GeneralCategory::ConnectorPunctuation
            | GeneralCategory::DashPunctuation
            | GeneralCategory::OpenPunctuation
            | GeneralCategory::ClosePunctuation
            | GeneralCategory::InitialPunctuation
            | GeneralCategory::FinalPunctuation
            | GeneralCategory::OtherPunctuation
    )
}

fn in_any(c: char, ranges: &[CodePointRange]) -> bool {
    ranges.iter().any(|r| r.contains(c))
}

/// Applies the policy, then collapses whitespace runs to single spaces and
/// trims the ends.
pub fn normalize(text: &str, policy: &NormalizationPolicy) -> String {
    let lowered;
    let input = match policy.kind {
        NormalizationKind::LatinLowercase => {
            lowered = text.to_lowercase();
            &lowered
        }
        _ => text,
    };
    let filtered: String = input
        .chars()
        .filter(|&c| {
            if is_punctuation(c) {
                return false;
            }
            match policy.kind {
                NormalizationKind::ArabicScript => !in_any(c, &policy.diacritic_ranges),
                NormalizationKind::Indic => !in_any(c, &policy.digit_ranges),
                NormalizationKind::LatinLowercase => true,
            }
        })
        .collect();
    filtered.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Edit counts from a minimal-cost alignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditStats {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
    pub reference_len: usize,
}

impl EditStats {
    pub fn total_edits(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }

    /// (S + D + I) / reference length; may exceed 1.0.
    pub fn error_rate(&self) -> f64 {
        self.total_edits() as f64 / self.reference_len as f64
    }
}

/// Minimal S+D+I alignment via dynamic programming, with counts recovered by
/// backtrace. Among cost ties the diagonal move wins, so a substitution is
/// preferred over an insert+delete pair.
pub fn edit_distance_stats<T: PartialEq>(reference: &[T], hypothesis: &[T]) -> Result<EditStats> {
    if reference.is_empty() {
        return Err(SfrError::InvalidArgument(
            "empty reference: error rate undefined".into(),
        ));
    }
    let m = reference.len();
    let n = hypothesis.len();
    let mut dp = vec![vec![0usize; n + 1]; m + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in dp[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=m {
        for j in 1..=n {
            let sub_cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            dp[i][j] = (dp[i - 1][j - 1] + sub_cost)
                .min(dp[i - 1][j] + 1)
                .min(dp[i][j - 1] + 1);
        }
    }

    let (mut i, mut j) = (m, n);
    let (mut subs, mut dels, mut ins) = (0usize, 0usize, 0usize);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            let sub_cost = usize::from(reference[i - 1] != hypothesis[j - 1]);
            if dp[i][j] == dp[i - 1][j - 1] + sub_cost {
                subs += sub_cost;
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && dp[i][j] == dp[i - 1][j] + 1 {
            dels += 1;
            i -= 1;
        } else {
            ins += 1;
            j -= 1;
        }
    }
    Ok(EditStats {
        substitutions: subs,
        deletions: dels,
        insertions: ins,
        reference_len: m,
    })
}

fn normalized_pair(u: &Utterance, policy: &NormalizationPolicy) -> Result<(String, String)> {
    let reference = u
        .reference
        .as_deref()
        .ok_or_else(|| SfrError::MissingReference { id: u.id.clone() })?;
    let norm_ref = normalize(reference, policy);
    if norm_ref.is_empty() {
        return Err(SfrError::EmptyReference { id: u.id.clone() });
    }
    Ok((norm_ref, normalize(&u.hypothesis, policy)))
}

/// Word error rate over whitespace tokens of the normalized texts.
pub fn wer(u: &Utterance, policy: &NormalizationPolicy) -> Result<f64> {
    Ok(wer_stats(u, policy)?.error_rate())
}

pub fn wer_stats(u: &Utterance, policy: &NormalizationPolicy) -> Result<EditStats> {
    let (norm_ref, norm_hyp) = normalized_pair(u, policy)?;
    let ref_tokens: Vec<&str> = norm_ref.split_whitespace().collect();
    let hyp_tokens: Vec<&str> = norm_hyp.split_whitespace().collect();
    edit_distance_stats(&ref_tokens, &hyp_tokens)
}

/// Character error rate over the normalized strings. The single inter-word
/// spaces left by whitespace collapsing are part of the character sequence.
pub fn cer(u: &Utterance, policy: &NormalizationPolicy) -> Result<f64> {
    Ok(cer_stats(u, policy)?.error_rate())
}

pub fn cer_stats(u: &Utterance, policy: &NormalizationPolicy) -> Result<EditStats> {
    let (norm_ref, norm_hyp) = normalized_pair(u, policy)?;
    let ref_chars: Vec<char> = norm_ref.chars().collect();
    let hyp_chars: Vec<char> = norm_hyp.chars().collect();
    edit_distance_stats(&ref_chars, &hyp_chars)
}
