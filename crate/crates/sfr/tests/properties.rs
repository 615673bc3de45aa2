//! Randomized invariants of the SFR metric: boundedness, null semantics,
//! monotonicity under single-character substitution, and corpus
//! compositionality.

use proptest::prelude::*;

use sfr::fidelity::{countable_chars, is_countable, sfr_corpus, sfr_utterance, Utterance};
use sfr::script::{builtin_registry, char_in_script, ScriptConfig, ScriptRegistry};

fn registry() -> &'static ScriptRegistry {
    use std::sync::OnceLock;
    static REG: OnceLock<ScriptRegistry> = OnceLock::new();
    REG.get_or_init(builtin_registry)
}

fn hi_config() -> &'static ScriptConfig {
    registry().config("hi").expect("builtin hi")
}

fn utterance(hypothesis: &str) -> Utterance {
    Utterance {
        id: "prop".into(),
        language_id: "hi".into(),
        hypothesis: hypothesis.to_string(),
        reference: None,
        model_id: None,
    }
}

/// Characters that are stable under NFC both alone and when concatenated:
/// no combining marks, no composition across boundaries.
fn stable_char() -> impl Strategy<Value = char> {
    prop_oneof![
        // ASCII letters, digits, punctuation, whitespace.
        proptest::char::range('a', 'z'),
        proptest::char::range('A', 'Z'),
        proptest::char::range('0', '9'),
        Just(' '),
        Just('.'),
        Just(','),
        Just('!'),
        Just('\t'),
        // Devanagari consonants (the `hi` target block, no combiners).
        proptest::char::range('\u{0915}', '\u{0939}'),
        // Arabic letters (countable, outside the `hi` block).
        proptest::char::range('\u{0627}', '\u{063A}'),
    ]
}

fn stable_string() -> impl Strategy<Value = String> {
    proptest::collection::vec(stable_char(), 0..64).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// SFR, when defined, always lies in [0, 1]; counts are consistent.
    #[test]
    fn sfr_is_bounded(text in any::<String>()) {
        let result = sfr_utterance(&utterance(&text), hi_config());
        prop_assert!(result.target_chars <= result.countable_chars);
        if let Some(sfr) = result.sfr {
            prop_assert!((0.0..=1.0).contains(&sfr), "sfr {sfr} out of range");
        }
    }

    /// SFR is null exactly when the hypothesis has no countable characters.
    #[test]
    fn null_iff_no_countable_chars(text in any::<String>()) {
        let result = sfr_utterance(&utterance(&text), hi_config());
        let countable = countable_chars(&text).len();
        prop_assert_eq!(result.countable_chars, countable);
        prop_assert_eq!(result.sfr.is_none(), countable == 0);
    }

    /// Replacing one countable non-target character with a target-script
    /// character never lowers SFR.
    #[test]
    fn substitution_is_monotonic(
        chars in proptest::collection::vec(stable_char(), 1..64),
        pick in any::<proptest::sample::Index>(),
    ) {
        let cfg = hi_config();
        let non_target: Vec<usize> = chars
            .iter()
            .enumerate()
            .filter(|(_, &c)| is_countable(c) && !char_in_script(c, cfg))
            .map(|(i, _)| i)
            .collect();
        prop_assume!(!non_target.is_empty());
        let idx = non_target[pick.index(non_target.len())];

        let before: String = chars.iter().collect();
        let mut replaced = chars.clone();
        replaced[idx] = '\u{0915}'; // DEVANAGARI LETTER KA
        let after: String = replaced.into_iter().collect();

        let sfr_before = sfr_utterance(&utterance(&before), cfg).sfr.unwrap();
        let sfr_after = sfr_utterance(&utterance(&after), cfg).sfr.unwrap();
        prop_assert!(
            sfr_after >= sfr_before,
            "sfr dropped from {sfr_before} to {sfr_after} after targetward substitution"
        );
    }

    /// The weighted corpus aggregate equals total target over total
    /// countable characters — i.e. the SFR of the concatenated corpus.
    #[test]
    fn corpus_is_compositional(texts in proptest::collection::vec(stable_string(), 1..16)) {
        let cfg = hi_config();
        let results: Vec<_> = texts
            .iter()
            .map(|t| sfr_utterance(&utterance(t), cfg))
            .collect();
        let total_target: usize = results.iter().map(|r| r.target_chars).sum();
        let total_countable: usize = results.iter().map(|r| r.countable_chars).sum();

        // Character-weighted mean of per-utterance values.
        let expected_weighted =
            (total_countable > 0).then(|| total_target as f64 / total_countable as f64);
        // Unweighted mean over non-null utterances.
        let defined: Vec<f64> = results.iter().filter_map(|r| r.sfr).collect();
        let expected_mean =
            (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64);

        let corpus = sfr_corpus(results);
        prop_assert_eq!(corpus.utterance_count, texts.len());
        match (corpus.weighted_sfr, expected_weighted) {
            (Some(got), Some(want)) => prop_assert!((got - want).abs() < 1e-12),
            (got, want) => prop_assert_eq!(got, want),
        }
        match (corpus.mean_sfr, expected_mean) {
            (Some(got), Some(want)) => prop_assert!((got - want).abs() < 1e-12),
            (got, want) => prop_assert_eq!(got, want),
        }

        // Concatenating the corpus into one utterance gives the weighted value.
        let joined: String = texts.concat();
        let joined_sfr = sfr_utterance(&utterance(&joined), cfg);
        prop_assert_eq!(joined_sfr.countable_chars, total_countable);
        prop_assert_eq!(joined_sfr.target_chars, total_target);
    }
}
