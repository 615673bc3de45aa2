//! Collapse classification over a model × language evaluation matrix:
//! threshold statistics, bimodality, Wilson confidence intervals, family
//! summaries, scatter emission, and the SFR-gated report.

use std::collections::HashMap;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Result, SfrError};

/// Default collapse threshold, in percent.
pub const DEFAULT_COLLAPSE_THRESHOLD: f64 = 10.0;
/// Upper boundary of the intermediate SFR band, in percent.
pub const HIGH_SFR_BOUNDARY: f64 = 90.0;
/// Default SFR gate (ratio) below which WER is flagged as meaningless.
pub const DEFAULT_SFR_GATE: f64 = 0.8;
/// WER boundary separating the scatter quadrants, in percent.
pub const QUADRANT_WER_BOUNDARY: f64 = 50.0;

/// Rounds to one decimal, half away from zero (display convention).
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// One (model, language) cell. Both metrics absent means the pair was never
/// evaluated; that is a distinct state from a measured zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalCell {
    pub model_id: String,
    pub language_id: String,
    pub sfr_percent: Option<f64>,
    pub wer_percent: Option<f64>,
}

impl EvalCell {
    pub fn evaluated(&self) -> bool {
        self.sfr_percent.is_some() || self.wer_percent.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalMatrix {
    pub cells: Vec<EvalCell>,
    pub models: Vec<String>,
    pub languages: Vec<String>,
}

impl EvalMatrix {
    /// Builds a matrix from cells, keeping model and language order of first
    /// appearance. Duplicate (model, language) pairs are rejected.
    pub fn from_cells(cells: Vec<EvalCell>) -> Result<Self> {
        let mut matrix = EvalMatrix::default();
        for cell in cells {
            matrix.push(cell)?;
        }
        Ok(matrix)
    }

    pub fn push(&mut self, cell: EvalCell) -> Result<()> {
        if self
            .cells
            .iter()
            .any(|c| c.model_id == cell.model_id && c.language_id == cell.language_id)
        {
            return Err(SfrError::DuplicateCell {
                model: cell.model_id,
                language: cell.language_id,
            });
        }
        if !self.models.contains(&cell.model_id) {
            self.models.push(cell.model_id.clone());
        }
        if !self.languages.contains(&cell.language_id) {
            self.languages.push(cell.language_id.clone());
        }
        self.cells.push(cell);
        Ok(())
    }

    pub fn cell(&self, model: &str, language: &str) -> Option<&EvalCell> {
        self.cells
            .iter()
            .find(|c| c.model_id == model && c.language_id == language)
    }

    pub fn evaluated_cells(&self) -> impl Iterator<Item = &EvalCell> {
        self.cells.iter().filter(|c| c.evaluated())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bimodality {
    pub below_low: usize,
    pub intermediate: usize,
    pub above_high: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseReport {
    pub threshold_percent: f64,
    pub collapsed_pairs: Vec<(String, String)>,
    pub n_evaluated: usize,
    pub proportion: f64,
    pub wilson_ci: (f64, f64),
    /// (highest collapsed SFR, lowest non-collapsed SFR); absent when either
    /// side is empty.
    pub gap: Option<(f64, f64)>,
    /// Every threshold strictly inside this interval selects the same
    /// collapsed set. Absent when the sides touch or cross.
    pub insensitive_interval: Option<(f64, f64)>,
    pub bimodality: Bimodality,
}

impl CollapseReport {
    pub fn gap_width(&self) -> Option<f64> {
        self.gap.map(|(lo, hi)| hi - lo)
    }
}

/// Classifies evaluated cells against an SFR threshold (percent, exclusive)
/// and derives the distribution statistics around it.
pub fn classify_collapse(matrix: &EvalMatrix, threshold_percent: f64) -> Result<CollapseReport> {
    if !(0.0..100.0).contains(&threshold_percent) || threshold_percent <= 0.0 {
        return Err(SfrError::InvalidArgument(format!(
            "collapse threshold must be in (0, 100), got {threshold_percent}"
        )));
    }
    let evaluated: Vec<&EvalCell> = matrix.evaluated_cells().collect();
    if evaluated.is_empty() {
        return Err(SfrError::EmptyMatrix);
    }

    let mut collapsed_pairs = Vec::new();
    let mut max_collapsed: Option<f64> = None;
    let mut min_noncollapsed: Option<f64> = None;
    let mut bimodality = Bimodality {
        below_low: 0,
        intermediate: 0,
        above_high: 0,
    };
    for cell in &evaluated {
        let Some(sfr) = cell.sfr_percent else { continue };
        if sfr < threshold_percent {
            collapsed_pairs.push((cell.model_id.clone(), cell.language_id.clone()));
            max_collapsed = Some(max_collapsed.map_or(sfr, |m: f64| m.max(sfr)));
        } else {
            min_noncollapsed = Some(min_noncollapsed.map_or(sfr, |m: f64| m.min(sfr)));
        }
        if sfr < DEFAULT_COLLAPSE_THRESHOLD {
            bimodality.below_low += 1;
        } else if sfr > HIGH_SFR_BOUNDARY {
            bimodality.above_high += 1;
        } else {
            bimodality.intermediate += 1;
        }
    }

    let n_evaluated = evaluated.len();
    let proportion = collapsed_pairs.len() as f64 / n_evaluated as f64;
    let wilson = wilson_ci(collapsed_pairs.len(), n_evaluated, 0.95)?;
    let gap = match (max_collapsed, min_noncollapsed) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        _ => None,
    };
    let insensitive_interval = gap.filter(|(lo, hi)| lo < hi);

    Ok(CollapseReport {
        threshold_percent,
        collapsed_pairs,
        n_evaluated,
        proportion,
        wilson_ci: wilson,
        gap,
        insensitive_interval,
        bimodality,
    })
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_ci(successes: usize, n: usize, confidence: f64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(SfrError::EmptySample);
    }
    if successes > n {
        return Err(SfrError::InvalidArgument(format!(
            "successes {successes} exceed sample size {n}"
        )));
    }
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(SfrError::InvalidArgument(format!(
            "confidence must be in (0, 1), got {confidence}"
        )));
    }
    let z = Normal::standard().inverse_cdf(0.5 + confidence / 2.0);
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    // The bounds are exact at the edges; avoid float noise there.
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == n { 1.0 } else { (center + half).min(1.0) };
    Ok((low, high))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub mean_sfr: f64,
    pub median_sfr: f64,
    pub collapsed: usize,
    pub evaluated: usize,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn summarize(family: &str, values: &[f64], threshold: f64) -> FamilySummary {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    FamilySummary {
        family: family.to_string(),
        mean_sfr: sorted.iter().sum::<f64>() / sorted.len() as f64,
        median_sfr: median(&sorted),
        collapsed: sorted.iter().filter(|&&v| v < threshold).count(),
        evaluated: sorted.len(),
    }
}

/// Per-family mean/median SFR and collapse counts, plus an `all` row over
/// every evaluated cell. Unevaluated cells never enter the statistics.
pub fn family_summary(
    matrix: &EvalMatrix,
    family_of: &HashMap<String, String>,
    collapse_threshold: f64,
) -> Result<Vec<FamilySummary>> {
    let mut per_family: Vec<(String, Vec<f64>)> = Vec::new();
    let mut all = Vec::new();
    for cell in matrix.evaluated_cells() {
        let family = family_of
            .get(&cell.model_id)
            .ok_or_else(|| SfrError::UnmappedModel {
                model: cell.model_id.clone(),
            })?;
        let Some(sfr) = cell.sfr_percent else { continue };
        match per_family.iter_mut().find(|(f, _)| f == family) {
            Some((_, values)) => values.push(sfr),
            None => per_family.push((family.clone(), vec![sfr])),
        }
        all.push(sfr);
    }
    if all.is_empty() {
        return Err(SfrError::EmptyMatrix);
    }
    let mut rows: Vec<FamilySummary> = per_family
        .iter()
        .map(|(family, values)| summarize(family, values, collapse_threshold))
        .collect();
    rows.push(summarize("all", &all, collapse_threshold));
    Ok(rows)
}

/// Published summary values carried alongside the bundled matrix for
/// cross-checking: (family, mean, median, collapsed, evaluated). The report
/// prints a discrepancy note wherever a recomputation disagrees beyond
/// display rounding.
pub const PUBLISHED_FAMILY_SUMMARIES: [(&str, f64, f64, usize, usize); 4] = [
    ("whisper", 53.3, 56.9, 18, 42),
    ("mms", 99.3, 99.4, 0, 5),
    ("seamless", 99.9, 100.0, 0, 6),
    ("all", 62.9, 97.3, 18, 53),
];

/// Compares recomputed family summaries to published values; returns one
/// note per mismatch beyond one-decimal rounding.
pub fn summary_discrepancies(
    computed: &[FamilySummary],
    published: &[(&str, f64, f64, usize, usize)],
) -> Vec<String> {
    let mut notes = Vec::new();
    for (family, mean, median, collapsed, evaluated) in published {
        let Some(row) = computed.iter().find(|r| r.family == *family) else {
            notes.push(format!("published family '{family}' missing from recomputation"));
            continue;
        };
        if round1(row.mean_sfr) != *mean {
            notes.push(format!(
                "{family}: recomputed mean SFR {:.1} differs from published {mean:.1}",
                round1(row.mean_sfr)
            ));
        }
        if round1(row.median_sfr) != *median {
            notes.push(format!(
                "{family}: recomputed median SFR {:.1} differs from published {median:.1}",
                round1(row.median_sfr)
            ));
        }
        if row.collapsed != *collapsed || row.evaluated != *evaluated {
            notes.push(format!(
                "{family}: recomputed collapsed {}/{} differs from published {collapsed}/{evaluated}",
                row.collapsed, row.evaluated
            ));
        }
    }
    notes
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub model_id: String,
    pub language_id: String,
    pub wer_percent: Option<f64>,
    pub sfr_percent: Option<f64>,
    pub collapsed: bool,
    pub quadrant: &'static str,
}

fn quadrant(wer: Option<f64>, sfr: Option<f64>, threshold: f64) -> &'static str {
    let (Some(wer), Some(sfr)) = (wer, sfr) else {
        return "unknown";
    };
    let high_wer = wer >= QUADRANT_WER_BOUNDARY;
    let low_sfr = sfr < threshold;
    match (high_wer, low_sfr) {
        (false, false) => "ideal",
        (true, true) => "script-collapse",
        (true, false) => "wrong-words",
        (false, true) => "silent-collapse",
    }
}

/// One plot-ready record per evaluated cell.
pub fn scatter_data(matrix: &EvalMatrix, collapse_threshold: f64) -> Vec<ScatterPoint> {
    matrix
        .evaluated_cells()
        .map(|cell| ScatterPoint {
            model_id: cell.model_id.clone(),
            language_id: cell.language_id.clone(),
            wer_percent: cell.wer_percent,
            sfr_percent: cell.sfr_percent,
            collapsed: cell
                .sfr_percent
                .is_some_and(|sfr| sfr < collapse_threshold),
            quadrant: quadrant(cell.wer_percent, cell.sfr_percent, collapse_threshold),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GatedReport {
    pub gate_percent: f64,
    pub collapse_threshold: f64,
    /// Cells whose WER is reported but orthographically meaningless.
    pub flagged: Vec<(String, String)>,
}

/// Flags every cell whose SFR falls below the gate: their WER values carry
/// no orthographic meaning and must not be read as accuracy.
pub fn gated_report(matrix: &EvalMatrix, sfr_gate: f64, collapse_threshold: f64) -> GatedReport {
    let gate_percent = sfr_gate * 100.0;
    let flagged = matrix
        .evaluated_cells()
        .filter(|c| c.sfr_percent.is_some_and(|sfr| sfr < gate_percent))
        .map(|c| (c.model_id.clone(), c.language_id.clone()))
        .collect();
    GatedReport {
        gate_percent,
        collapse_threshold,
        flagged,
    }
}

impl GatedReport {
    pub fn is_flagged(&self, model: &str, language: &str) -> bool {
        self.flagged
            .iter()
            .any(|(m, l)| m == model && l == language)
    }
}

/// Renders the matrix as a text table. Collapsed cells are starred; WER
/// values under the gate are marked with `!`; unevaluated cells show `---`.
pub fn render_matrix_text(matrix: &EvalMatrix, gated: &GatedReport) -> String {
    let mut out = String::new();
    let width = 16usize;
    out.push_str(&format!("{:<24}", "model"));
    for lang in &matrix.languages {
        out.push_str(&format!("{:>width$}", format!("{lang} SFR/WER")));
    }
    out.push('\n');
    for model in &matrix.models {
        out.push_str(&format!("{model:<24}"));
        for lang in &matrix.languages {
            let text = match matrix.cell(model, lang) {
                Some(cell) if cell.evaluated() => {
                    let sfr = cell
                        .sfr_percent
                        .map_or("---".to_string(), |v| format!("{:.1}", round1(v)));
                    let wer = cell
                        .wer_percent
                        .map_or("---".to_string(), |v| format!("{:.1}", round1(v)));
                    let collapse_mark = if cell
                        .sfr_percent
                        .is_some_and(|v| v < gated.collapse_threshold)
                    {
                        "*"
                    } else {
                        ""
                    };
                    let gate_mark = if gated.is_flagged(model, lang) { "!" } else { "" };
                    format!("{collapse_mark}{sfr}/{wer}{gate_mark}")
                }
                _ => "---".to_string(),
            };
            out.push_str(&format!("{text:>width$}"));
        }
        out.push('\n');
    }
    out.push_str(&format!(
        "* script collapse (SFR < {:.1}%)   ! WER orthographically meaningless (SFR < {:.1}%)\n",
        gated.collapse_threshold, gated.gate_percent
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_matrix;

    #[test]
    fn wilson_matches_published_interval() {
        let (lo, hi) = wilson_ci(18, 53, 0.95).unwrap();
        assert!((lo - 0.227).abs() < 0.005, "low = {lo}");
        assert!((hi - 0.474).abs() < 0.005, "high = {hi}");
        assert_eq!((lo * 100.0).round() as i64, 23);
        assert_eq!((hi * 100.0).round() as i64, 47);
    }

    #[test]
    fn wilson_zero_successes_hits_zero_lower_bound() {
        let (lo, _) = wilson_ci(0, 10, 0.95).unwrap();
        assert_eq!(lo, 0.0);
    }

    #[test]
    fn wilson_symmetric_about_center_and_matches_closed_form() {
        // Closed form evaluated by hand for p = 0.5, n = 10, z = 1.959964.
        let z: f64 = 1.959964;
        let n = 10.0;
        let p = 0.5;
        let denom = 1.0 + z * z / n;
        let center = (p + z * z / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
        let (lo, hi) = wilson_ci(5, 10, 0.95).unwrap();
        assert!((lo - (center - half)).abs() < 1e-6);
        assert!((hi - (center + half)).abs() < 1e-6);
        assert!(((lo + hi) / 2.0 - center).abs() < 1e-9);
    }

    #[test]
    fn wilson_contains_sample_proportion_and_stays_in_unit_interval() {
        for n in 1..40usize {
            for s in 0..=n {
                let (lo, hi) = wilson_ci(s, n, 0.95).unwrap();
                let p = s as f64 / n as f64;
                assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
                assert!(lo <= p && p <= hi);
            }
        }
    }

    #[test]
    fn wilson_narrower_than_wald_for_interior_small_n() {
        let (lo, hi) = wilson_ci(3, 10, 0.95).unwrap();
        let p: f64 = 0.3;
        let wald_half = 1.959964 * (p * (1.0 - p) / 10.0).sqrt();
        assert!(hi - lo < 2.0 * wald_half);
    }

    #[test]
    fn wilson_empty_sample_errors() {
        assert!(matches!(wilson_ci(0, 0, 0.95), Err(SfrError::EmptySample)));
    }

    #[test]
    fn collapse_on_bundled_matrix() {
        let m = builtin_matrix().unwrap();
        let report = classify_collapse(&m, DEFAULT_COLLAPSE_THRESHOLD).unwrap();
        assert_eq!(report.collapsed_pairs.len(), 18);
        assert_eq!(report.n_evaluated, 53);
        assert!(report
            .collapsed_pairs
            .iter()
            .all(|(model, _)| model.starts_with("whisper")));
        assert_eq!(report.gap, Some((7.2, 13.0)));
        assert_eq!(report.insensitive_interval, Some((7.2, 13.0)));
        assert!((report.gap_width().unwrap() - 5.8).abs() < 1e-9);
        assert_eq!(
            report.bimodality,
            Bimodality {
                below_low: 18,
                intermediate: 5,
                above_high: 30
            }
        );
    }

    #[test]
    fn collapse_rejects_out_of_range_threshold() {
        let m = builtin_matrix().unwrap();
        assert!(classify_collapse(&m, 0.0).is_err());
        assert!(classify_collapse(&m, 100.0).is_err());
    }

    #[test]
    fn collapse_rejects_unevaluated_matrix() {
        let m = EvalMatrix::from_cells(vec![EvalCell {
            model_id: "m".into(),
            language_id: "l".into(),
            sfr_percent: None,
            wer_percent: None,
        }])
        .unwrap();
        assert!(matches!(
            classify_collapse(&m, 10.0),
            Err(SfrError::EmptyMatrix)
        ));
    }

    #[test]
    fn family_medians_and_counts_match_published() {
        let m = builtin_matrix().unwrap();
        let family_of: HashMap<String, String> = m
            .models
            .iter()
            .map(|model| {
                (
                    model.clone(),
                    model.split('-').next().unwrap().to_string(),
                )
            })
            .collect();
        let rows = family_summary(&m, &family_of, DEFAULT_COLLAPSE_THRESHOLD).unwrap();
        let whisper = rows.iter().find(|r| r.family == "whisper").unwrap();
        assert_eq!(round1(whisper.median_sfr), 56.9);
        assert_eq!((whisper.collapsed, whisper.evaluated), (18, 42));
        let mms = rows.iter().find(|r| r.family == "mms").unwrap();
        assert_eq!(round1(mms.mean_sfr), 99.3);
        assert_eq!(round1(mms.median_sfr), 99.4);
        assert_eq!((mms.collapsed, mms.evaluated), (0, 5));
        let all = rows.iter().find(|r| r.family == "all").unwrap();
        assert_eq!(round1(all.median_sfr), 97.3);
        assert_eq!((all.collapsed, all.evaluated), (18, 53));
    }

    #[test]
    fn family_summary_single_cell() {
        let m = EvalMatrix::from_cells(vec![EvalCell {
            model_id: "solo".into(),
            language_id: "xx".into(),
            sfr_percent: Some(100.0),
            wer_percent: Some(12.0),
        }])
        .unwrap();
        let family_of: HashMap<String, String> = [("solo".to_string(), "solo".to_string())].into();
        let rows = family_summary(&m, &family_of, 10.0).unwrap();
        let solo = &rows[0];
        assert_eq!(solo.mean_sfr, 100.0);
        assert_eq!(solo.median_sfr, 100.0);
        assert_eq!((solo.collapsed, solo.evaluated), (0, 1));
    }

    #[test]
    fn family_summary_rejects_unmapped_model() {
        let m = builtin_matrix().unwrap();
        assert!(matches!(
            family_summary(&m, &HashMap::new(), 10.0),
            Err(SfrError::UnmappedModel { .. })
        ));
    }

    #[test]
    fn published_mean_discrepancy_is_reported_not_hidden() {
        // The bundled matrix does not reproduce the published whisper/all
        // means (53.3 / 62.9); recomputation gives 50.9 / 61.0. The
        // discrepancy is surfaced as a note instead of adjusting either side.
        let m = builtin_matrix().unwrap();
        let family_of: HashMap<String, String> = m
            .models
            .iter()
            .map(|model| (model.clone(), model.split('-').next().unwrap().to_string()))
            .collect();
        let rows = family_summary(&m, &family_of, DEFAULT_COLLAPSE_THRESHOLD).unwrap();
        let notes = summary_discrepancies(&rows, &PUBLISHED_FAMILY_SUMMARIES);
        assert_eq!(notes.len(), 2, "notes: {notes:?}");
        assert!(notes.iter().any(|n| n.starts_with("whisper: recomputed mean")));
        assert!(notes.iter().any(|n| n.starts_with("all: recomputed mean")));
    }

    #[test]
    fn scatter_covers_every_evaluated_cell() {
        let m = builtin_matrix().unwrap();
        let points = scatter_data(&m, DEFAULT_COLLAPSE_THRESHOLD);
        assert_eq!(points.len(), 53);
        let p = points
            .iter()
            .find(|p| p.model_id == "whisper-large-v2" && p.language_id == "bn")
            .unwrap();
        assert_eq!(p.wer_percent, Some(113.3));
        assert_eq!(p.sfr_percent, Some(0.7));
        assert!(p.collapsed);
        assert_eq!(p.quadrant, "script-collapse");
    }

    #[test]
    fn scatter_empty_matrix_is_empty() {
        let points = scatter_data(&EvalMatrix::default(), 10.0);
        assert!(points.is_empty());
    }

    #[test]
    fn gate_flags_22_cells_on_bundled_matrix() {
        let m = builtin_matrix().unwrap();
        let gated = gated_report(&m, DEFAULT_SFR_GATE, DEFAULT_COLLAPSE_THRESHOLD);
        assert_eq!(gated.flagged.len(), 22);
        assert!(gated.is_flagged("whisper-base", "ps")); // 42.5
        assert!(gated.is_flagged("whisper-large-v3-turbo", "ml")); // 13.0
        assert!(!gated.is_flagged("whisper-large-v3-turbo", "so")); // 82.1
    }

    #[test]
    fn degenerate_gate_flags_only_exact_zero_cells() {
        // With a near-zero gate, only measured-zero SFR cells remain below
        // it; the bundled matrix has eight. Unevaluated cells never flag.
        let m = builtin_matrix().unwrap();
        let gated = gated_report(&m, 0.0001, DEFAULT_COLLAPSE_THRESHOLD);
        assert_eq!(gated.flagged.len(), 8);
        assert!(gated
            .flagged
            .iter()
            .all(|(model, lang)| m.cell(model, lang).unwrap().sfr_percent == Some(0.0)));
    }

    #[test]
    fn all_perfect_matrix_flags_nothing() {
        let m = EvalMatrix::from_cells(vec![EvalCell {
            model_id: "m".into(),
            language_id: "l".into(),
            sfr_percent: Some(100.0),
            wer_percent: Some(5.0),
        }])
        .unwrap();
        let gated = gated_report(&m, 0.8, 10.0);
        assert!(gated.flagged.is_empty());
    }

    #[test]
    fn render_marks_collapse_and_gate() {
        let m = builtin_matrix().unwrap();
        let gated = gated_report(&m, DEFAULT_SFR_GATE, DEFAULT_COLLAPSE_THRESHOLD);
        let text = render_matrix_text(&m, &gated);
        assert!(text.contains("*7.2/297.0!"));
        assert!(text.contains("---"));
    }
}
