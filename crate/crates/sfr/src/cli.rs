//! Command-line interface: `score`, `eval`, `taxonomy`, `report`, `audit`,
//! and `validate` subcommands over the library.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{
    classify_collapse, family_summary, gated_report, render_matrix_text, round1, scatter_data,
    summary_discrepancies, EvalCell, EvalMatrix, DEFAULT_COLLAPSE_THRESHOLD, DEFAULT_SFR_GATE,
    PUBLISHED_FAMILY_SUMMARIES,
};
use crate::audit::{audit_step, AuditConfig, AuditState};
use crate::corpus::{
    builtin_matrix, matrix_to_csv, read_jsonl, read_matrix_csv, CorpusRecord,
};
use crate::error::{Result, SfrError};
use crate::fidelity::{sfr_corpus, sfr_utterance, CorpusSfr, Utterance};
use crate::metrics::{cer_stats, wer_stats, NormalizationPolicy};
use crate::script::{builtin_registry, load_registry, ScriptRegistry};
use crate::taxonomy::{classify_dominant, taxonomy_table, TaxonomyConfig};
use crate::validate::{validate_pashto_predictions, validate_registry};

/// Exit codes: 0 success, 1 validation/alert failure, 2 usage error,
/// 3 input-format error.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;

pub fn exit_code_for(err: &SfrError) -> u8 {
    match err {
        SfrError::UnknownLanguage { .. } | SfrError::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_INPUT,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sfr",
    about = "Script Fidelity Rate toolkit for multilingual ASR output",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Script config file merged over the built-in languages.
    #[arg(long, global = true)]
    pub scripts: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-utterance and corpus SFR for a JSONL corpus.
    Score {
        corpus: PathBuf,
        /// Target language; defaults to each record's `lang` field.
        #[arg(long)]
        lang: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// SFR plus WER/CER against references.
    Eval {
        corpus: PathBuf,
        #[arg(long)]
        lang: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dominant-script distribution per model, with looping flags.
    Taxonomy {
        corpus: PathBuf,
        #[arg(long)]
        lang: Option<String>,
        /// Minimum share a script needs to dominate an utterance.
        #[arg(long, default_value_t = 0.5)]
        dominance: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Collapse statistics, family summaries, and the gated matrix.
    Report {
        /// Matrix CSV (`model,language,sfr,wer`).
        #[arg(long, conflicts_with_all = ["builtin_matrix", "from_jsonl"])]
        matrix: Option<PathBuf>,
        /// Use the bundled published matrix.
        #[arg(long)]
        builtin_matrix: bool,
        /// Assemble the matrix from per-utterance JSONL prediction files.
        #[arg(long, num_args = 1..)]
        from_jsonl: Vec<PathBuf>,
        /// Collapse threshold in percent.
        #[arg(long, default_value_t = DEFAULT_COLLAPSE_THRESHOLD)]
        threshold: f64,
        /// SFR gate (ratio) below which WER is flagged as meaningless.
        #[arg(long, default_value_t = DEFAULT_SFR_GATE)]
        gate: f64,
        /// Write plot-ready scatter CSV to this path.
        #[arg(long)]
        scatter: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Streaming reference-free audit: JSONL on stdin, alerts on stdout.
    Audit {
        #[arg(long, default_value_t = 100)]
        window: usize,
        /// Alert when the window mean SFR drops below this ratio.
        #[arg(long, default_value_t = 0.8)]
        threshold: f64,
        /// Non-null results required in the window before alerts arm
        /// (defaults to the window size).
        #[arg(long)]
        min_fill: Option<usize>,
        /// Exit nonzero if any alert fired.
        #[arg(long)]
        fail_on_alert: bool,
        /// Omit timestamps from alert events (deterministic output).
        #[arg(long)]
        no_timestamp: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Known-positive/negative checks for every configured language.
    Validate {
        /// Imported Pashto predictions; Whisper rows must stay under 1% SFR.
        #[arg(long)]
        pashto_predictions: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn registry_for(common: &CommonArgs) -> Result<ScriptRegistry> {
    match &common.scripts {
        Some(path) => load_registry(path),
        None => Ok(builtin_registry()),
    }
}

fn corpus_utterances(
    path: &Path,
    lang_override: Option<&str>,
) -> Result<Vec<(Utterance, CorpusRecord)>> {
    let records = read_jsonl(path)?;
    let mut out = Vec::with_capacity(records.len());
    for (line, record) in records {
        let mut utterance = record.to_utterance(line);
        if let Some(lang) = lang_override {
            utterance.language_id = lang.to_string();
        }
        if utterance.language_id.is_empty() {
            return Err(SfrError::InvalidArgument(format!(
                "{}:{line}: record has no `lang` field and no --lang override was given",
                path.display()
            )));
        }
        out.push((utterance, record));
    }
    Ok(out)
}

fn print_corpus_footer<W: Write>(mut out: W, corpus: &CorpusSfr) -> std::io::Result<()> {
    let fmt = |v: Option<f64>| v.map_or("null".to_string(), |x| format!("{:.4}", x));
    writeln!(
        out,
        "corpus: utterances={} null={} mean_sfr={} weighted_sfr={}",
        corpus.utterance_count,
        corpus.null_count,
        fmt(corpus.mean_sfr),
        fmt(corpus.weighted_sfr),
    )
}

pub fn cmd_score(
    corpus: &Path,
    lang: Option<&str>,
    format: OutputFormat,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<u8> {
    let registry = registry_for(common)?;
    let utterances = corpus_utterances(corpus, lang)?;
    let mut results = Vec::with_capacity(utterances.len());
    for (utterance, _) in &utterances {
        let cfg = registry.config(&utterance.language_id)?;
        results.push(sfr_utterance(utterance, cfg));
    }
    let corpus_sfr = sfr_corpus(results);
    let io_err = |source| SfrError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match format {
        OutputFormat::Text => {
            writeln!(out, "{:<24}{:>10}{:>10}{:>10}", "id", "countable", "target", "sfr")
                .map_err(io_err)?;
            for r in &corpus_sfr.per_utterance {
                let sfr = r.sfr.map_or("null".to_string(), |v| format!("{v:.4}"));
                writeln!(
                    out,
                    "{:<24}{:>10}{:>10}{:>10}",
                    r.utterance_id, r.countable_chars, r.target_chars, sfr
                )
                .map_err(io_err)?;
            }
            print_corpus_footer(&mut *out, &corpus_sfr).map_err(io_err)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "utterance_id,countable_chars,target_chars,sfr").map_err(io_err)?;
            for r in &corpus_sfr.per_utterance {
                let sfr = r.sfr.map_or(String::new(), |v| v.to_string());
                writeln!(
                    out,
                    "{},{},{},{}",
                    r.utterance_id, r.countable_chars, r.target_chars, sfr
                )
                .map_err(io_err)?;
            }
            eprint_corpus(&corpus_sfr);
        }
        OutputFormat::Jsonl => {
            for r in &corpus_sfr.per_utterance {
                writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))
                    .map_err(io_err)?;
            }
            let footer = serde_json::json!({
                "corpus": {
                    "utterance_count": corpus_sfr.utterance_count,
                    "null_count": corpus_sfr.null_count,
                    "mean_sfr": corpus_sfr.mean_sfr,
                    "weighted_sfr": corpus_sfr.weighted_sfr,
                }
            });
            writeln!(out, "{footer}").map_err(io_err)?;
        }
    }
    if corpus_sfr.null_count == corpus_sfr.utterance_count && corpus_sfr.utterance_count > 0 {
        eprintln!("warning: every hypothesis was empty; corpus SFR is null");
    }
    Ok(EXIT_OK)
}

fn eprint_corpus(corpus: &CorpusSfr) {
    let mut buf = Vec::new();
    print_corpus_footer(&mut buf, corpus).expect("in-memory write");
    eprint!("{}", String::from_utf8_lossy(&buf));
}

pub fn cmd_eval(
    corpus: &Path,
    lang: Option<&str>,
    format: OutputFormat,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<u8> {
    let registry = registry_for(common)?;
    let utterances = corpus_utterances(corpus, lang)?;
    let io_err = |source| SfrError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };

    struct Row {
        id: String,
        sfr: Option<f64>,
        wer: f64,
        cer: f64,
    }
    let mut rows = Vec::new();
    let mut sfr_results = Vec::new();
    let (mut word_edits, mut word_ref) = (0usize, 0usize);
    let (mut char_edits, mut char_ref) = (0usize, 0usize);
    for (utterance, _) in &utterances {
        let cfg = registry.config(&utterance.language_id)?;
        let policy = NormalizationPolicy::for_kind(cfg.normalization);
        let sfr = sfr_utterance(utterance, cfg);
        let w = wer_stats(utterance, &policy)?;
        let c = cer_stats(utterance, &policy)?;
        word_edits += w.total_edits();
        word_ref += w.reference_len;
        char_edits += c.total_edits();
        char_ref += c.reference_len;
        rows.push(Row {
            id: utterance.id.clone(),
            sfr: sfr.sfr,
            wer: w.error_rate(),
            cer: c.error_rate(),
        });
        sfr_results.push(sfr);
    }
    let corpus_sfr = sfr_corpus(sfr_results);
    let corpus_wer = word_edits as f64 / word_ref as f64;
    let corpus_cer = char_edits as f64 / char_ref as f64;

    match format {
        OutputFormat::Text => {
            writeln!(out, "{:<24}{:>10}{:>10}{:>10}", "id", "sfr", "wer", "cer").map_err(io_err)?;
            for r in &rows {
                let sfr = r.sfr.map_or("null".to_string(), |v| format!("{v:.4}"));
                writeln!(out, "{:<24}{:>10}{:>10.4}{:>10.4}", r.id, sfr, r.wer, r.cer)
                    .map_err(io_err)?;
            }
            print_corpus_footer(&mut *out, &corpus_sfr).map_err(io_err)?;
            writeln!(out, "corpus: wer={corpus_wer:.4} cer={corpus_cer:.4}").map_err(io_err)?;
        }
        OutputFormat::Csv => {
            writeln!(out, "utterance_id,sfr,wer,cer").map_err(io_err)?;
            for r in &rows {
                let sfr = r.sfr.map_or(String::new(), |v| v.to_string());
                writeln!(out, "{},{},{},{}", r.id, sfr, r.wer, r.cer).map_err(io_err)?;
            }
            eprint_corpus(&corpus_sfr);
            eprintln!("corpus: wer={corpus_wer:.4} cer={corpus_cer:.4}");
        }
        OutputFormat::Jsonl => {
            for r in &rows {
                let line = serde_json::json!({
                    "utterance_id": r.id, "sfr": r.sfr, "wer": r.wer, "cer": r.cer,
                });
                writeln!(out, "{line}").map_err(io_err)?;
            }
            let footer = serde_json::json!({
                "corpus": {
                    "mean_sfr": corpus_sfr.mean_sfr,
                    "weighted_sfr": corpus_sfr.weighted_sfr,
                    "wer": corpus_wer,
                    "cer": corpus_cer,
                }
            });
            writeln!(out, "{footer}").map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_taxonomy(
    corpus: &Path,
    lang: Option<&str>,
    dominance: f64,
    format: OutputFormat,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<u8> {
    let registry = registry_for(common)?;
    let utterances = corpus_utterances(corpus, lang)?;
    let cfg = TaxonomyConfig {
        dominance_threshold: dominance,
        ..TaxonomyConfig::default()
    };
    let mut labels = Vec::new();
    let mut grouping = HashMap::new();
    for (utterance, record) in &utterances {
        let target = registry.config(&utterance.language_id)?;
        labels.push(classify_dominant(utterance, &registry, target, &cfg));
        grouping.insert(
            utterance.id.clone(),
            record.model.clone().unwrap_or_else(|| "all".to_string()),
        );
    }
    let tables = taxonomy_table(&labels, &grouping)?;
    let io_err = |source| SfrError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match format {
        OutputFormat::Text => {
            writeln!(
                out,
                "{:<24}{:>8}{:>8}{:>8}{:>8}{:>8}",
                "group", "latin", "devang", "target", "other", "n"
            )
            .map_err(io_err)?;
            for t in &tables {
                writeln!(
                    out,
                    "{:<24}{:>8}{:>8}{:>8}{:>8}{:>8}",
                    t.group_id,
                    t.percents.latin,
                    t.percents.devanagari,
                    t.percents.target,
                    t.percents.other,
                    t.n
                )
                .map_err(io_err)?;
            }
            let looping = labels.iter().filter(|l| l.looping_flag).count();
            writeln!(out, "looping-flagged utterances: {looping}/{}", labels.len())
                .map_err(io_err)?;
        }
        OutputFormat::Csv => {
            writeln!(
                out,
                "group,n,latin_count,devanagari_count,target_count,other_count,latin_pct,devanagari_pct,target_pct,other_pct"
            )
            .map_err(io_err)?;
            for t in &tables {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    t.group_id,
                    t.n,
                    t.counts.latin,
                    t.counts.devanagari,
                    t.counts.target,
                    t.counts.other,
                    t.percents.latin,
                    t.percents.devanagari,
                    t.percents.target,
                    t.percents.other
                )
                .map_err(io_err)?;
            }
        }
        OutputFormat::Jsonl => {
            for label in &labels {
                writeln!(out, "{}", serde_json::to_string(label).expect("serializable"))
                    .map_err(io_err)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Model family for summary rows: the model id up to the first dash.
fn family_of_model(model: &str) -> String {
    model.split('-').next().unwrap_or(model).to_string()
}

fn matrix_from_jsonl(paths: &[PathBuf], registry: &ScriptRegistry) -> Result<EvalMatrix> {
    #[derive(Default)]
    struct Acc {
        sfr: Vec<f64>,
        word_edits: usize,
        word_ref: usize,
    }
    let mut cells: Vec<((String, String), Acc)> = Vec::new();
    for path in paths {
        for (line, record) in read_jsonl(path)? {
            let utterance = record.to_utterance(line);
            if utterance.language_id.is_empty() {
                return Err(SfrError::InvalidArgument(format!(
                    "{}:{line}: record has no `lang` field",
                    path.display()
                )));
            }
            let model = utterance.model_id.clone().unwrap_or_else(|| "all".into());
            let cfg = registry.config(&utterance.language_id)?;
            let key = (model, utterance.language_id.clone());
            let acc = match cells.iter_mut().find(|(k, _)| *k == key) {
                Some((_, acc)) => acc,
                None => {
                    cells.push((key, Acc::default()));
                    &mut cells.last_mut().unwrap().1
                }
            };
            if let Some(sfr) = sfr_utterance(&utterance, cfg).sfr {
                acc.sfr.push(sfr);
            }
            if utterance.reference.is_some() {
                let policy = NormalizationPolicy::for_kind(cfg.normalization);
                let stats = wer_stats(&utterance, &policy)?;
                acc.word_edits += stats.total_edits();
                acc.word_ref += stats.reference_len;
            }
        }
    }
    EvalMatrix::from_cells(
        cells
            .into_iter()
            .map(|((model, language), acc)| EvalCell {
                model_id: model,
                language_id: language,
                sfr_percent: (!acc.sfr.is_empty())
                    .then(|| 100.0 * acc.sfr.iter().sum::<f64>() / acc.sfr.len() as f64),
                wer_percent: (acc.word_ref > 0)
                    .then(|| 100.0 * acc.word_edits as f64 / acc.word_ref as f64),
            })
            .collect(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_report(
    matrix_path: Option<&PathBuf>,
    use_builtin: bool,
    from_jsonl: &[PathBuf],
    threshold: f64,
    gate: f64,
    scatter_path: Option<&PathBuf>,
    format: OutputFormat,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<u8> {
    let matrix = if let Some(path) = matrix_path {
        read_matrix_csv(path)?
    } else if use_builtin {
        builtin_matrix()?
    } else if !from_jsonl.is_empty() {
        let registry = registry_for(common)?;
        matrix_from_jsonl(from_jsonl, &registry)?
    } else {
        return Err(SfrError::InvalidArgument(
            "report needs --matrix, --builtin-matrix, or --from-jsonl".into(),
        ));
    };

    let collapse = classify_collapse(&matrix, threshold)?;
    let family_of: HashMap<String, String> = matrix
        .models
        .iter()
        .map(|m| (m.clone(), family_of_model(m)))
        .collect();
    let families = family_summary(&matrix, &family_of, threshold)?;
    let gated = gated_report(&matrix, gate, threshold);

    if let Some(path) = scatter_path {
        let points = scatter_data(&matrix, threshold);
        let mut csv = String::from("model,language,wer,sfr,collapsed,quadrant\n");
        for p in &points {
            let fmt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                p.model_id,
                p.language_id,
                fmt(p.wer_percent),
                fmt(p.sfr_percent),
                p.collapsed,
                p.quadrant
            ));
        }
        std::fs::write(path, csv).map_err(|source| SfrError::Io {
            path: path.clone(),
            source,
        })?;
    }

    let io_err = |source| SfrError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match format {
        OutputFormat::Csv => {
            write!(out, "{}", matrix_to_csv(&matrix)).map_err(io_err)?;
        }
        _ => {
            write!(out, "{}", render_matrix_text(&matrix, &gated)).map_err(io_err)?;
            writeln!(out).map_err(io_err)?;
            writeln!(
                out,
                "collapse: {}/{} evaluated pairs below {:.1}% ({:.1}%; 95% Wilson CI {:.0}-{:.0}%)",
                collapse.collapsed_pairs.len(),
                collapse.n_evaluated,
                collapse.threshold_percent,
                100.0 * collapse.proportion,
                (100.0 * collapse.wilson_ci.0).round(),
                (100.0 * collapse.wilson_ci.1).round(),
            )
            .map_err(io_err)?;
            if let Some((lo, hi)) = collapse.insensitive_interval {
                writeln!(
                    out,
                    "threshold-insensitive interval: [{lo:.1}%, {hi:.1}%] (gap {:.1} points)",
                    hi - lo
                )
                .map_err(io_err)?;
            }
            writeln!(
                out,
                "bimodality: {} below 10%, {} intermediate, {} above 90%",
                collapse.bimodality.below_low,
                collapse.bimodality.intermediate,
                collapse.bimodality.above_high
            )
            .map_err(io_err)?;
            writeln!(out).map_err(io_err)?;
            writeln!(
                out,
                "{:<16}{:>10}{:>12}{:>14}",
                "family", "mean SFR", "median SFR", "collapsed"
            )
            .map_err(io_err)?;
            for f in &families {
                writeln!(
                    out,
                    "{:<16}{:>10.1}{:>12.1}{:>11}/{:<3}",
                    f.family,
                    round1(f.mean_sfr),
                    round1(f.median_sfr),
                    f.collapsed,
                    f.evaluated
                )
                .map_err(io_err)?;
            }
            if use_builtin {
                for note in summary_discrepancies(&families, &PUBLISHED_FAMILY_SUMMARIES) {
                    writeln!(out, "note: {note}").map_err(io_err)?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_audit(
    window: usize,
    threshold: f64,
    min_fill: Option<usize>,
    fail_on_alert: bool,
    no_timestamp: bool,
    common: &CommonArgs,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<u8> {
    let registry = registry_for(common)?;
    let cfg = AuditConfig {
        window_size: window,
        alert_threshold: threshold,
        min_window_fill: min_fill.unwrap_or(window),
    };
    cfg.validate()?;
    let mut state = AuditState::new();
    let mut line_no = 0usize;
    let mut line = String::new();
    loop {
        line.clear();
        let n = input.read_line(&mut line).map_err(|source| SfrError::Io {
            path: PathBuf::from("<stdin>"),
            source,
        })?;
        if n == 0 {
            break;
        }
        line_no += 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord = match serde_json::from_str(&line) {
            Ok(r) => r,
            Err(e) => {
                eprintln!("stdin:{line_no}: {e}");
                continue;
            }
        };
        let utterance = record.to_utterance(line_no);
        match audit_step(&mut state, &utterance, &registry, &cfg) {
            Ok(Some(mut alert)) => {
                if !no_timestamp {
                    let secs = std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0);
                    alert.timestamp = Some(secs.to_string());
                }
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&alert).expect("serializable")
                )
                .map_err(|source| SfrError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
                out.flush().ok();
                eprintln!(
                    "ALERT {}: window mean SFR {:.4} below {:.2} ({} non-null of {})",
                    alert.language, alert.window_mean, threshold, alert.non_null, alert.window_size
                );
            }
            Ok(None) => {}
            Err(e) => eprintln!("stdin:{line_no}: {e}"),
        }
    }
    eprintln!(
        "audit: processed={} null={} alerts={}",
        state.processed, state.null_count, state.alerts_fired
    );
    if fail_on_alert && state.alerts_fired > 0 {
        return Ok(EXIT_FAILED);
    }
    Ok(EXIT_OK)
}

pub fn cmd_validate(
    pashto_predictions: Option<&PathBuf>,
    common: &CommonArgs,
    out: &mut dyn Write,
) -> Result<u8> {
    let registry = registry_for(common)?;
    let mut checks = validate_registry(&registry);
    if let Some(path) = pashto_predictions {
        let records = read_jsonl(path)?;
        checks.extend(validate_pashto_predictions(&records, &registry)?);
    }
    let io_err = |source| SfrError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    let mut failed = 0usize;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        if !check.passed {
            failed += 1;
        }
        writeln!(
            out,
            "{status} {:<4} {:<32} {}",
            check.language, check.name, check.detail
        )
        .map_err(io_err)?;
    }
    writeln!(out, "{} checks, {failed} failures", checks.len()).map_err(io_err)?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

/// Dispatches a parsed invocation; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<u8> {
    match &cli.command {
        Command::Score {
            corpus,
            lang,
            format,
            common,
        } => cmd_score(corpus, lang.as_deref(), *format, common, out),
        Command::Eval {
            corpus,
            lang,
            format,
            common,
        } => cmd_eval(corpus, lang.as_deref(), *format, common, out),
        Command::Taxonomy {
            corpus,
            lang,
            dominance,
            format,
            common,
        } => cmd_taxonomy(corpus, lang.as_deref(), *dominance, *format, common, out),
        Command::Report {
            matrix,
            builtin_matrix,
            from_jsonl,
            threshold,
            gate,
            scatter,
            format,
            common,
        } => cmd_report(
            matrix.as_ref(),
            *builtin_matrix,
            from_jsonl,
            *threshold,
            *gate,
            scatter.as_ref(),
            *format,
            common,
            out,
        ),
        Command::Audit {
            window,
            threshold,
            min_fill,
            fail_on_alert,
            no_timestamp,
            common,
        } => {
            let stdin = std::io::stdin();
            let mut input = stdin.lock();
            cmd_audit(
                *window,
                *threshold,
                *min_fill,
                *fail_on_alert,
                *no_timestamp,
                common,
                &mut input,
                out,
            )
        }
        Command::Validate {
            pashto_predictions,
            common,
        } => cmd_validate(pashto_predictions.as_ref(), common, out),
    }
}
