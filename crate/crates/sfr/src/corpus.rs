//! Corpus and matrix ingestion: JSONL utterance files and the model ×
//! language metric CSV, including the bundled published matrix.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::analysis::{EvalCell, EvalMatrix};
use crate::error::{Result, SfrError};
use crate::fidelity::Utterance;

/// Published SFR/WER matrix bundled with the binary.
pub const TABLE3_CSV: &str = include_str!("../data/table3.csv");

/// One JSONL corpus line. Only `hypothesis` is required; unknown fields are
/// preserved for round-tripping. Text is read byte-exact and never
/// NFC-normalized here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
    pub hypothesis: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sfr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wer: Option<f64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl CorpusRecord {
    /// Converts to an utterance, generating `line-<n>` ids where absent.
    pub fn to_utterance(&self, line: usize) -> Utterance {
        Utterance {
            id: self.id.clone().unwrap_or_else(|| format!("line-{line}")),
            language_id: self.lang.clone().unwrap_or_default(),
            hypothesis: self.hypothesis.clone(),
            reference: self.reference.clone(),
            model_id: self.model.clone(),
        }
    }
}

/// Parses JSONL text, one record per non-blank line.
pub fn parse_jsonl(text: &str, path_label: &str) -> Result<Vec<(usize, CorpusRecord)>> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(line).map_err(|e| SfrError::Parse {
                path: path_label.to_string(),
                line: line_no,
                message: e.to_string(),
            })?;
        records.push((line_no, record));
    }
    Ok(records)
}

/// Reads a JSONL corpus file. Non-UTF-8 input fails with the byte offset of
/// the first invalid byte.
pub fn read_jsonl(path: &Path) -> Result<Vec<(usize, CorpusRecord)>> {
    let bytes = std::fs::read(path).map_err(|source| SfrError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = std::str::from_utf8(&bytes).map_err(|e| SfrError::Encoding {
        path: path.display().to_string(),
        offset: e.valid_up_to(),
    })?;
    parse_jsonl(text, &path.display().to_string())
}

/// Writes records back out as JSONL, one object per line.
pub fn write_jsonl<W: Write>(mut writer: W, records: &[CorpusRecord]) -> std::io::Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct MatrixRow {
    model: String,
    language: String,
    sfr: Option<f64>,
    wer: Option<f64>,
}

/// Parses the matrix CSV format (`model,language,sfr,wer`; empty metric
/// fields mark unevaluated cells; `#` lines are comments).
pub fn parse_matrix_csv(text: &str, path_label: &str) -> Result<EvalMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut matrix = EvalMatrix::default();
    for (idx, row) in reader.deserialize::<MatrixRow>().enumerate() {
        let row = row.map_err(|e| SfrError::Parse {
            path: path_label.to_string(),
            line: idx + 2,
            message: e.to_string(),
        })?;
        matrix.push(EvalCell {
            model_id: row.model,
            language_id: row.language,
            sfr_percent: row.sfr,
            wer_percent: row.wer,
        })?;
    }
    Ok(matrix)
}

pub fn read_matrix_csv(path: &Path) -> Result<EvalMatrix> {
    let text = std::fs::read_to_string(path).map_err(|source| SfrError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_matrix_csv(&text, &path.display().to_string())
}

/// Serializes a matrix to CSV, cell order preserved. Unevaluated metrics
/// serialize as empty fields, never zero.
pub fn matrix_to_csv(matrix: &EvalMatrix) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for cell in &matrix.cells {
        writer
            .serialize(MatrixRow {
                model: cell.model_id.clone(),
                language: cell.language_id.clone(),
                sfr: cell.sfr_percent,
                wer: cell.wer_percent,
            })
            .expect("in-memory csv write cannot fail");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv output is utf-8")
}

pub fn write_matrix_csv(matrix: &EvalMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, matrix_to_csv(matrix)).map_err(|source| SfrError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// The bundled published matrix: 54 cells, 53 evaluated.
pub fn builtin_matrix() -> Result<EvalMatrix> {
    parse_matrix_csv(TABLE3_CSV, "<builtin>")
}
