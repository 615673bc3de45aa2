//! Per-language script specifications: Unicode block ranges, language-unique
//! code points, and the registry of detection scripts used for dominant-script
//! classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SfrError};

/// Default script configuration shipped with the binary.
pub const DEFAULT_SCRIPTS_TOML: &str = include_str!("../data/scripts.toml");

const MAX_CODE_POINT: u32 = 0x10FFFF;

/// Inclusive range of Unicode code points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CodePointRange {
    start: u32,
    end: u32,
}

impl CodePointRange {
    pub fn new(start: u32, end: u32) -> Result<Self> {
        if start > end {
            return Err(SfrError::InvalidRange {
                start,
                end,
                message: "start exceeds end".into(),
            });
        }
        if end > MAX_CODE_POINT {
            return Err(SfrError::InvalidRange {
                start,
                end,
                message: "end exceeds U+10FFFF".into(),
            });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn end(&self) -> u32 {
        self.end
    }

    pub fn contains(&self, c: char) -> bool {
        let cp = c as u32;
        self.start <= cp && cp <= self.end
    }

    /// Parses the hex form used in config files, e.g. `"0600-06FF"`.
    pub fn parse_hex(s: &str) -> Result<Self> {
        let invalid = || SfrError::InvalidArgument(format!("invalid code point range '{s}'"));
        let (lo, hi) = s.split_once('-').ok_or_else(invalid)?;
        let start = u32::from_str_radix(lo.trim(), 16).map_err(|_| invalid())?;
        let end = u32::from_str_radix(hi.trim(), 16).map_err(|_| invalid())?;
        Self::new(start, end)
    }
}

impl fmt::Display for CodePointRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04X}-{:04X}", self.start, self.end)
    }
}

/// Text-normalization policy applied before WER/CER (never before SFR).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationKind {
    /// Strip Arabic diacritics and punctuation.
    ArabicScript,
    /// Strip punctuation and Indic digits.
    Indic,
    /// Lowercase and strip punctuation.
    LatinLowercase,
}

/// One target language's script specification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptConfig {
    pub language_id: String,
    pub script_name: String,
    pub ranges: Vec<CodePointRange>,
    pub unique_points: BTreeSet<char>,
    pub normalization: NormalizationKind,
}

impl ScriptConfig {
    /// Checks the structural invariants: at least one range, no overlap.
    pub fn validate(&self) -> Result<()> {
        if self.ranges.is_empty() {
            return Err(SfrError::Config {
                path: "-".into(),
                key: self.language_id.clone(),
                message: "ranges must be non-empty".into(),
            });
        }
        let mut sorted = self.ranges.clone();
        sorted.sort();
        for pair in sorted.windows(2) {
            if pair[1].start <= pair[0].end {
                return Err(SfrError::Config {
                    path: "-".into(),
                    key: self.language_id.clone(),
                    message: format!("ranges {} and {} overlap", pair[0], pair[1]),
                });
            }
        }
        Ok(())
    }
}

/// True iff `c` falls in any of the config's block ranges or in its
/// unique-code-point set.
pub fn char_in_script(c: char, cfg: &ScriptConfig) -> bool {
    cfg.ranges.iter().any(|r| r.contains(c)) || cfg.unique_points.contains(&c)
}

/// A named script used only for dominant-script classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionScript {
    pub name: &'static str,
    pub ranges: Vec<CodePointRange>,
}

/// Language configs plus the fixed, ordered detection-script list. The order
/// below is the tie-break order for dominant-script classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptRegistry {
    pub configs: BTreeMap<String, ScriptConfig>,
    pub detection_scripts: Vec<DetectionScript>,
}

impl ScriptRegistry {
    pub fn config(&self, language_id: &str) -> Result<&ScriptConfig> {
        self.configs
            .get(language_id)
            .ok_or_else(|| SfrError::UnknownLanguage {
                language: language_id.to_string(),
                known: self.configs.keys().cloned().collect::<Vec<_>>().join(", "),
            })
    }
}

fn range(start: u32, end: u32) -> CodePointRange {
    CodePointRange::new(start, end).expect("static range is valid")
}

/// Detection scripts in tie-break order. Latin first, then the Indic blocks,
/// then Arabic and Cyrillic.
fn detection_scripts() -> Vec<DetectionScript> {
    vec![
        DetectionScript {
            name: "Latin",
            ranges: vec![
                range(0x0041, 0x005A),
                range(0x0061, 0x007A),
                range(0x00C0, 0x00FF),
                range(0x0100, 0x024F),
            ],
        },
        DetectionScript {
            name: "Devanagari",
            ranges: vec![range(0x0900, 0x097F)],
        },
        DetectionScript {
            name: "Bengali",
            ranges: vec![range(0x0980, 0x09FF)],
        },
        DetectionScript {
            name: "Malayalam",
            ranges: vec![range(0x0D00, 0x0D7F)],
        },
        DetectionScript {
            name: "Arabic",
            ranges: vec![
                range(0x0600, 0x06FF),
                range(0x0750, 0x077F),
                range(0x08A0, 0x08FF),
                range(0xFB50, 0xFDFF),
                range(0xFE70, 0xFEFF),
            ],
        },
        DetectionScript {
            name: "Cyrillic",
            ranges: vec![range(0x0400, 0x04FF), range(0x0500, 0x052F)],
        },
    ]
}

#[derive(Debug, Serialize, Deserialize)]
struct LanguageEntry {
    script: String,
    ranges: Vec<String>,
    #[serde(default)]
    unique: Vec<String>,
    normalization: NormalizationKind,
}

fn entry_to_config(language_id: &str, entry: &LanguageEntry) -> Result<ScriptConfig> {
    let ranges = entry
        .ranges
        .iter()
        .map(|s| CodePointRange::parse_hex(s))
        .collect::<Result<Vec<_>>>()?;
    let mut unique_points = BTreeSet::new();
    for hex in &entry.unique {
        let cp = u32::from_str_radix(hex.trim(), 16).map_err(|_| {
            SfrError::InvalidArgument(format!("invalid code point '{hex}' for '{language_id}'"))
        })?;
        let c = char::from_u32(cp).ok_or_else(|| {
            SfrError::InvalidArgument(format!("U+{cp:04X} is not a Unicode scalar value"))
        })?;
        unique_points.insert(c);
    }
    let cfg = ScriptConfig {
        language_id: language_id.to_string(),
        script_name: entry.script.clone(),
        ranges,
        unique_points,
        normalization: entry.normalization,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn config_to_entry(cfg: &ScriptConfig) -> LanguageEntry {
    LanguageEntry {
        script: cfg.script_name.clone(),
        ranges: cfg.ranges.iter().map(|r| r.to_string()).collect(),
        unique: cfg
            .unique_points
            .iter()
            .map(|c| format!("{:04X}", *c as u32))
            .collect(),
        normalization: cfg.normalization,
    }
}

fn parse_config_str(text: &str, path_label: &str) -> Result<BTreeMap<String, ScriptConfig>> {
    let entries: BTreeMap<String, LanguageEntry> =
        toml::from_str(text).map_err(|e| SfrError::Config {
            path: path_label.to_string(),
            key: "-".into(),
            message: e.to_string(),
        })?;
    entries
        .iter()
        .map(|(id, entry)| Ok((id.clone(), entry_to_config(id, entry)?)))
        .collect()
}

/// The six built-in language configs plus the fixed detection scripts.
pub fn builtin_registry() -> ScriptRegistry {
    let configs = parse_config_str(DEFAULT_SCRIPTS_TOML, "<builtin>")
        .expect("embedded script config is valid");
    ScriptRegistry {
        configs,
        detection_scripts: detection_scripts(),
    }
}

/// Loads a config file and merges its entries over the built-ins. An entry
/// with a built-in language id replaces the built-in config.
pub fn load_registry(path: &Path) -> Result<ScriptRegistry> {
    let text = std::fs::read_to_string(path).map_err(|source| SfrError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let overrides = parse_config_str(&text, &path.display().to_string())?;
    let mut registry = builtin_registry();
    registry.configs.extend(overrides);
    Ok(registry)
}

/// Serializes the registry's language configs back to the config file format.
pub fn to_config_string(registry: &ScriptRegistry) -> String {
    let entries: BTreeMap<&str, LanguageEntry> = registry
        .configs
        .iter()
        .map(|(id, cfg)| (id.as_str(), config_to_entry(cfg)))
        .collect();
    toml::to_string(&entries).expect("config serialization cannot fail")
}
