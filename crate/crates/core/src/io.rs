//! Line-oriented JSON files.
//!
//! A document file holds an optional `{"meta": {...}}` line followed by one
//! sentence record per line, e.g.
//! `{"id": 3, "complete": {"tokens": [...], "edges": [...]}}`.
//! A results file holds a `{"sentences": n}` header followed by one
//! completion result per line. Blank lines are ignored in both.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complete::CompletionResult;
use crate::model::{Document, ModelError, SentenceId, SentenceRecord};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
    #[error("line {line}: sentence {sentence}: {source}")]
    Invalid {
        line: usize,
        sentence: SentenceId,
        source: ModelError,
    },
    #[error("line {line}: sentence id {found} does not follow {previous}")]
    Order {
        line: usize,
        previous: SentenceId,
        found: SentenceId,
    },
    #[error("document has no sentences")]
    Empty,
    #[error("results file has no header line")]
    MissingHeader,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaLine {
    meta: BTreeMap<String, String>,
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn json_error(line: usize, error: serde_json::Error) -> IoError {
    IoError::Json {
        line,
        message: error.to_string(),
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses and validates a document.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let mut document = Document::default();
    let mut previous: Option<SentenceId> = None;
    for (n, (line, content)) in numbered_lines(text).enumerate() {
        if n == 0 && content.starts_with("{\"meta\"") {
            let meta: MetaLine = serde_json::from_str(content).map_err(|e| json_error(line, e))?;
            document.metadata = meta.meta;
            continue;
        }
        let record: SentenceRecord =
            serde_json::from_str(content).map_err(|e| json_error(line, e))?;
        if let Some(prev) = previous {
            if record.id <= prev {
                return Err(IoError::Order {
                    line,
                    previous: prev,
                    found: record.id,
                });
            }
        }
        record.parse.validate().map_err(|source| IoError::Invalid {
            line,
            sentence: record.id,
            source,
        })?;
        previous = Some(record.id);
        document.records.push(record);
    }
    if document.records.is_empty() {
        return Err(IoError::Empty);
    }
    Ok(document)
}

pub fn load_document(path: &Path) -> Result<Document, IoError> {
    parse_document(&read_text(path)?)
}

pub fn document_to_string(document: &Document) -> String {
    let mut out = String::new();
    if !document.metadata.is_empty() {
        let meta = MetaLine {
            meta: document.metadata.clone(),
        };
        out.push_str(&serde_json::to_string(&meta).expect("metadata serialization"));
        out.push('\n');
    }
    for record in &document.records {
        out.push_str(&serde_json::to_string(record).expect("record serialization"));
        out.push('\n');
    }
    out
}

pub fn save_document(path: &Path, document: &Document) -> Result<(), IoError> {
    write_text(path, &document_to_string(document))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResultsHeader {
    sentences: u64,
}

/// Completion result of one sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceResult {
    pub id: SentenceId,
    #[serde(flatten)]
    pub result: CompletionResult,
}

/// Completion results of a document together with its sentence count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultsFile {
    pub sentences: u64,
    pub results: Vec<SentenceResult>,
}

impl ResultsFile {
    pub fn to_jsonl(&self) -> String {
        let header = ResultsHeader {
            sentences: self.sentences,
        };
        let mut out = serde_json::to_string(&header).expect("header serialization");
        out.push('\n');
        for result in &self.results {
            out.push_str(&serde_json::to_string(result).expect("result serialization"));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<ResultsFile, IoError> {
        let mut lines = numbered_lines(text);
        let (line, header) = lines.next().ok_or(IoError::MissingHeader)?;
        let header: ResultsHeader =
            serde_json::from_str(header).map_err(|e| json_error(line, e))?;
        let results = lines
            .map(|(line, content)| serde_json::from_str(content).map_err(|e| json_error(line, e)))
            .collect::<Result<Vec<SentenceResult>, _>>()?;
        Ok(ResultsFile {
            sentences: header.sentences,
            results,
        })
    }

    pub fn load(path: &Path) -> Result<ResultsFile, IoError> {
        ResultsFile::parse(&read_text(path)?)
    }
}
