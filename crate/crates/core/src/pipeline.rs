//! The batch pipeline over one document.
//!
//! 1. Complete parses are added to the store.
//! 2. Multiple parses are resolved in document order, each choice seeing the
//!    complete parses and the choices made before it; the chosen candidate
//!    is then added to the store.
//! 3. The store is frozen and incomplete parses are completed in parallel.
//!
//! Evidence for a sentence never includes the sentence itself.

use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{completion_report, CompletionReport};
use crate::complete::{CompleteError, CompletionOutput, CompletionResult, Completer};
use crate::config::PipelineConfig;
use crate::disambiguate::{Disambiguator, Selection};
use crate::io::{ResultsFile, SentenceResult};
use crate::lexicon::SynonymLexicon;
use crate::matcher::Matcher;
use crate::model::{Document, ModelError, Parse, SentenceId, SentenceRecord};
use crate::store::{DiscourseStore, Scope, StoreError};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("sentence {sentence}: {source}")]
    Model {
        sentence: SentenceId,
        source: ModelError,
    },
    #[error("sentence {sentence}: {source}")]
    Complete {
        sentence: SentenceId,
        source: CompleteError,
    },
}

/// A store built from a document, with the choices made for its multiple
/// parses.
pub struct BuiltStore {
    pub store: DiscourseStore,
    pub selections: Vec<(SentenceId, Selection)>,
}

/// Runs steps 1 and 2 and freezes the store.
pub fn build_store(
    document: &Document,
    lexicon: &SynonymLexicon,
    config: &PipelineConfig,
) -> Result<BuiltStore, PipelineError> {
    let mut store = DiscourseStore::new().with_window(config.window);
    for record in &document.records {
        if let Parse::Complete(tree) = &record.parse {
            store.ingest_tree(record.id, tree)?;
        }
    }
    let mut selections = Vec::new();
    for record in &document.records {
        let Parse::Multiple(forest) = &record.parse else {
            continue;
        };
        let selection = {
            let matcher = Matcher::while_building(&store, lexicon).scoped(Scope::Sentence(record.id));
            Disambiguator::from_matcher(matcher, config.similar_discount)
                .select_parse(forest)
                .map_err(|source| PipelineError::Model {
                    sentence: record.id,
                    source,
                })?
        };
        store.ingest_selected_parse(record.id, forest, selection.chosen)?;
        selections.push((record.id, selection));
    }
    store.freeze();
    Ok(BuiltStore { store, selections })
}

/// Resolves every multiple parse against a frozen store.
pub fn disambiguate_document(
    document: &Document,
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    config: &PipelineConfig,
) -> Result<Vec<(SentenceId, Selection)>, PipelineError> {
    if !store.is_frozen() {
        return Err(StoreError::NotFrozen.into());
    }
    document
        .records
        .iter()
        .filter_map(|record| match &record.parse {
            Parse::Multiple(forest) => Some((record.id, forest)),
            _ => None,
        })
        .map(|(id, forest)| {
            let disambiguator = Disambiguator::new(store, lexicon, config.similar_discount)?
                .scoped(Scope::Sentence(id));
            disambiguator
                .select_parse(forest)
                .map(|selection| (id, selection))
                .map_err(|source| PipelineError::Model {
                    sentence: id,
                    source,
                })
        })
        .collect()
}

/// Completes every incomplete parse against a frozen store, in parallel.
/// Results come back in document order.
pub fn complete_document(
    document: &Document,
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    config: &PipelineConfig,
) -> Result<Vec<SentenceResult>, PipelineError> {
    if !store.is_frozen() {
        return Err(StoreError::NotFrozen.into());
    }
    let incomplete: Vec<(SentenceId, &crate::model::PartialParse)> = document
        .records
        .iter()
        .filter_map(|record| match &record.parse {
            Parse::Incomplete(partial) => Some((record.id, partial)),
            _ => None,
        })
        .collect();
    incomplete
        .par_iter()
        .map(|&(id, partial)| {
            let completer = Completer::new(store, lexicon, config.completion())?
                .scoped(Scope::Sentence(id));
            let result = completer
                .complete(partial)
                .map_err(|source| PipelineError::Complete {
                    sentence: id,
                    source,
                })?;
            Ok(SentenceResult { id, result })
        })
        .collect()
}

/// Replaces resolved records with their chosen or completed trees.
pub fn apply_results(
    document: &Document,
    selections: &[(SentenceId, Selection)],
    results: &[SentenceResult],
) -> Document {
    let chosen = |id| selections.iter().find(|(s, _)| *s == id).map(|(_, sel)| sel.chosen);
    let completed = |id| results.iter().find(|r| r.id == id).map(|r| &r.result);
    let records = document
        .records
        .iter()
        .map(|record| {
            let parse = match &record.parse {
                Parse::Multiple(forest) => match chosen(record.id) {
                    Some(i) => Parse::Complete(forest.candidates()[i].clone()),
                    None => record.parse.clone(),
                },
                Parse::Incomplete(_) => match completed(record.id).map(|r| &r.output) {
                    Some(CompletionOutput::Tree(tree)) => Parse::Complete(tree.clone()),
                    Some(CompletionOutput::Partial(partial)) => Parse::Incomplete(partial.clone()),
                    None => record.parse.clone(),
                },
                Parse::Complete(_) => record.parse.clone(),
            };
            SentenceRecord::new(record.id, parse)
        })
        .collect();
    Document {
        records,
        metadata: document.metadata.clone(),
    }
}

/// One line per decision, in document order.
pub fn audit_lines(
    selections: &[(SentenceId, Selection)],
    results: &[SentenceResult],
) -> Vec<String> {
    let mut lines = Vec::new();
    for (id, selection) in selections {
        let totals: Vec<String> = selection.scores.iter().map(|s| s.total.to_string()).collect();
        lines.push(format!(
            "sentence {} select chosen={} decided={} totals=[{}]",
            id,
            selection.chosen,
            selection.decided,
            totals.join(", ")
        ));
    }
    for SentenceResult { id, result } in results {
        lines.extend(result.actions.iter().map(|a| format!("sentence {} {}", id, a)));
        lines.extend(result.joins.iter().map(|j| format!("sentence {} {}", id, j)));
        lines.push(format!("sentence {} status={}", id, status_name(result)));
    }
    lines
}

fn status_name(result: &CompletionResult) -> &'static str {
    use crate::complete::CompletionStatus::*;
    match result.status {
        Unified if result.used_fallback() => "unified-with-fallback",
        Unified => "unified",
        PartiallyJoined => "partially-joined",
        Unchanged => "unchanged",
    }
}

pub struct PipelineOutput {
    pub document: Document,
    pub store: DiscourseStore,
    pub selections: Vec<(SentenceId, Selection)>,
    pub results: ResultsFile,
    pub report: CompletionReport,
    pub audit: Vec<String>,
}

pub fn run_pipeline(
    document: &Document,
    lexicon: &SynonymLexicon,
    config: &PipelineConfig,
) -> Result<PipelineOutput, PipelineError> {
    let BuiltStore { store, selections } = build_store(document, lexicon, config)?;
    let results = complete_document(document, &store, lexicon, config)?;
    let sentences = document.records.len() as u64;
    let report = completion_report(sentences, results.iter().map(|r| &r.result));
    let audit = audit_lines(&selections, &results);
    let output = apply_results(document, &selections, &results);
    Ok(PipelineOutput {
        document: output,
        store,
        selections,
        results: ResultsFile { sentences, results },
        report,
        audit,
    })
}
