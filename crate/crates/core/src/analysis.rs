//! Corpus statistics: lemma repetition by part of speech, how often
//! ambiguous attachments find matching collocations within a discourse
//! window, and completion outcome counts.
//!
//! Every percentage is computed from exact counts and rendered half-up to
//! one decimal.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complete::{CompletionResult, CompletionStatus};
use crate::lexicon::SynonymLexicon;
use crate::matcher::{MatchLevel, Matcher};
use crate::model::{
    projective_unchecked, validate_tree, Collocation, DependencyEdge, DependencyTree, Document,
    Parse, PosTag, TokenIndex,
};
use crate::score::Score;
use crate::store::{DiscourseStore, Scope};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("window of {window} sentences exceeds the document's {sentences}")]
    WindowTooLarge { window: usize, sentences: usize },
    #[error("window size must be positive")]
    EmptyWindow,
    #[error("samples per window must be positive")]
    NoSamples,
}

/// Renders tenths of a percent, e.g. `563` as `56.3`.
pub fn format_tenths(tenths: u64) -> String {
    format!("{}.{}", tenths / 10, tenths % 10)
}

fn percent(part: u64, whole: u64) -> String {
    format_tenths(Score::percent_tenths(part, whole))
}

/// Parts of speech reported as content words, in report order.
pub const CONTENT_TAGS: [PosTag; 5] = [PosTag::N, PosTag::V, PosTag::AJ, PosTag::AV, PosTag::PN];

fn tag_label(pos: PosTag) -> &'static str {
    match pos {
        PosTag::N => "Noun",
        PosTag::V => "Verb",
        PosTag::AJ => "Adjective",
        PosTag::AV => "Adverb",
        PosTag::PN => "Pronoun",
        _ => "Other",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionRow {
    /// `None` for the total row.
    pub pos: Option<PosTag>,
    pub occurrences: u64,
    /// Occurrences whose lemma occurs at least twice in the document.
    pub in_lemmas_2plus: u64,
    /// Occurrences whose lemma occurs at least five times in the document.
    pub in_lemmas_5plus: u64,
    pub distinct_lemmas: u64,
    pub two_or_more_pct: String,
    pub five_or_more_pct: String,
    /// Share of all content words; absent for the total row.
    pub proportion_pct: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepetitionReport {
    pub sentences: u64,
    pub rows: Vec<RepetitionRow>,
    pub total: RepetitionRow,
}

/// Lemma repetition over the complete parses of a document.
///
/// A lemma "occurs k times" when it has k content-word instances anywhere in
/// the document's complete parses, whatever their tags. Percentages are
/// shares of occurrences.
pub fn repetition_stats(document: &Document) -> Result<RepetitionReport, AnalysisError> {
    if document.records.is_empty() {
        return Err(AnalysisError::EmptyDocument);
    }
    let mut sentences = 0;
    let mut lemma_counts: BTreeMap<&str, u64> = BTreeMap::new();
    let mut by_tag: BTreeMap<PosTag, BTreeMap<&str, u64>> = BTreeMap::new();
    for record in &document.records {
        let Parse::Complete(tree) = &record.parse else {
            continue;
        };
        sentences += 1;
        for token in tree.tokens().iter().filter(|t| CONTENT_TAGS.contains(&t.pos())) {
            *lemma_counts.entry(token.lemma()).or_default() += 1;
            *by_tag
                .entry(token.pos())
                .or_default()
                .entry(token.lemma())
                .or_default() += 1;
        }
    }
    let content_total: u64 = lemma_counts.values().sum();

    let row = |pos: Option<PosTag>, lemmas: &BTreeMap<&str, u64>| {
        let occurrences: u64 = lemmas.values().sum();
        let with = |k: u64| -> u64 {
            lemmas
                .iter()
                .filter(|(lemma, _)| lemma_counts[*lemma] >= k)
                .map(|(_, n)| n)
                .sum()
        };
        let (two, five) = (with(2), with(5));
        RepetitionRow {
            pos,
            occurrences,
            in_lemmas_2plus: two,
            in_lemmas_5plus: five,
            distinct_lemmas: lemmas.len() as u64,
            two_or_more_pct: percent(two, occurrences),
            five_or_more_pct: percent(five, occurrences),
            proportion_pct: pos.map(|_| percent(occurrences, content_total)),
        }
    };

    let empty = BTreeMap::new();
    let rows = CONTENT_TAGS
        .iter()
        .map(|pos| row(Some(*pos), by_tag.get(pos).unwrap_or(&empty)))
        .collect();
    let total = row(None, &lemma_counts);
    Ok(RepetitionReport {
        sentences,
        rows,
        total,
    })
}

impl fmt::Display for RepetitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>12} {:>12} {:>12} {:>12}",
            "POS", "2+ times %", "5+ times %", "occurrences", "share %"
        )?;
        for row in self.rows.iter().chain(std::iter::once(&self.total)) {
            writeln!(
                f,
                "{:<10} {:>12} {:>12} {:>12} {:>12}",
                row.pos.map_or("Total", tag_label),
                row.two_or_more_pct,
                row.five_or_more_pct,
                row.occurrences,
                row.proportion_pct.as_deref().unwrap_or("---"),
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRate {
    pub window: usize,
    /// Number of sample areas examined.
    pub areas: usize,
    /// Areas that contained at least one ambiguous phrase.
    pub areas_with_phrases: usize,
    pub phrases: u64,
    pub identical_rate: Score,
    pub similar_rate: Score,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRateReport {
    pub sentences: usize,
    pub rows: Vec<WindowRate>,
}

impl fmt::Display for WindowRateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>8} {:>6} {:>8} {:>12} {:>22}",
            "window", "areas", "phrases", "identical %", "identical/similar %"
        )?;
        for row in &self.rows {
            writeln!(
                f,
                "{:>8} {:>6} {:>8} {:>12} {:>22}",
                row.window,
                row.areas,
                row.phrases,
                format_tenths(row.identical_rate.percent_tenths_of()),
                format_tenths(row.similar_rate.percent_tenths_of()),
            )?;
        }
        Ok(())
    }
}

/// Start offsets (0-based record positions) of the sample areas for one
/// window size: a fixed stride of ⌈(n − w)/(samples − 1)⌉ from the start.
pub fn sample_starts(sentences: usize, window: usize, samples: usize) -> Vec<usize> {
    if window >= sentences || samples <= 1 {
        return vec![0];
    }
    let span = sentences - window;
    let stride = span.div_ceil(samples - 1).max(1);
    (0..samples)
        .map(|i| i * stride)
        .take_while(|start| *start <= span)
        .collect()
}

/// Heads `dependent` could attach to without breaking the tree (or its
/// projectivity, if it is projective), the current head included.
pub fn alternative_heads(tree: &DependencyTree, dependent: TokenIndex) -> Vec<TokenIndex> {
    let Some(edge) = tree.edge(dependent) else {
        return vec![];
    };
    let projective = projective_unchecked(tree);
    tree.tokens()
        .iter()
        .filter(|h| h.index() != dependent && h.pos().is_collocational())
        .filter(|h| !tree.dominates(dependent, h.index()))
        .map(|h| h.index())
        .filter(|&head| {
            if head == edge.head {
                return true;
            }
            let mut moved = tree.clone();
            moved.replace_edge(DependencyEdge::new(dependent, head, edge.relation.clone()));
            validate_tree(&moved).is_empty() && (!projective || projective_unchecked(&moved))
        })
        .collect()
}

/// Candidate collocations of every ambiguous phrase in a tree: one list per
/// ambiguous edge, holding the edge's pattern at each alternative head.
pub fn ambiguous_phrases(tree: &DependencyTree) -> Vec<Vec<Collocation>> {
    tree.edges()
        .iter()
        .filter(|e| e.ambiguous && e.head != 0)
        .filter_map(|edge| {
            let modifier = tree.token(edge.dependent)?;
            if !modifier.pos().is_collocational() {
                return None;
            }
            let candidates: Vec<Collocation> = alternative_heads(tree, edge.dependent)
                .into_iter()
                .filter_map(|h| tree.token(h))
                .map(|h| Collocation::new(modifier.lexeme(), edge.relation.clone(), h.lexeme()))
                .collect();
            (!candidates.is_empty()).then_some(candidates)
        })
        .collect()
}

/// Per-area (found identical, found identical-or-similar, phrases).
fn area_counts(
    document: &Document,
    start: usize,
    window: usize,
    lexicon: &SynonymLexicon,
) -> (u64, u64, u64) {
    let records = &document.records[start..start + window];
    let mut store = DiscourseStore::new();
    for record in records {
        if let Parse::Complete(tree) = &record.parse {
            store
                .ingest_tree(record.id, tree)
                .expect("document records are valid and unique");
        }
    }
    store.freeze();
    let matcher = Matcher::new(&store, lexicon).expect("frozen");

    let (mut identical, mut similar, mut phrases) = (0, 0, 0);
    for record in records {
        let Parse::Complete(tree) = &record.parse else {
            continue;
        };
        let scoped = matcher.scoped(Scope::Sentence(record.id));
        for candidates in ambiguous_phrases(tree) {
            phrases += 1;
            let best = candidates
                .iter()
                .map(|c| scoped.match_level_only(c))
                .max()
                .unwrap_or(MatchLevel::None);
            if best == MatchLevel::Identical {
                identical += 1;
            }
            if best >= MatchLevel::Synonym {
                similar += 1;
            }
        }
    }
    (identical, similar, phrases)
}

/// Rate of ambiguous phrases for which some candidate collocation is
/// repeated elsewhere in a discourse of each window size.
///
/// Each rate is the mean over sample areas that contain ambiguous phrases.
/// Areas are laid out by record position, not sentence id.
pub fn window_rates(
    document: &Document,
    lexicon: &SynonymLexicon,
    windows: &[usize],
    samples_per_window: usize,
) -> Result<WindowRateReport, AnalysisError> {
    let n = document.records.len();
    if n == 0 {
        return Err(AnalysisError::EmptyDocument);
    }
    if samples_per_window == 0 {
        return Err(AnalysisError::NoSamples);
    }
    let mut rows = Vec::with_capacity(windows.len());
    for &window in windows {
        if window == 0 {
            return Err(AnalysisError::EmptyWindow);
        }
        if window > n {
            return Err(AnalysisError::WindowTooLarge {
                window,
                sentences: n,
            });
        }
        let starts = sample_starts(n, window, samples_per_window);
        let counts: Vec<(u64, u64, u64)> = starts
            .iter()
            .map(|&start| area_counts(document, start, window, lexicon))
            .collect();
        let with_phrases: Vec<&(u64, u64, u64)> = counts.iter().filter(|c| c.2 > 0).collect();
        let mean = |pick: fn(&(u64, u64, u64)) -> u64| -> Score {
            if with_phrases.is_empty() {
                return Score::ZERO;
            }
            let sum: Score = with_phrases
                .iter()
                .map(|c| Score::new(pick(c) as i64, c.2 as i64))
                .sum();
            sum * Score::new(1, with_phrases.len() as i64)
        };
        rows.push(WindowRate {
            window,
            areas: starts.len(),
            areas_with_phrases: with_phrases.len(),
            phrases: counts.iter().map(|c| c.2).sum(),
            identical_rate: mean(|c| c.0),
            similar_rate: mean(|c| c.1),
        });
    }
    Ok(WindowRateReport { sentences: n, rows })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionReport {
    pub sentences: u64,
    pub incomplete: u64,
    pub unified: u64,
    pub partially_joined: u64,
    pub unchanged: u64,
}

#[derive(Serialize)]
struct CompletionReportRecord<'a> {
    #[serde(flatten)]
    counts: &'a CompletionReport,
    unified_pct: String,
    partially_joined_pct: String,
    unchanged_pct: String,
}

impl CompletionReport {
    pub fn from_counts(sentences: u64, unified: u64, partially_joined: u64, unchanged: u64) -> Self {
        CompletionReport {
            sentences,
            incomplete: unified + partially_joined + unchanged,
            unified,
            partially_joined,
            unchanged,
        }
    }

    pub fn unified_pct(&self) -> String {
        percent(self.unified, self.incomplete)
    }

    pub fn partially_joined_pct(&self) -> String {
        percent(self.partially_joined, self.incomplete)
    }

    pub fn unchanged_pct(&self) -> String {
        percent(self.unchanged, self.incomplete)
    }

    /// Structured record including the rendered percentages.
    pub fn to_json(&self) -> String {
        let record = CompletionReportRecord {
            counts: self,
            unified_pct: self.unified_pct(),
            partially_joined_pct: self.partially_joined_pct(),
            unchanged_pct: self.unchanged_pct(),
        };
        let mut out = serde_json::to_string_pretty(&record).expect("report serialization");
        out.push('\n');
        out
    }
}

impl fmt::Display for CompletionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let line = |out: &mut String, label: &str, n: u64, pct: Option<String>| {
            let pct = pct.map(|p| format!(" ({}%)", p)).unwrap_or_default();
            let _ = writeln!(out, "{:<36} {:>6}{}", label, n, pct);
        };
        line(&mut out, "Number of sentences in discourse", self.sentences, None);
        line(&mut out, "Incomplete parses", self.incomplete, None);
        line(&mut out, "Unified into a single parse", self.unified, Some(self.unified_pct()));
        line(
            &mut out,
            "Partially joined or restructured",
            self.partially_joined,
            Some(self.partially_joined_pct()),
        );
        line(&mut out, "Not changed", self.unchanged, Some(self.unchanged_pct()));
        f.write_str(&out)
    }
}

/// Counts completion outcomes. A unification that relied on fallback
/// heuristics alone counts as partially joined.
pub fn completion_report<'a, I>(sentences: u64, results: I) -> CompletionReport
where
    I: IntoIterator<Item = &'a CompletionResult>,
{
    let mut report = CompletionReport {
        sentences,
        ..CompletionReport::default()
    };
    for result in results {
        report.incomplete += 1;
        match result.status {
            CompletionStatus::Unified if result.discourse_join_count() > 0 => report.unified += 1,
            CompletionStatus::Unified | CompletionStatus::PartiallyJoined => {
                report.partially_joined += 1
            }
            CompletionStatus::Unchanged => report.unchanged += 1,
        }
    }
    report
}
