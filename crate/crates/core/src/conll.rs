//! Conversion from ten-column dependency files (CoNLL-U layout).
//!
//! Sentences are separated by blank lines. A `# sent_id = N` comment with a
//! numeric id sets the sentence id; otherwise ids count up from the previous
//! one. Consecutive blocks sharing a `sent_id` become candidates of one
//! multiple parse. A block with several roots whose subtrees cover
//! contiguous spans becomes an incomplete parse.
//!
//! Multiword-token ranges (`1-2`) and empty nodes (`1.1`) are skipped.

use thiserror::Error;

use crate::model::{
    DependencyEdge, DependencyTree, Document, ModelError, Parse, ParseForest, ParseFragment,
    PartialParse, PosTag, RelationLabel, SentenceId, SentenceRecord, Token, TokenIndex,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("line {line}: expected 10 tab-separated columns, found {found}")]
    Columns { line: usize, found: usize },
    #[error("line {line}: bad {column} value {value:?}")]
    Field {
        line: usize,
        column: &'static str,
        value: String,
    },
    #[error("sentence {sentence}: {source}")]
    Invalid {
        sentence: SentenceId,
        source: ModelError,
    },
    #[error("sentence {sentence}: root subtrees are not contiguous")]
    Discontiguous { sentence: SentenceId },
    #[error("sentence {sentence} follows {previous}")]
    Order {
        sentence: SentenceId,
        previous: SentenceId,
    },
    #[error("input has no sentences")]
    Empty,
}

/// Maps a universal part-of-speech tag onto the toolkit's tag set.
pub fn map_upos(upos: &str) -> PosTag {
    match upos {
        "NOUN" | "PROPN" => PosTag::N,
        "PRON" => PosTag::PN,
        "VERB" | "AUX" => PosTag::V,
        "ADJ" => PosTag::AJ,
        "ADV" => PosTag::AV,
        "CCONJ" | "SCONJ" => PosTag::CJ,
        "ADP" => PosTag::PP,
        "DET" => PosTag::DET,
        "PUNCT" => PosTag::PUNC,
        _ => PosTag::OTHER,
    }
}

struct Row {
    index: TokenIndex,
    form: String,
    lemma: String,
    upos: String,
    head: TokenIndex,
    deprel: String,
    ambiguous: bool,
}

struct Block {
    sent_id: Option<SentenceId>,
    rows: Vec<Row>,
}

fn parse_row(line: usize, text: &str) -> Result<Option<Row>, ConvertError> {
    let cols: Vec<&str> = text.split('\t').collect();
    if cols.len() != 10 {
        return Err(ConvertError::Columns {
            line,
            found: cols.len(),
        });
    }
    if cols[0].contains('-') || cols[0].contains('.') {
        return Ok(None);
    }
    let number = |column: &'static str, value: &str| {
        value.parse::<TokenIndex>().map_err(|_| ConvertError::Field {
            line,
            column,
            value: value.to_string(),
        })
    };
    let lemma = if cols[2] == "_" || cols[2].is_empty() {
        cols[1]
    } else {
        cols[2]
    };
    Ok(Some(Row {
        index: number("ID", cols[0])?,
        form: cols[1].to_string(),
        lemma: lemma.to_string(),
        upos: cols[3].to_string(),
        head: number("HEAD", cols[6])?,
        deprel: cols[7].to_string(),
        ambiguous: cols[9].split('|').any(|f| f == "Ambiguous=Yes"),
    }))
}

fn read_blocks(text: &str) -> Result<Vec<Block>, ConvertError> {
    let mut blocks = Vec::new();
    let mut current = Block {
        sent_id: None,
        rows: Vec::new(),
    };
    let flush = |current: &mut Block, blocks: &mut Vec<Block>| {
        if !current.rows.is_empty() {
            blocks.push(std::mem::replace(
                current,
                Block {
                    sent_id: None,
                    rows: Vec::new(),
                },
            ));
        } else {
            current.sent_id = None;
        }
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_end();
        if trimmed.trim().is_empty() {
            flush(&mut current, &mut blocks);
        } else if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sent_id" {
                    current.sent_id = value.trim().parse().ok();
                }
            }
        } else if let Some(row) = parse_row(line, trimmed)? {
            current.rows.push(row);
        }
    }
    flush(&mut current, &mut blocks);
    Ok(blocks)
}

fn relation(rows: &[Row], row: &Row) -> RelationLabel {
    let base = row.deprel.split(':').next().unwrap_or("");
    match base {
        "nsubj" | "csubj" => RelationLabel::SUBJ,
        "obj" => RelationLabel::OBJ,
        "iobj" => RelationLabel::RECIPIENT,
        "obl" | "nmod" => rows
            .iter()
            .find(|r| r.head == row.index && r.deprel == "case")
            .map(|case| RelationLabel::prep(&case.lemma.to_lowercase()))
            .unwrap_or(RelationLabel::DIRECT),
        _ => RelationLabel::DIRECT,
    }
}

fn block_tree(sentence: SentenceId, rows: &[Row]) -> Result<DependencyTree, ConvertError> {
    let invalid = |source| ConvertError::Invalid { sentence, source };
    let tokens = rows
        .iter()
        .map(|r| Token::new(r.index, r.form.as_str(), &r.lemma, map_upos(&r.upos)))
        .collect::<Result<Vec<_>, ModelError>>()
        .map_err(invalid)?;
    let edges = rows
        .iter()
        .map(|r| {
            let mut edge = DependencyEdge::new(r.index, r.head, relation(rows, r));
            edge.ambiguous = r.ambiguous;
            edge
        })
        .collect();
    Ok(DependencyTree::new(tokens, edges))
}

/// Splits a multi-rooted tree into one fragment per root.
fn split_fragments(sentence: SentenceId, tree: DependencyTree) -> Result<PartialParse, ConvertError> {
    let roots: Vec<TokenIndex> = tree
        .edges()
        .iter()
        .filter(|e| e.head == 0)
        .map(|e| e.dependent)
        .collect();
    let mut fragments = Vec::with_capacity(roots.len());
    for root in roots {
        let tokens: Vec<Token> = tree
            .tokens()
            .iter()
            .filter(|t| tree.dominates(root, t.index()))
            .cloned()
            .collect();
        let contiguous = tokens.windows(2).all(|w| w[1].index() == w[0].index() + 1);
        if !contiguous {
            return Err(ConvertError::Discontiguous { sentence });
        }
        let edges = tokens
            .iter()
            .filter_map(|t| tree.edge(t.index()).cloned())
            .collect();
        let fragment = ParseFragment::new(DependencyTree::new(tokens, edges))
            .map_err(|source| ConvertError::Invalid { sentence, source })?;
        fragments.push(fragment);
    }
    fragments.sort_by_key(|f| f.span().start);
    PartialParse::new(fragments).map_err(|source| ConvertError::Invalid { sentence, source })
}

fn block_parse(sentence: SentenceId, rows: &[Row]) -> Result<Parse, ConvertError> {
    let tree = block_tree(sentence, rows)?;
    let roots = tree.edges().iter().filter(|e| e.head == 0).count();
    let parse = if roots > 1 {
        // structural checks other than the root count still apply
        let mut probe = tree.clone();
        let first_root = probe.root();
        for edge in tree.edges().iter().filter(|e| e.head == 0 && e.dependent != first_root) {
            probe.replace_edge(DependencyEdge::new(edge.dependent, first_root, RelationLabel::DIRECT));
        }
        probe
            .ensure_valid()
            .map_err(|source| ConvertError::Invalid { sentence, source })?;
        Parse::Incomplete(split_fragments(sentence, tree)?)
    } else {
        Parse::Complete(tree)
    };
    parse
        .validate()
        .map_err(|source| ConvertError::Invalid { sentence, source })?;
    Ok(parse)
}

/// Converts column-format text into a document.
pub fn convert(text: &str) -> Result<Document, ConvertError> {
    let blocks = read_blocks(text)?;
    let mut grouped: Vec<(SentenceId, Vec<&Block>)> = Vec::new();
    for block in &blocks {
        let previous = grouped.last().map(|(id, _)| *id);
        match (block.sent_id, previous) {
            (Some(id), Some(prev)) if id == prev => grouped.last_mut().unwrap().1.push(block),
            (Some(id), Some(prev)) if id < prev => {
                return Err(ConvertError::Order {
                    sentence: id,
                    previous: prev,
                })
            }
            (Some(id), _) => grouped.push((id, vec![block])),
            (None, prev) => grouped.push((prev.map_or(1, |p| p + 1), vec![block])),
        }
    }
    if grouped.is_empty() {
        return Err(ConvertError::Empty);
    }
    let mut records = Vec::with_capacity(grouped.len());
    for (id, group) in grouped {
        let parse = if group.len() == 1 {
            block_parse(id, &group[0].rows)?
        } else {
            let candidates = group
                .iter()
                .map(|b| block_tree(id, &b.rows))
                .collect::<Result<Vec<_>, _>>()?;
            let forest = ParseForest::new(candidates)
                .map_err(|source| ConvertError::Invalid { sentence: id, source })?;
            Parse::Multiple(forest)
        };
        records.push(SentenceRecord::new(id, parse));
    }
    Document::new(records).map_err(|source| ConvertError::Invalid { sentence: 0, source })
}
