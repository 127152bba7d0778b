//! Synonym rings.
//!
//! File format: one ring per line, whitespace-separated lemmas, `#` starts
//! a comment line. A lemma may belong to several rings.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read synonym lexicon {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    rings: Vec<BTreeSet<String>>,
    index: BTreeMap<String, BTreeSet<String>>,
}

impl SynonymLexicon {
    pub fn new() -> Self {
        SynonymLexicon::default()
    }

    pub fn from_rings<I, R, S>(rings: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut lexicon = SynonymLexicon::new();
        for ring in rings {
            lexicon.add_ring(ring);
        }
        lexicon
    }

    pub fn add_ring<R, S>(&mut self, ring: R)
    where
        R: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let ring: BTreeSet<String> = ring
            .into_iter()
            .map(|s| s.as_ref().trim().to_lowercase())
            .filter(|s| !s.is_empty())
            .collect();
        if ring.len() < 2 {
            return;
        }
        for lemma in &ring {
            let synonyms = self.index.entry(lemma.clone()).or_default();
            synonyms.extend(ring.iter().filter(|other| *other != lemma).cloned());
        }
        self.rings.push(ring);
    }

    pub fn parse(text: &str) -> Self {
        SynonymLexicon::from_rings(
            text.lines()
                .map(str::trim)
                .filter(|line| !line.is_empty() && !line.starts_with('#'))
                .map(|line| line.split_whitespace().collect::<Vec<_>>()),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(SynonymLexicon::parse(&text))
    }

    /// Synonyms of `lemma`, excluding the lemma itself, in lexical order.
    pub fn synonyms<'a>(&'a self, lemma: &str) -> impl Iterator<Item = &'a str> + 'a {
        self.index
            .get(lemma)
            .into_iter()
            .flatten()
            .map(String::as_str)
    }

    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        a != b && self.index.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn rings(&self) -> &[BTreeSet<String>] {
        &self.rings
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }
}
