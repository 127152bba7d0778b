//! Three-level lookup of modifier → modifiee patterns in the discourse.
//!
//! A pattern is supported at one of these levels, best first:
//!
//! * `Identical`: same lemmas, parts of speech and relation;
//! * `Synonym`: one side's lemma replaced by a synonym, the rest identical;
//! * `PosBackoff`: one side reduced to its part of speech, the rest identical;
//! * `None`.
//!
//! Within a level the entry with the highest preference value wins, ties
//! broken by key order.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::SynonymLexicon;
use crate::model::{Collocation, Lexeme, RelationLabel};
use crate::score::Score;
use crate::store::{CollocationEntry, DiscourseStore, Scope, Side, StoreError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MatchLevel {
    None,
    PosBackoff,
    Synonym,
    Identical,
}

impl fmt::Display for MatchLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchLevel::None => "none",
            MatchLevel::PosBackoff => "pos-backoff",
            MatchLevel::Synonym => "synonym",
            MatchLevel::Identical => "identical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchResult {
    level: MatchLevel,
    entry: Option<CollocationEntry>,
}

impl MatchResult {
    pub fn none() -> Self {
        MatchResult {
            level: MatchLevel::None,
            entry: None,
        }
    }

    fn found(level: MatchLevel, entry: CollocationEntry) -> Self {
        debug_assert!(level != MatchLevel::None);
        MatchResult {
            level,
            entry: Some(entry),
        }
    }

    pub fn level(&self) -> MatchLevel {
        self.level
    }

    pub fn entry(&self) -> Option<&CollocationEntry> {
        self.entry.as_ref()
    }

    /// Preference value of the matched entry, zero without a match.
    pub fn score(&self) -> Score {
        self.entry
            .as_ref()
            .map_or(Score::ZERO, CollocationEntry::preference_value)
    }

    pub fn is_match(&self) -> bool {
        self.level != MatchLevel::None
    }
}

/// Keeps the better of two candidate entries at the same level.
fn better(current: Option<CollocationEntry>, candidate: CollocationEntry) -> CollocationEntry {
    match current {
        Some(current) if crate::store::entry_order(&current, &candidate).is_le() => current,
        _ => candidate,
    }
}

/// Lookup context over a frozen store and a lexicon.
#[derive(Clone, Copy)]
pub struct Matcher<'a> {
    store: &'a DiscourseStore,
    lexicon: &'a SynonymLexicon,
    scope: Scope,
}

impl<'a> Matcher<'a> {
    pub fn new(store: &'a DiscourseStore, lexicon: &'a SynonymLexicon) -> Result<Self, StoreError> {
        if !store.is_frozen() {
            return Err(StoreError::NotFrozen);
        }
        Ok(Matcher {
            store,
            lexicon,
            scope: Scope::Document,
        })
    }

    /// Reads a store that is still being built. Used for the in-order
    /// selection pass, where each forest sees the forests chosen before it.
    pub(crate) fn while_building(store: &'a DiscourseStore, lexicon: &'a SynonymLexicon) -> Self {
        Matcher {
            store,
            lexicon,
            scope: Scope::Document,
        }
    }

    /// Restricts evidence to what may be used on behalf of `scope`.
    pub fn scoped(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    pub fn store(&self) -> &'a DiscourseStore {
        self.store
    }

    pub fn lexicon(&self) -> &'a SynonymLexicon {
        self.lexicon
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    fn synonym_keys<'q>(&'q self, query: &'q Collocation) -> impl Iterator<Item = Collocation> + 'q {
        let modifier_side = self.lexicon.synonyms(&query.modifier.lemma).map(move |s| {
            Collocation::new(
                Lexeme::new(s, query.modifier.pos),
                query.relation.clone(),
                query.modifiee.clone(),
            )
        });
        let modifiee_side = self.lexicon.synonyms(&query.modifiee.lemma).map(move |s| {
            Collocation::new(
                query.modifier.clone(),
                query.relation.clone(),
                Lexeme::new(s, query.modifiee.pos),
            )
        });
        modifier_side.chain(modifiee_side)
    }

    /// Keys that agree with `query` on one side's lemma and on everything
    /// else except the other side's lemma.
    fn backoff_keys<'q>(&'q self, query: &'q Collocation) -> impl Iterator<Item = &'a Collocation> + 'q {
        let same_modifier = self
            .store
            .keys_for(&query.modifier.lemma, Side::Modifier)
            .filter(move |k| k.modifier.pos == query.modifier.pos);
        let same_modifiee = self
            .store
            .keys_for(&query.modifiee.lemma, Side::Modifiee)
            .filter(move |k| k.modifiee.pos == query.modifiee.pos);
        same_modifier
            .chain(same_modifiee)
            .filter(move |k| {
                k.relation == query.relation
                    && k.modifier.pos == query.modifier.pos
                    && k.modifiee.pos == query.modifiee.pos
                    && *k != query
            })
    }

    pub fn match_collocation(&self, query: &Collocation) -> MatchResult {
        if let Some(entry) = self.store.entry_unchecked(query, self.scope) {
            return MatchResult::found(MatchLevel::Identical, entry);
        }

        let mut best = None;
        for key in self.synonym_keys(query) {
            if let Some(entry) = self.store.entry_unchecked(&key, self.scope) {
                best = Some(better(best, entry));
            }
        }
        if let Some(entry) = best {
            return MatchResult::found(MatchLevel::Synonym, entry);
        }

        for key in self.backoff_keys(query) {
            if let Some(entry) = self.store.entry_unchecked(key, self.scope) {
                best = Some(better(best, entry));
            }
        }
        match best {
            Some(entry) => MatchResult::found(MatchLevel::PosBackoff, entry),
            None => MatchResult::none(),
        }
    }

    /// Same level as [`Matcher::match_collocation`] without building the result.
    pub fn match_level_only(&self, query: &Collocation) -> MatchLevel {
        let present = |key: &Collocation| self.store.has_in_scope(key, self.scope);
        if present(query) {
            MatchLevel::Identical
        } else if self.synonym_keys(query).any(|k| present(&k)) {
            MatchLevel::Synonym
        } else if self.backoff_keys(query).any(present) {
            MatchLevel::PosBackoff
        } else {
            MatchLevel::None
        }
    }

    /// Relations under which `modifier` → `modifiee` could match at any level.
    pub fn candidate_relations(&self, modifier: &Lexeme, modifiee: &Lexeme) -> BTreeSet<RelationLabel> {
        let modifiers = std::iter::once(modifier.lemma.as_str())
            .chain(self.lexicon.synonyms(&modifier.lemma))
            .flat_map(|lemma| self.store.keys_for(lemma, Side::Modifier));
        let modifiees = std::iter::once(modifiee.lemma.as_str())
            .chain(self.lexicon.synonyms(&modifiee.lemma))
            .flat_map(|lemma| self.store.keys_for(lemma, Side::Modifiee));
        modifiers
            .chain(modifiees)
            .filter(|k| k.modifier.pos == modifier.pos && k.modifiee.pos == modifiee.pos)
            .map(|k| k.relation.clone())
            .collect()
    }

    /// The best-supported relation for attaching `modifier` under
    /// `modifiee`, ordered by (level, score, relation). `None` when nothing
    /// matches at any level.
    pub fn best_attachment(
        &self,
        modifier: &Lexeme,
        modifiee: &Lexeme,
    ) -> Option<(RelationLabel, MatchResult)> {
        let mut best: Option<(RelationLabel, MatchResult)> = None;
        for relation in self.candidate_relations(modifier, modifiee) {
            let query = Collocation::new(modifier.clone(), relation.clone(), modifiee.clone());
            let result = self.match_collocation(&query);
            if !result.is_match() {
                continue;
            }
            let improves = match &best {
                None => true,
                Some((_, b)) => (result.level(), result.score()) > (b.level(), b.score()),
            };
            if improves {
                best = Some((relation, result));
            }
        }
        best
    }
}

/// Free-function form of [`Matcher::match_collocation`] over the whole store.
pub fn match_collocation(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    modifier: &Lexeme,
    relation: &RelationLabel,
    modifiee: &Lexeme,
) -> Result<MatchResult, StoreError> {
    let query = Collocation::new(modifier.clone(), relation.clone(), modifiee.clone());
    Ok(Matcher::new(store, lexicon)?.match_collocation(&query))
}

pub fn match_level_only(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    query: &Collocation,
) -> Result<MatchLevel, StoreError> {
    Ok(Matcher::new(store, lexicon)?.match_level_only(query))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DependencyEdge, DependencyTree, PosTag, Token};

    fn two_word_tree(
        modifier: (&str, PosTag),
        relation: RelationLabel,
        modifiee: (&str, PosTag),
        value_tenths_ambiguous: bool,
    ) -> DependencyTree {
        let tokens = vec![
            Token::new(1, modifier.0, modifier.0, modifier.1).unwrap(),
            Token::new(2, modifiee.0, modifiee.0, modifiee.1).unwrap(),
        ];
        let mut edge = DependencyEdge::new(1, 2, relation);
        edge.ambiguous = value_tenths_ambiguous;
        DependencyTree::validated(tokens, vec![edge, DependencyEdge::new(2, 0, RelationLabel::DIRECT)])
            .unwrap()
    }

    fn lx(lemma: &str, pos: PosTag) -> Lexeme {
        Lexeme::new(lemma, pos)
    }

    fn store_of(trees: &[DependencyTree]) -> DiscourseStore {
        let mut store = DiscourseStore::new();
        for (i, t) in trees.iter().enumerate() {
            store.ingest_tree(i as u32 + 1, t).unwrap();
        }
        store.frozen()
    }

    #[test]
    fn identical_match() {
        let store = store_of(&[two_word_tree(
            ("side", PosTag::N),
            RelationLabel::prep("from"),
            ("take", PosTag::V),
            false,
        )]);
        let lexicon = SynonymLexicon::new();
        let result = match_collocation(
            &store,
            &lexicon,
            &lx("side", PosTag::N),
            &RelationLabel::prep("from"),
            &lx("take", PosTag::V),
        )
        .unwrap();
        assert_eq!(result.level(), MatchLevel::Identical);
        assert_eq!(result.score(), Score::ONE);
    }

    #[test]
    fn synonym_match_on_modifiee_side() {
        let store = store_of(&[two_word_tree(
            ("desktop", PosTag::N),
            RelationLabel::prep("on"),
            ("use", PosTag::V),
            false,
        )]);
        let lexicon = SynonymLexicon::from_rings([["use", "utilize"]]);
        let query = Collocation::new(
            lx("desktop", PosTag::N),
            RelationLabel::prep("on"),
            lx("utilize", PosTag::V),
        );
        let matcher = Matcher::new(&store, &lexicon).unwrap();
        assert_eq!(matcher.match_collocation(&query).level(), MatchLevel::Synonym);
        assert_eq!(matcher.match_level_only(&query), MatchLevel::Synonym);
    }

    #[test]
    fn both_sides_substituted_is_not_a_synonym_match() {
        let store = store_of(&[two_word_tree(
            ("desktop", PosTag::N),
            RelationLabel::prep("on"),
            ("use", PosTag::V),
            false,
        )]);
        let lexicon = SynonymLexicon::from_rings([["use", "utilize"], ["desktop", "workspace"]]);
        let query = Collocation::new(
            lx("workspace", PosTag::N),
            RelationLabel::prep("on"),
            lx("utilize", PosTag::V),
        );
        let matcher = Matcher::new(&store, &lexicon).unwrap();
        assert_eq!(matcher.match_level_only(&query), MatchLevel::None);
    }

    #[test]
    fn pos_backoff_needs_relation_and_one_lemma() {
        let store = store_of(&[two_word_tree(
            ("folder", PosTag::N),
            RelationLabel::prep("on"),
            ("open", PosTag::V),
            false,
        )]);
        let lexicon = SynonymLexicon::new();
        let matcher = Matcher::new(&store, &lexicon).unwrap();
        let wildcard_modifiee = Collocation::new(
            lx("folder", PosTag::N),
            RelationLabel::prep("on"),
            lx("close", PosTag::V),
        );
        assert_eq!(matcher.match_level_only(&wildcard_modifiee), MatchLevel::PosBackoff);
        let wrong_relation = Collocation::new(
            lx("folder", PosTag::N),
            RelationLabel::prep("in"),
            lx("close", PosTag::V),
        );
        assert_eq!(matcher.match_level_only(&wrong_relation), MatchLevel::None);
        let wrong_pos = Collocation::new(
            lx("folder", PosTag::N),
            RelationLabel::prep("on"),
            lx("close", PosTag::N),
        );
        assert_eq!(matcher.match_level_only(&wrong_pos), MatchLevel::None);
    }

    #[test]
    fn empty_store_matches_nothing() {
        let store = DiscourseStore::new().frozen();
        let lexicon = SynonymLexicon::new();
        let result = match_collocation(
            &store,
            &lexicon,
            &lx("a", PosTag::N),
            &RelationLabel::OBJ,
            &lx("b", PosTag::V),
        )
        .unwrap();
        assert_eq!(result, MatchResult::none());
        assert_eq!(result.score(), Score::ZERO);
    }

    #[test]
    fn unfrozen_store_is_rejected() {
        let store = DiscourseStore::new();
        let lexicon = SynonymLexicon::new();
        assert!(matches!(Matcher::new(&store, &lexicon), Err(StoreError::NotFrozen)));
    }

    #[test]
    fn best_attachment_prefers_level_then_score() {
        let store = store_of(&[
            two_word_tree(("side", PosTag::N), RelationLabel::prep("from"), ("take", PosTag::V), false),
            two_word_tree(("side", PosTag::N), RelationLabel::OBJ, ("take", PosTag::V), true),
            two_word_tree(("edge", PosTag::N), RelationLabel::SUBJ, ("take", PosTag::V), false),
            two_word_tree(("edge", PosTag::N), RelationLabel::SUBJ, ("take", PosTag::V), false),
        ]);
        let lexicon = SynonymLexicon::new();
        let matcher = Matcher::new(&store, &lexicon).unwrap();
        let (relation, result) = matcher
            .best_attachment(&lx("side", PosTag::N), &lx("take", PosTag::V))
            .unwrap();
        assert_eq!(relation, RelationLabel::prep("from"));
        assert_eq!(result.level(), MatchLevel::Identical);
        // SUBJ only matches by POS backoff despite its higher value
        assert_eq!(
            matcher.candidate_relations(&lx("side", PosTag::N), &lx("take", PosTag::V)).len(),
            3
        );
    }
}
