//! Discourse information: per-lemma POS profiles and scored collocations
//! accumulated from complete parses.
//!
//! A store is built by a single writer (`ingest_*`), then frozen. Only a
//! frozen store answers queries. Queries may be scoped to a sentence, in
//! which case that sentence's own instances are excluded and, if a window is
//! configured, only sentences within the window are consulted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Collocation, DependencyEdge, DependencyTree, Lexeme, ModelError, ParseForest, PosTag,
    RelationLabel, SentenceId, TokenIndex,
};
use crate::score::Score;

pub type CollocationKey = Collocation;

const SNAPSHOT_FORMAT: &str = "discourse-store";
const SNAPSHOT_VERSION: u32 = 1;

/// One occurrence of a lemma in the discourse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(SentenceId, TokenIndex)", into = "(SentenceId, TokenIndex)")]
pub struct InstanceRef {
    pub sentence: SentenceId,
    pub token: TokenIndex,
}

impl InstanceRef {
    pub fn new(sentence: SentenceId, token: TokenIndex) -> Self {
        InstanceRef { sentence, token }
    }
}

impl From<(SentenceId, TokenIndex)> for InstanceRef {
    fn from((sentence, token): (SentenceId, TokenIndex)) -> Self {
        InstanceRef { sentence, token }
    }
}

impl From<InstanceRef> for (SentenceId, TokenIndex) {
    fn from(r: InstanceRef) -> Self {
        (r.sentence, r.token)
    }
}

fn insert_sorted(list: &mut Vec<InstanceRef>, instance: InstanceRef) {
    let pos = list.partition_point(|i| *i < instance);
    list.insert(pos, instance);
}

/// How often, and where, a lemma was seen in each part of speech.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PosProfile {
    instances: BTreeMap<PosTag, Vec<InstanceRef>>,
}

impl PosProfile {
    pub fn count(&self, pos: PosTag) -> usize {
        self.instances.get(&pos).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> BTreeMap<PosTag, usize> {
        self.instances
            .iter()
            .map(|(pos, list)| (*pos, list.len()))
            .collect()
    }

    pub fn instances(&self, pos: PosTag) -> &[InstanceRef] {
        self.instances.get(&pos).map_or(&[], Vec::as_slice)
    }

    pub fn total(&self) -> usize {
        self.instances.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// The most frequent tag, if it is strictly more frequent than all others.
    pub fn dominant(&self) -> Option<(PosTag, usize)> {
        let mut best: Option<(PosTag, usize)> = None;
        let mut tied = false;
        for (pos, list) in &self.instances {
            match best {
                Some((_, n)) if list.len() < n => {}
                Some((_, n)) if list.len() == n => tied = true,
                _ => {
                    best = Some((*pos, list.len()));
                    tied = false;
                }
            }
        }
        best.filter(|(_, n)| *n > 0 && !tied)
    }

    fn add(&mut self, pos: PosTag, instance: InstanceRef) {
        insert_sorted(self.instances.entry(pos).or_default(), instance);
    }

    fn filtered(&self, keep: impl Fn(&InstanceRef) -> bool) -> PosProfile {
        let instances = self
            .instances
            .iter()
            .map(|(pos, list)| (*pos, list.iter().copied().filter(|i| keep(i)).collect::<Vec<_>>()))
            .filter(|(_, list)| !list.is_empty())
            .collect();
        PosProfile { instances }
    }
}

/// Evidence for one collocation key.
///
/// The preference value is derived from the instance lists, so it always
/// equals `1.0·|definite| + 0.1·|ambiguous|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollocationEntry {
    key: CollocationKey,
    definite: Vec<InstanceRef>,
    ambiguous: Vec<InstanceRef>,
}

impl CollocationEntry {
    fn new(key: CollocationKey) -> Self {
        CollocationEntry {
            key,
            definite: Vec::new(),
            ambiguous: Vec::new(),
        }
    }

    pub fn key(&self) -> &CollocationKey {
        &self.key
    }

    pub fn definite_instances(&self) -> &[InstanceRef] {
        &self.definite
    }

    pub fn ambiguous_instances(&self) -> &[InstanceRef] {
        &self.ambiguous
    }

    pub fn preference_value(&self) -> Score {
        Score::preference(self.definite.len(), self.ambiguous.len())
    }

    pub fn instance_count(&self) -> usize {
        self.definite.len() + self.ambiguous.len()
    }

    fn filtered(&self, keep: impl Fn(&InstanceRef) -> bool) -> Option<CollocationEntry> {
        let definite: Vec<_> = self.definite.iter().copied().filter(|i| keep(i)).collect();
        let ambiguous: Vec<_> = self.ambiguous.iter().copied().filter(|i| keep(i)).collect();
        (!definite.is_empty() || !ambiguous.is_empty()).then(|| CollocationEntry {
            key: self.key.clone(),
            definite,
            ambiguous,
        })
    }
}

/// Orders entries by preference value (descending), then key.
pub fn entry_order(a: &CollocationEntry, b: &CollocationEntry) -> std::cmp::Ordering {
    b.preference_value()
        .cmp(&a.preference_value())
        .then_with(|| a.key.cmp(&b.key))
}

/// Which side of a collocation a queried lemma occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Modifier,
    Modifiee,
}

/// On whose behalf a query is made.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Scope {
    /// The whole store.
    #[default]
    Document,
    /// Everything but the sentence itself, limited to the window if one is set.
    Sentence(SentenceId),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("store frozen")]
    Frozen,
    #[error("unfrozen store")]
    NotFrozen,
    #[error("sentence {0} was already ingested")]
    DuplicateSentence(SentenceId),
    #[error("sentence {0}: {1}")]
    InvalidTree(SentenceId, ModelError),
    #[error("sentence {sentence}: candidate {chosen} out of range ({len} candidates)")]
    CandidateOutOfRange {
        sentence: SentenceId,
        chosen: usize,
        len: usize,
    },
    #[error("invalid store snapshot: {0}")]
    Snapshot(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiscourseStore {
    window: Option<u32>,
    frozen: bool,
    sentences: BTreeSet<SentenceId>,
    pos_index: BTreeMap<String, PosProfile>,
    entries: BTreeMap<CollocationKey, CollocationEntry>,
    /// modifiee lemma → keys of entries describing its modifiers
    modifier_index: BTreeMap<String, BTreeSet<CollocationKey>>,
    /// modifier lemma → keys of entries describing its modifiees
    modifiee_index: BTreeMap<String, BTreeSet<CollocationKey>>,
}

impl DiscourseStore {
    pub fn new() -> Self {
        DiscourseStore::default()
    }

    pub fn with_window(mut self, window: Option<u32>) -> Self {
        self.window = window;
        self
    }

    /// The window only filters queries, so it may change after freezing.
    pub fn set_window(&mut self, window: Option<u32>) {
        self.window = window;
    }

    pub fn window(&self) -> Option<u32> {
        self.window
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn frozen(mut self) -> Self {
        self.frozen = true;
        self
    }

    pub fn sentences(&self) -> &BTreeSet<SentenceId> {
        &self.sentences
    }

    fn begin_ingest(&self, sentence: SentenceId) -> Result<(), StoreError> {
        if self.frozen {
            return Err(StoreError::Frozen);
        }
        if self.sentences.contains(&sentence) {
            return Err(StoreError::DuplicateSentence(sentence));
        }
        Ok(())
    }

    /// Adds a complete parse. Edges flagged ambiguous score 0.1, the rest 1.0.
    pub fn ingest_tree(
        &mut self,
        sentence: SentenceId,
        tree: &DependencyTree,
    ) -> Result<(), StoreError> {
        self.begin_ingest(sentence)?;
        tree.ensure_valid()
            .map_err(|e| StoreError::InvalidTree(sentence, e))?;
        self.add_tree(sentence, tree, |edge| edge.ambiguous);
        Ok(())
    }

    /// Adds the chosen candidate of a forest. Edges not shared by every
    /// other candidate are stored as ambiguous whatever their flag says.
    pub fn ingest_selected_parse(
        &mut self,
        sentence: SentenceId,
        forest: &ParseForest,
        chosen: usize,
    ) -> Result<(), StoreError> {
        self.begin_ingest(sentence)?;
        let candidates = forest.candidates();
        let tree = candidates
            .get(chosen)
            .ok_or(StoreError::CandidateOutOfRange {
                sentence,
                chosen,
                len: candidates.len(),
            })?;
        tree.ensure_valid()
            .map_err(|e| StoreError::InvalidTree(sentence, e))?;
        let others: Vec<BTreeSet<EdgeSignature>> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != chosen)
            .map(|(_, t)| edge_signatures(t))
            .collect();
        self.add_tree(sentence, tree, |edge| {
            let signature = EdgeSignature::of(tree, edge);
            edge.ambiguous || others.iter().any(|set| !set.contains(&signature))
        });
        Ok(())
    }

    fn add_tree(
        &mut self,
        sentence: SentenceId,
        tree: &DependencyTree,
        is_ambiguous: impl Fn(&DependencyEdge) -> bool,
    ) {
        self.sentences.insert(sentence);
        for token in tree.tokens() {
            self.pos_index
                .entry(token.lemma().to_owned())
                .or_default()
                .add(token.pos(), InstanceRef::new(sentence, token.index()));
        }
        for edge in tree.edges() {
            let Some(key) = edge_collocation(tree, edge) else {
                continue;
            };
            let instance = InstanceRef::new(sentence, edge.dependent);
            let ambiguous = is_ambiguous(edge);
            self.modifier_index
                .entry(key.modifiee.lemma.clone())
                .or_default()
                .insert(key.clone());
            self.modifiee_index
                .entry(key.modifier.lemma.clone())
                .or_default()
                .insert(key.clone());
            let entry = self
                .entries
                .entry(key.clone())
                .or_insert_with(|| CollocationEntry::new(key));
            if ambiguous {
                insert_sorted(&mut entry.ambiguous, instance);
            } else {
                insert_sorted(&mut entry.definite, instance);
            }
        }
    }

    fn ensure_frozen(&self) -> Result<(), StoreError> {
        if self.frozen {
            Ok(())
        } else {
            Err(StoreError::NotFrozen)
        }
    }

    pub(crate) fn in_scope(&self, scope: Scope, instance: &InstanceRef) -> bool {
        match scope {
            Scope::Document => true,
            Scope::Sentence(s) => {
                instance.sentence != s
                    && self
                        .window
                        .is_none_or(|w| instance.sentence.abs_diff(s) <= w)
            }
        }
    }

    pub fn pos_profile(&self, lemma: &str, scope: Scope) -> Result<PosProfile, StoreError> {
        self.ensure_frozen()?;
        Ok(self.profile_unchecked(lemma, scope))
    }

    pub(crate) fn profile_unchecked(&self, lemma: &str, scope: Scope) -> PosProfile {
        match self.pos_index.get(&lemma.to_lowercase()) {
            None => PosProfile::default(),
            Some(profile) if scope == Scope::Document => profile.clone(),
            Some(profile) => profile.filtered(|i| self.in_scope(scope, i)),
        }
    }

    /// Entries in which `lemma` occupies `side`, best first.
    pub fn collocations_for(
        &self,
        lemma: &str,
        side: Side,
        scope: Scope,
    ) -> Result<Vec<CollocationEntry>, StoreError> {
        self.ensure_frozen()?;
        let mut entries: Vec<CollocationEntry> = self
            .keys_for(&lemma.to_lowercase(), side)
            .filter_map(|key| self.entry_unchecked(key, scope))
            .collect();
        entries.sort_by(entry_order);
        Ok(entries)
    }

    /// The entry for an exact key, restricted to `scope`.
    pub fn entry(
        &self,
        key: &CollocationKey,
        scope: Scope,
    ) -> Result<Option<CollocationEntry>, StoreError> {
        self.ensure_frozen()?;
        Ok(self.entry_unchecked(key, scope))
    }

    pub(crate) fn entry_unchecked(
        &self,
        key: &CollocationKey,
        scope: Scope,
    ) -> Option<CollocationEntry> {
        let entry = self.entries.get(key)?;
        if scope == Scope::Document {
            Some(entry.clone())
        } else {
            entry.filtered(|i| self.in_scope(scope, i))
        }
    }

    pub(crate) fn has_in_scope(&self, key: &CollocationKey, scope: Scope) -> bool {
        self.entries.get(key).is_some_and(|e| {
            scope == Scope::Document
                || e.definite
                    .iter()
                    .chain(&e.ambiguous)
                    .any(|i| self.in_scope(scope, i))
        })
    }

    pub(crate) fn keys_for<'a>(
        &'a self,
        lemma: &str,
        side: Side,
    ) -> impl Iterator<Item = &'a CollocationKey> + 'a {
        let index = match side {
            Side::Modifier => &self.modifiee_index,
            Side::Modifiee => &self.modifier_index,
        };
        index.get(lemma).into_iter().flatten()
    }

    /// Every entry, unscoped, in key order.
    pub fn entries(&self) -> impl Iterator<Item = &CollocationEntry> {
        self.entries.values()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.pos_index.keys().map(String::as_str)
    }

    /// Both index views, for consistency checks.
    pub fn index_views(&self, lemma: &str) -> (Vec<&CollocationKey>, Vec<&CollocationKey>) {
        (
            self.keys_for(lemma, Side::Modifiee).collect(),
            self.keys_for(lemma, Side::Modifier).collect(),
        )
    }

    /// Deterministic snapshot: byte-equal snapshots imply equal query results.
    pub fn to_snapshot(&self) -> String {
        let snapshot = Snapshot {
            format: SNAPSHOT_FORMAT.to_owned(),
            version: SNAPSHOT_VERSION,
            frozen: self.frozen,
            window: self.window,
            sentences: self.sentences.iter().copied().collect(),
            pos: self.pos_index.clone(),
            collocations: self
                .entries
                .values()
                .map(|e| SnapshotEntry {
                    modifier: e.key.modifier.clone(),
                    relation: e.key.relation.clone(),
                    modifiee: e.key.modifiee.clone(),
                    definite: e.definite.clone(),
                    ambiguous: e.ambiguous.clone(),
                    preference: e.preference_value(),
                })
                .collect(),
        };
        let mut out = serde_json::to_string_pretty(&snapshot).expect("snapshot serialization");
        out.push('\n');
        out
    }

    pub fn from_snapshot(text: &str) -> Result<DiscourseStore, StoreError> {
        let snapshot: Snapshot =
            serde_json::from_str(text).map_err(|e| StoreError::Snapshot(e.to_string()))?;
        if snapshot.format != SNAPSHOT_FORMAT {
            return Err(StoreError::Snapshot(format!(
                "unexpected format `{}`",
                snapshot.format
            )));
        }
        if snapshot.version != SNAPSHOT_VERSION {
            return Err(StoreError::Snapshot(format!(
                "unsupported version {}",
                snapshot.version
            )));
        }
        let mut store = DiscourseStore {
            window: snapshot.window,
            frozen: snapshot.frozen,
            sentences: snapshot.sentences.into_iter().collect(),
            pos_index: snapshot.pos,
            ..DiscourseStore::default()
        };
        for e in snapshot.collocations {
            let key = Collocation::new(e.modifier, e.relation, e.modifiee);
            if !key.modifier.pos.is_collocational() || !key.modifiee.pos.is_collocational() {
                return Err(StoreError::Snapshot(format!("non-content endpoint in {}", key)));
            }
            let entry = CollocationEntry {
                key: key.clone(),
                definite: e.definite,
                ambiguous: e.ambiguous,
            };
            if entry.preference_value() != e.preference {
                return Err(StoreError::Snapshot(format!(
                    "preference value {} of {} does not match its instances",
                    e.preference, key
                )));
            }
            store
                .modifier_index
                .entry(key.modifiee.lemma.clone())
                .or_default()
                .insert(key.clone());
            store
                .modifiee_index
                .entry(key.modifier.lemma.clone())
                .or_default()
                .insert(key.clone());
            if store.entries.insert(key.clone(), entry).is_some() {
                return Err(StoreError::Snapshot(format!("duplicate entry {}", key)));
            }
        }
        Ok(store)
    }
}

/// The collocation an edge contributes, if both endpoints are content tokens.
pub fn edge_collocation(tree: &DependencyTree, edge: &DependencyEdge) -> Option<Collocation> {
    if edge.head == 0 {
        return None;
    }
    let modifier = tree.token(edge.dependent)?;
    let modifiee = tree.token(edge.head)?;
    if !modifier.pos().is_collocational() || !modifiee.pos().is_collocational() {
        return None;
    }
    Some(Collocation::new(
        modifier.lexeme(),
        edge.relation.clone(),
        modifiee.lexeme(),
    ))
}

/// Identity of an edge across candidates of one forest.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct EdgeSignature {
    dependent: TokenIndex,
    head: TokenIndex,
    relation: RelationLabel,
    dependent_pos: PosTag,
    head_pos: Option<PosTag>,
}

impl EdgeSignature {
    fn of(tree: &DependencyTree, edge: &DependencyEdge) -> Self {
        EdgeSignature {
            dependent: edge.dependent,
            head: edge.head,
            relation: edge.relation.clone(),
            dependent_pos: tree.token(edge.dependent).map_or(PosTag::OTHER, |t| t.pos()),
            head_pos: tree.token(edge.head).map(|t| t.pos()),
        }
    }
}

fn edge_signatures(tree: &DependencyTree) -> BTreeSet<EdgeSignature> {
    tree.edges().iter().map(|e| EdgeSignature::of(tree, e)).collect()
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    format: String,
    version: u32,
    frozen: bool,
    window: Option<u32>,
    sentences: Vec<SentenceId>,
    pos: BTreeMap<String, PosProfile>,
    collocations: Vec<SnapshotEntry>,
}

#[derive(Serialize, Deserialize)]
struct SnapshotEntry {
    modifier: Lexeme,
    relation: RelationLabel,
    modifiee: Lexeme,
    definite: Vec<InstanceRef>,
    ambiguous: Vec<InstanceRef>,
    preference: Score,
}
