//! Completion of incomplete parses.
//!
//! Completion runs in two steps. Each fragment is first restructured so
//! that its parts of speech and attachments agree with the discourse; the
//! fragments are then joined left to right wherever the root of one can
//! modify a node of its neighbour with discourse support. Fragments that
//! remain separate may be joined by fallback heuristics.
//!
//! Joins only ever attach a root to a node on the facing spine of the
//! neighbouring tree (the right spine of the left tree, the left spine of
//! the right tree), which keeps the result projective when both inputs are.

use std::cmp::Reverse;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::SynonymLexicon;
use crate::matcher::{MatchLevel, MatchResult, Matcher};
use crate::model::{
    check_coverage, projective_unchecked, validate_tree, Collocation, DependencyEdge,
    DependencyTree, ModelError, ParseFragment, PartialParse, PosTag, RelationLabel, Span,
    TokenIndex,
};
use crate::score::Score;
use crate::store::{DiscourseStore, Scope, StoreError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetagThresholds {
    /// Minimum number of occurrences of a lemma before it may be retagged.
    pub min_count: usize,
    /// Minimum share of the dominant tag among those occurrences.
    pub pos_ratio: Score,
}

impl Default for RetagThresholds {
    fn default() -> Self {
        RetagThresholds {
            min_count: 3,
            pos_ratio: Score::new(4, 5),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionConfig {
    pub thresholds: RetagThresholds,
    pub fallback: bool,
}

impl Default for CompletionConfig {
    fn default() -> Self {
        CompletionConfig {
            thresholds: RetagThresholds::default(),
            fallback: true,
        }
    }
}

/// Why a restructuring action was taken.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The lemma's part-of-speech profile in the discourse.
    Profile { pos: PosTag, count: usize, total: usize },
    /// A discourse collocation supporting the new attachment.
    Match {
        level: MatchLevel,
        collocation: Collocation,
        score: Score,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum RestructureKind {
    RetagPos {
        token: TokenIndex,
        old: PosTag,
        new: PosTag,
    },
    Reattach {
        dependent: TokenIndex,
        old_head: TokenIndex,
        new_head: TokenIndex,
        old_relation: RelationLabel,
        new_relation: RelationLabel,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestructureAction {
    #[serde(flatten)]
    pub kind: RestructureKind,
    pub evidence: Evidence,
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Profile { pos, count, total } => {
                write!(f, "profile {} {}/{}", pos, count, total)
            }
            Evidence::Match {
                level,
                collocation,
                score,
            } => write!(f, "{} {} ({})", level, collocation, score),
        }
    }
}

impl fmt::Display for RestructureAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RestructureKind::RetagPos { token, old, new } => {
                write!(f, "retag token={} {}->{}", token, old, new)?
            }
            RestructureKind::Reattach {
                dependent,
                old_head,
                new_head,
                old_relation,
                new_relation,
            } => write!(
                f,
                "reattach dep={} head={}->{} rel={}->{}",
                dependent, old_head, new_head, old_relation, new_relation
            )?,
        }
        write!(f, " evidence={}", self.evidence)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JoinDirection {
    /// The right tree's root attaches under a node of the left tree.
    RightUnderLeft,
    /// The left tree's root attaches under a node of the right tree.
    LeftUnderRight,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinDecision {
    pub direction: JoinDirection,
    /// Ordinal of the input fragment holding the new head.
    pub head_fragment: usize,
    pub attach_head: TokenIndex,
    /// Ordinal of the input fragment whose root is attached.
    pub root_fragment: usize,
    pub attached_root: TokenIndex,
    pub relation: RelationLabel,
    pub level: MatchLevel,
    pub score: Score,
    /// Key of the matched discourse entry.
    pub evidence: Option<Collocation>,
    pub heuristic: bool,
}

impl fmt::Display for JoinDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let direction = match self.direction {
            JoinDirection::RightUnderLeft => "right-under-left",
            JoinDirection::LeftUnderRight => "left-under-right",
        };
        write!(
            f,
            "join {} head={}@{} root={}@{} rel={} level={} score={}",
            direction,
            self.attach_head,
            self.head_fragment,
            self.attached_root,
            self.root_fragment,
            self.relation,
            self.level,
            self.score
        )?;
        match &self.evidence {
            Some(c) => write!(f, " evidence={}", c),
            None if self.heuristic => write!(f, " heuristic"),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletionStatus {
    Unified,
    PartiallyJoined,
    Unchanged,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CompletionOutput {
    Tree(DependencyTree),
    Partial(PartialParse),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionResult {
    pub status: CompletionStatus,
    pub output: CompletionOutput,
    pub actions: Vec<RestructureAction>,
    pub joins: Vec<JoinDecision>,
}

impl CompletionResult {
    /// Unified through discourse evidence alone, without fallback joins.
    pub fn discourse_unified(&self) -> bool {
        self.status == CompletionStatus::Unified && self.joins.iter().all(|j| !j.heuristic)
    }

    pub fn used_fallback(&self) -> bool {
        self.joins.iter().any(|j| j.heuristic)
    }

    pub fn discourse_join_count(&self) -> usize {
        self.joins.iter().filter(|j| !j.heuristic).count()
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompleteError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("fragments {left} and {right} are not adjacent")]
    NonAdjacent { left: Span, right: Span },
    #[error("fragment {0} is not projective")]
    NotProjective(Span),
}

/// A candidate attachment considered while joining two trees.
#[derive(Clone, Debug)]
struct Attachment {
    direction: JoinDirection,
    head: TokenIndex,
    dependent: TokenIndex,
    relation: RelationLabel,
    result: MatchResult,
}

impl Attachment {
    fn distance(&self) -> u32 {
        self.head.abs_diff(self.dependent)
    }

    /// Smaller is better: level, score, proximity, then direction.
    fn rank(&self) -> (Reverse<MatchLevel>, Reverse<Score>, u32, JoinDirection) {
        (
            Reverse(self.result.level()),
            Reverse(self.result.score()),
            self.distance(),
            self.direction,
        )
    }
}

/// Attaches `dependent` (a root) under `head` with `relation` in the union
/// of two adjacent trees.
fn merge_trees(
    left: &DependencyTree,
    right: &DependencyTree,
    dependent: TokenIndex,
    head: TokenIndex,
    relation: RelationLabel,
) -> DependencyTree {
    let tokens = left.tokens().iter().chain(right.tokens()).cloned().collect();
    let edges = left
        .edges()
        .iter()
        .chain(right.edges())
        .map(|e| {
            if e.dependent == dependent {
                DependencyEdge::new(dependent, head, relation.clone())
            } else {
                e.clone()
            }
        })
        .collect();
    DependencyTree::new(tokens, edges)
}

fn fragment_of(origin: &[Span], token: TokenIndex) -> usize {
    origin.iter().position(|s| s.contains(token)).unwrap_or(0)
}

/// Completion context: a frozen store, a lexicon and the sentence scope.
pub struct Completer<'a> {
    matcher: Matcher<'a>,
    config: CompletionConfig,
}

impl<'a> Completer<'a> {
    pub fn new(
        store: &'a DiscourseStore,
        lexicon: &'a SynonymLexicon,
        config: CompletionConfig,
    ) -> Result<Self, StoreError> {
        Ok(Completer {
            matcher: Matcher::new(store, lexicon)?,
            config,
        })
    }

    pub fn scoped(mut self, scope: Scope) -> Self {
        self.matcher = self.matcher.scoped(scope);
        self
    }

    pub fn matcher(&self) -> &Matcher<'a> {
        &self.matcher
    }

    fn retag_evidence(&self, lemma: &str, pos: PosTag) -> Option<(PosTag, Evidence)> {
        let profile = self
            .matcher
            .store()
            .profile_unchecked(lemma, self.matcher.scope());
        let total = profile.total();
        let thresholds = &self.config.thresholds;
        if total == 0 || total < thresholds.min_count {
            return None;
        }
        let (dominant, count) = profile.dominant()?;
        if dominant == pos || Score::new(count as i64, total as i64) < thresholds.pos_ratio {
            return None;
        }
        Some((
            dominant,
            Evidence::Profile {
                pos: dominant,
                count,
                total,
            },
        ))
    }

    /// Level of the triple an edge currently expresses, `None` when an
    /// endpoint is not a content token.
    fn current_level(&self, tree: &DependencyTree, edge: &DependencyEdge) -> Option<MatchLevel> {
        let collocation = crate::store::edge_collocation(tree, edge)?;
        Some(self.matcher.match_level_only(&collocation))
    }

    /// Attachments within `tree` for `dependent` that the discourse supports
    /// at identical or synonym level, best first.
    fn reattachment_candidates(&self, tree: &DependencyTree, dependent: TokenIndex) -> Vec<Attachment> {
        let Some(token) = tree.token(dependent) else {
            return vec![];
        };
        let modifier = token.lexeme();
        let mut candidates: Vec<Attachment> = tree
            .tokens()
            .iter()
            .filter(|h| h.index() != dependent && h.pos().is_collocational())
            .filter(|h| !tree.dominates(dependent, h.index()))
            .filter_map(|h| {
                let (relation, result) = self.matcher.best_attachment(&modifier, &h.lexeme())?;
                (result.level() >= MatchLevel::Synonym).then(|| Attachment {
                    direction: JoinDirection::RightUnderLeft,
                    head: h.index(),
                    dependent,
                    relation,
                    result,
                })
            })
            .collect();
        candidates.sort_by(|a, b| a.rank().cmp(&b.rank()).then(a.head.cmp(&b.head)));
        candidates
    }

    /// Step one: align a fragment's tags and attachments with the discourse.
    ///
    /// Tokens are retagged to a clearly dominant discourse tag. Then every
    /// edge whose triple lacks identical or synonym support is moved to the
    /// best supported head inside the fragment, provided the tree stays
    /// valid (and projective, if it was). Passes repeat until nothing moves.
    pub fn restructure_fragment(
        &self,
        fragment: &ParseFragment,
    ) -> Result<(ParseFragment, Vec<RestructureAction>), CompleteError> {
        fragment.validate()?;
        let mut tree = fragment.tree().clone();
        let projective = projective_unchecked(&tree);
        let mut actions = Vec::new();

        for token in fragment.tree().tokens() {
            if let Some((new, evidence)) = self.retag_evidence(token.lemma(), token.pos()) {
                tree.set_token(token.with_pos(new));
                actions.push(RestructureAction {
                    kind: RestructureKind::RetagPos {
                        token: token.index(),
                        old: token.pos(),
                        new,
                    },
                    evidence,
                });
            }
        }

        loop {
            let mut moved = false;
            let dependents: Vec<TokenIndex> = tree.tokens().iter().map(|t| t.index()).collect();
            for dependent in dependents {
                let edge = tree.edge(dependent).expect("valid tree").clone();
                if edge.head == 0 {
                    continue;
                }
                match self.current_level(&tree, &edge) {
                    Some(level) if level < MatchLevel::Synonym => {}
                    _ => continue,
                }
                for candidate in self.reattachment_candidates(&tree, dependent) {
                    if candidate.head == edge.head && candidate.relation == edge.relation {
                        continue;
                    }
                    let mut next = tree.clone();
                    next.replace_edge(DependencyEdge::new(
                        dependent,
                        candidate.head,
                        candidate.relation.clone(),
                    ));
                    if !validate_tree(&next).is_empty() || (projective && !projective_unchecked(&next)) {
                        log::debug!(
                            "skipping reattachment of {} under {}: breaks tree",
                            dependent,
                            candidate.head
                        );
                        continue;
                    }
                    let entry = candidate.result.entry().expect("matched entry");
                    actions.push(RestructureAction {
                        kind: RestructureKind::Reattach {
                            dependent,
                            old_head: edge.head,
                            new_head: candidate.head,
                            old_relation: edge.relation.clone(),
                            new_relation: candidate.relation.clone(),
                        },
                        evidence: Evidence::Match {
                            level: candidate.result.level(),
                            collocation: entry.key().clone(),
                            score: candidate.result.score(),
                        },
                    });
                    tree = next;
                    moved = true;
                    break;
                }
            }
            if !moved {
                break;
            }
        }

        let restructured = ParseFragment::with_span(fragment.span(), tree)?;
        Ok((restructured, actions))
    }

    fn spine_attachments(
        &self,
        heads: &DependencyTree,
        spine: Vec<TokenIndex>,
        root_tree: &DependencyTree,
        direction: JoinDirection,
    ) -> Vec<Attachment> {
        let root = root_tree.root();
        let Some(root_token) = root_tree.token(root) else {
            return vec![];
        };
        if !root_token.pos().is_collocational() {
            return vec![];
        }
        let modifier = root_token.lexeme();
        spine
            .into_iter()
            .filter_map(|head| {
                let head_token = heads.token(head)?;
                if !head_token.pos().is_collocational() {
                    return None;
                }
                let (relation, result) = self.matcher.best_attachment(&modifier, &head_token.lexeme())?;
                Some(Attachment {
                    direction,
                    head,
                    dependent: root,
                    relation,
                    result,
                })
            })
            .collect()
    }

    /// Joins two adjacent fragments through their best supported spine
    /// attachment, or returns `None` when no attachment has any support.
    ///
    /// The returned decision numbers the left fragment 0 and the right 1.
    pub fn try_join(
        &self,
        left: &ParseFragment,
        right: &ParseFragment,
    ) -> Result<Option<(ParseFragment, JoinDecision)>, CompleteError> {
        left.validate()?;
        right.validate()?;
        if left.span().end + 1 != right.span().start {
            return Err(CompleteError::NonAdjacent {
                left: left.span(),
                right: right.span(),
            });
        }
        for fragment in [left, right] {
            if !projective_unchecked(fragment.tree()) {
                return Err(CompleteError::NotProjective(fragment.span()));
            }
        }
        Ok(self.join_unchecked(left, right))
    }

    fn join_unchecked(
        &self,
        left: &ParseFragment,
        right: &ParseFragment,
    ) -> Option<(ParseFragment, JoinDecision)> {
        let (lt, rt) = (left.tree(), right.tree());
        let mut candidates =
            self.spine_attachments(lt, lt.right_spine(), rt, JoinDirection::RightUnderLeft);
        candidates.extend(self.spine_attachments(
            rt,
            rt.left_spine(),
            lt,
            JoinDirection::LeftUnderRight,
        ));
        let best = candidates
            .into_iter()
            .filter(|c| c.result.is_match())
            .min_by(|a, b| a.rank().cmp(&b.rank()))?;

        let tree = merge_trees(lt, rt, best.dependent, best.head, best.relation.clone());
        let span = Span::new(left.span().start, right.span().end);
        let merged = ParseFragment::with_span(span, tree).expect("spine joins keep trees valid");
        let (head_fragment, root_fragment) = match best.direction {
            JoinDirection::RightUnderLeft => (0, 1),
            JoinDirection::LeftUnderRight => (1, 0),
        };
        let decision = JoinDecision {
            direction: best.direction,
            head_fragment,
            attach_head: best.head,
            root_fragment,
            attached_root: best.dependent,
            relation: best.relation,
            level: best.result.level(),
            score: best.result.score(),
            evidence: best.result.entry().map(|e| e.key().clone()),
            heuristic: false,
        };
        Some((merged, decision))
    }

    /// Step two: left-to-right joining sweeps until a sweep joins nothing.
    ///
    /// Works on any sequence of adjacent fragments; `origin` gives the
    /// spans of the original fragments, used to number join decisions.
    pub fn join_fragments(
        &self,
        fragments: Vec<ParseFragment>,
        origin: &[Span],
    ) -> (Vec<ParseFragment>, Vec<JoinDecision>) {
        let mut units = fragments;
        let mut decisions = Vec::new();
        loop {
            let mut joined = false;
            let mut out = Vec::with_capacity(units.len());
            let mut rest = units.into_iter();
            let Some(mut current) = rest.next() else {
                return (out, decisions);
            };
            for next in rest {
                let joinable =
                    projective_unchecked(current.tree()) && projective_unchecked(next.tree());
                match joinable.then(|| self.join_unchecked(&current, &next)).flatten() {
                    Some((merged, mut decision)) => {
                        decision.head_fragment = fragment_of(origin, decision.attach_head);
                        decision.root_fragment = fragment_of(origin, decision.attached_root);
                        decisions.push(decision);
                        current = merged;
                        joined = true;
                    }
                    None => {
                        out.push(current);
                        current = next;
                    }
                }
            }
            out.push(current);
            units = out;
            if !joined || units.len() == 1 {
                return (units, decisions);
            }
        }
    }

    pub fn join_all(
        &self,
        partial: &PartialParse,
    ) -> (Vec<ParseFragment>, Vec<JoinDecision>) {
        let origin: Vec<Span> = partial.fragments().iter().map(ParseFragment::span).collect();
        self.join_fragments(partial.fragments().to_vec(), &origin)
    }

    /// Runs both steps and, if enabled, the fallback heuristics.
    ///
    /// Units produced by discourse joins are restructured once more, so
    /// that attachments made implausible by the join can move inside the
    /// joined unit.
    pub fn complete(&self, partial: &PartialParse) -> Result<CompletionResult, CompleteError> {
        partial.validate()?;
        let origin: Vec<Span> = partial.fragments().iter().map(ParseFragment::span).collect();

        let mut actions = Vec::new();
        let mut restructured = Vec::with_capacity(origin.len());
        for fragment in partial.fragments() {
            let (fragment, fragment_actions) = self.restructure_fragment(fragment)?;
            actions.extend(fragment_actions);
            restructured.push(fragment);
        }

        let (units, mut joins) = self.join_fragments(restructured, &origin);
        let mut settled = Vec::with_capacity(units.len());
        for unit in units {
            if origin.contains(&unit.span()) {
                settled.push(unit);
            } else {
                let (unit, unit_actions) = self.restructure_fragment(&unit)?;
                actions.extend(unit_actions);
                settled.push(unit);
            }
        }

        let output = if settled.len() == 1 {
            CompletionOutput::Tree(settled.pop().expect("one unit").into_tree())
        } else if self.config.fallback {
            let (tree, heuristic) = heuristic_units(settled, &origin);
            joins.extend(heuristic);
            CompletionOutput::Tree(tree)
        } else {
            CompletionOutput::Partial(PartialParse::new(settled)?)
        };

        let status = match &output {
            CompletionOutput::Tree(_) => CompletionStatus::Unified,
            CompletionOutput::Partial(_) if actions.is_empty() && joins.is_empty() => {
                CompletionStatus::Unchanged
            }
            CompletionOutput::Partial(_) => CompletionStatus::PartiallyJoined,
        };
        Ok(CompletionResult {
            status,
            output,
            actions,
            joins,
        })
    }
}

fn heuristic_decision(
    direction: JoinDirection,
    head: TokenIndex,
    root: TokenIndex,
    relation: RelationLabel,
    origin: &[Span],
) -> JoinDecision {
    JoinDecision {
        direction,
        head_fragment: fragment_of(origin, head),
        attach_head: head,
        root_fragment: fragment_of(origin, root),
        attached_root: root,
        relation,
        level: MatchLevel::None,
        score: Score::ZERO,
        evidence: None,
        heuristic: true,
    }
}

fn root_pos(fragment: &ParseFragment) -> PosTag {
    let tree = fragment.tree();
    tree.token(tree.root()).map_or(PosTag::OTHER, |t| t.pos())
}

fn heuristic_units(
    units: Vec<ParseFragment>,
    origin: &[Span],
) -> (DependencyTree, Vec<JoinDecision>) {
    let mut decisions = Vec::new();

    // noun-rooted unit followed by a verb-rooted one: subject of the verb
    let mut paired: Vec<ParseFragment> = Vec::with_capacity(units.len());
    let mut rest = units.into_iter().peekable();
    while let Some(unit) = rest.next() {
        let pairs = root_pos(&unit).is_nominal()
            && rest.peek().is_some_and(|next| root_pos(next) == PosTag::V);
        if !pairs {
            paired.push(unit);
            continue;
        }
        let next = rest.next().expect("peeked");
        let (noun, verb) = (unit.tree().root(), next.tree().root());
        let tree = merge_trees(unit.tree(), next.tree(), noun, verb, RelationLabel::SUBJ);
        let span = Span::new(unit.span().start, next.span().end);
        decisions.push(heuristic_decision(
            JoinDirection::LeftUnderRight,
            verb,
            noun,
            RelationLabel::SUBJ,
            origin,
        ));
        paired.push(ParseFragment::with_span(span, tree).expect("heuristic joins keep trees valid"));
    }

    // everything else: next root under the last token of the preceding unit
    let mut units = paired.into_iter();
    let first = units.next().expect("at least one unit").into_tree();
    let tree = units.fold(first, |acc, next| {
        let (head, root) = (acc.last_index(), next.tree().root());
        decisions.push(heuristic_decision(
            JoinDirection::RightUnderLeft,
            head,
            root,
            RelationLabel::DIRECT,
            origin,
        ));
        merge_trees(&acc, next.tree(), root, head, RelationLabel::DIRECT)
    });
    (tree, decisions)
}

/// Joins fragments without discourse evidence: a noun-rooted fragment
/// becomes the subject of a following verb-rooted one, and any other
/// boundary attaches the next root under the last token before it.
pub fn heuristic_join(fragments: &[ParseFragment]) -> Result<(DependencyTree, Vec<JoinDecision>), ModelError> {
    if fragments.is_empty() {
        return Err(ModelError::TooFewFragments(0));
    }
    check_coverage(fragments)?;
    let origin: Vec<Span> = fragments.iter().map(ParseFragment::span).collect();
    Ok(heuristic_units(fragments.to_vec(), &origin))
}

pub fn restructure_fragment(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    fragment: &ParseFragment,
    thresholds: RetagThresholds,
) -> Result<(ParseFragment, Vec<RestructureAction>), CompleteError> {
    let config = CompletionConfig {
        thresholds,
        ..CompletionConfig::default()
    };
    Completer::new(store, lexicon, config)?.restructure_fragment(fragment)
}

pub fn try_join(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    left: &ParseFragment,
    right: &ParseFragment,
) -> Result<Option<(ParseFragment, JoinDecision)>, CompleteError> {
    Completer::new(store, lexicon, CompletionConfig::default())?.try_join(left, right)
}

pub fn join_all(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    partial: &PartialParse,
) -> Result<(Vec<ParseFragment>, Vec<JoinDecision>), CompleteError> {
    Ok(Completer::new(store, lexicon, CompletionConfig::default())?.join_all(partial))
}

pub fn complete(
    store: &DiscourseStore,
    lexicon: &SynonymLexicon,
    partial: &PartialParse,
    config: CompletionConfig,
) -> Result<CompletionResult, CompleteError> {
    Completer::new(store, lexicon, config)?.complete(partial)
}
