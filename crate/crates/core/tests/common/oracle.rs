//! Brute-force reference implementations and random generators.

use std::cmp::Reverse;
use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use discourse_core::complete::JoinDirection;
use discourse_core::model::{
    Collocation, DependencyEdge, DependencyTree, Lexeme, PosTag, RelationLabel, Token,
};
use discourse_core::store::DiscourseStore;
use discourse_core::{MatchLevel, Score, SynonymLexicon};

pub const LEMMAS: [&str; 6] = ["cut", "file", "line", "open", "view", "set"];
pub const TAGS: [PosTag; 4] = [PosTag::N, PosTag::V, PosTag::AJ, PosTag::PP];

pub fn relations() -> Vec<RelationLabel> {
    vec![
        RelationLabel::SUBJ,
        RelationLabel::OBJ,
        RelationLabel::DIRECT,
        RelationLabel::prep("of"),
        RelationLabel::prep("on"),
    ]
}

/// Small-vocabulary tokens so that random trees share collocations.
pub fn random_tokens<R: Rng>(rng: &mut R, first: u32, n: usize) -> Vec<Token> {
    (0..n)
        .map(|i| {
            let lemma = LEMMAS[rng.gen_range(0..LEMMAS.len())];
            let pos = TAGS[rng.gen_range(0..TAGS.len())];
            Token::new(first + i as u32, lemma, lemma, pos).unwrap()
        })
        .collect()
}

fn random_relation<R: Rng>(rng: &mut R) -> RelationLabel {
    relations().choose(rng).unwrap().clone()
}

/// A valid tree with arbitrary (possibly crossing) edges.
pub fn random_tree<R: Rng>(rng: &mut R, first: u32, n: usize) -> DependencyTree {
    let tokens = random_tokens(rng, first, n);
    let mut order: Vec<u32> = (first..first + n as u32).collect();
    order.shuffle(rng);
    let mut edges = vec![DependencyEdge::new(order[0], 0, RelationLabel::DIRECT)];
    for i in 1..order.len() {
        let head = order[rng.gen_range(0..i)];
        let mut edge = DependencyEdge::new(order[i], head, random_relation(rng));
        edge.ambiguous = rng.gen_bool(0.3);
        edges.push(edge);
    }
    DependencyTree::new(tokens, edges)
}

fn projective_edges<R: Rng>(
    rng: &mut R,
    lo: u32,
    hi: u32,
    head: u32,
    edges: &mut Vec<DependencyEdge>,
) {
    // split [lo, hi] into consecutive segments, each a subtree under `head`
    let mut start = lo;
    while start <= hi {
        let end = rng.gen_range(start..=hi);
        let root = rng.gen_range(start..=end);
        let mut edge = DependencyEdge::new(root, head, random_relation(rng));
        edge.ambiguous = rng.gen_bool(0.3);
        edges.push(edge);
        if root > start {
            projective_edges(rng, start, root - 1, root, edges);
        }
        if root < end {
            projective_edges(rng, root + 1, end, root, edges);
        }
        start = end + 1;
    }
}

/// A valid projective tree over `first..first + n`.
pub fn random_projective_tree<R: Rng>(rng: &mut R, first: u32, n: usize) -> DependencyTree {
    let tokens = random_tokens(rng, first, n);
    let last = first + n as u32 - 1;
    let root = rng.gen_range(first..=last);
    let mut edges = vec![DependencyEdge::new(root, 0, RelationLabel::DIRECT)];
    if root > first {
        projective_edges(rng, first, root - 1, root, &mut edges);
    }
    if root < last {
        projective_edges(rng, root + 1, last, root, &mut edges);
    }
    DependencyTree::new(tokens, edges)
}

/// Whether a head assignment over `first..first + n` forms a single tree:
/// exactly one root, every head in range, no node revisited on its way up.
pub fn oracle_is_tree(first: u32, heads: &[u32]) -> bool {
    let n = heads.len() as u32;
    let in_range = |h: u32| h >= first && h < first + n;
    if heads.iter().filter(|&&h| h == 0).count() != 1 {
        return false;
    }
    for (i, &h) in heads.iter().enumerate() {
        let node = first + i as u32;
        if h != 0 && (!in_range(h) || h == node) {
            return false;
        }
    }
    for start in 0..heads.len() {
        let mut seen = BTreeSet::new();
        let mut current = start;
        loop {
            if !seen.insert(current) {
                return false;
            }
            let h = heads[current];
            if h == 0 {
                break;
            }
            current = (h - first) as usize;
        }
    }
    true
}

/// No two arcs cross, counting the root arc from just before the first
/// token.
pub fn oracle_no_crossing(tree: &DependencyTree) -> bool {
    let origin = tree.first_index() - 1;
    let arcs: Vec<(u32, u32)> = tree
        .edges()
        .iter()
        .map(|e| {
            let h = if e.head == 0 { origin } else { e.head };
            (h.min(e.dependent), h.max(e.dependent))
        })
        .collect();
    for (i, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}

/// Every node's yield is a contiguous range.
pub fn oracle_contiguous_yields(tree: &DependencyTree) -> bool {
    tree.tokens().iter().all(|t| {
        let below: Vec<u32> = tree
            .tokens()
            .iter()
            .map(|u| u.index())
            .filter(|&u| {
                let mut current = u;
                loop {
                    if current == t.index() {
                        return true;
                    }
                    match tree.head(current) {
                        Some(0) | None => return false,
                        Some(h) => current = h,
                    }
                }
            })
            .collect();
        below.windows(2).all(|w| w[1] == w[0] + 1)
    })
}

/// Every (key, value) in a frozen store, unscoped.
pub fn store_entries(store: &DiscourseStore) -> Vec<(Collocation, Score)> {
    store
        .entries()
        .map(|e| (e.key().clone(), e.preference_value()))
        .collect()
}

/// Level and score of a query by scanning every entry.
pub fn oracle_match(
    entries: &[(Collocation, Score)],
    lexicon: &SynonymLexicon,
    query: &Collocation,
) -> (MatchLevel, Score) {
    let same_shape = |k: &Collocation| {
        k.relation == query.relation
            && k.modifier.pos == query.modifier.pos
            && k.modifiee.pos == query.modifiee.pos
    };
    let level_of = |k: &Collocation| {
        if k == query {
            MatchLevel::Identical
        } else if !same_shape(k) {
            MatchLevel::None
        } else if (k.modifiee == query.modifiee
            && lexicon.are_synonyms(&k.modifier.lemma, &query.modifier.lemma))
            || (k.modifier == query.modifier
                && lexicon.are_synonyms(&k.modifiee.lemma, &query.modifiee.lemma))
        {
            MatchLevel::Synonym
        } else if k.modifier.lemma == query.modifier.lemma || k.modifiee.lemma == query.modifiee.lemma {
            MatchLevel::PosBackoff
        } else {
            MatchLevel::None
        }
    };
    entries
        .iter()
        .map(|(k, v)| (level_of(k), *v))
        .filter(|(l, _)| *l != MatchLevel::None)
        .max()
        .unwrap_or((MatchLevel::None, Score::ZERO))
}

/// Best relation for an attachment by scanning every relation in the store.
pub fn oracle_best_attachment(
    entries: &[(Collocation, Score)],
    lexicon: &SynonymLexicon,
    modifier: &Lexeme,
    modifiee: &Lexeme,
) -> Option<(RelationLabel, MatchLevel, Score)> {
    let relations: BTreeSet<RelationLabel> = entries.iter().map(|(k, _)| k.relation.clone()).collect();
    relations
        .into_iter()
        .map(|r| {
            let query = Collocation::new(modifier.clone(), r.clone(), modifiee.clone());
            let (level, score) = oracle_match(entries, lexicon, &query);
            (r, level, score)
        })
        .filter(|(_, level, _)| *level != MatchLevel::None)
        // highest (level, score); among equals the smallest relation
        .min_by(|a, b| (Reverse((a.1, a.2)), &a.0).cmp(&(Reverse((b.1, b.2)), &b.0)))
}

/// An attachment chosen by exhaustive enumeration.
#[derive(Debug, PartialEq, Eq)]
pub struct OracleJoin {
    pub direction: JoinDirection,
    pub head: u32,
    pub dependent: u32,
    pub relation: RelationLabel,
    pub level: MatchLevel,
    pub score: Score,
}

fn merged(
    left: &DependencyTree,
    right: &DependencyTree,
    dependent: u32,
    head: u32,
) -> DependencyTree {
    let tokens = left.tokens().iter().chain(right.tokens()).cloned().collect();
    let edges = left
        .edges()
        .iter()
        .chain(right.edges())
        .map(|e| {
            if e.dependent == dependent {
                DependencyEdge::new(dependent, head, RelationLabel::DIRECT)
            } else {
                e.clone()
            }
        })
        .collect();
    DependencyTree::new(tokens, edges)
}

/// Tries every node of each tree as the head for the other tree's root,
/// keeps attachments whose result is projective, and returns the best under
/// (level desc, score desc, distance asc, right-under-left first).
pub fn oracle_join(
    entries: &[(Collocation, Score)],
    lexicon: &SynonymLexicon,
    left: &DependencyTree,
    right: &DependencyTree,
) -> Option<OracleJoin> {
    let mut options = Vec::new();
    let sides = [
        (JoinDirection::RightUnderLeft, left, right),
        (JoinDirection::LeftUnderRight, right, left),
    ];
    for (direction, heads, rooted) in sides {
        let dependent = rooted.root();
        let modifier = rooted.token(dependent).unwrap();
        for head in heads.tokens() {
            let joined = merged(left, right, dependent, head.index());
            if !(oracle_no_crossing(&joined) && oracle_contiguous_yields(&joined)) {
                continue;
            }
            if matches!(modifier.pos(), PosTag::PUNC | PosTag::OTHER)
                || matches!(head.pos(), PosTag::PUNC | PosTag::OTHER)
            {
                continue;
            }
            if let Some((relation, level, score)) =
                oracle_best_attachment(entries, lexicon, &modifier.lexeme(), &head.lexeme())
            {
                options.push(OracleJoin {
                    direction,
                    head: head.index(),
                    dependent,
                    relation,
                    level,
                    score,
                });
            }
        }
    }
    options.into_iter().min_by_key(|o| {
        (
            Reverse(o.level),
            Reverse(o.score),
            o.head.abs_diff(o.dependent),
            o.direction,
        )
    })
}
