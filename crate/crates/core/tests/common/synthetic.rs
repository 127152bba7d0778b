//! Generated corpus with planted collocations.
//!
//! Every sentence follows one frame: "SUBJ VERB the OBJ PREP NOUN", where
//! each verb has fixed subjects, a fixed object and a fixed prepositional
//! modifier. Some sentences carry an ambiguous "of NOUN" phrase as noise.
//! Fragmented sentences split the gold tree at frame boundaries; some also
//! mistag the prepositional noun as a verb.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use discourse_core::model::{
    DependencyEdge, DependencyTree, Document, Parse, ParseForest, ParseFragment, PartialParse,
    PosTag, RelationLabel, SentenceRecord, Token,
};

pub const VERBS: usize = 20;
const PREPS: [&str; 5] = ["on", "in", "with", "from", "by"];

pub struct Synthetic {
    pub document: Document,
    pub gold: BTreeMap<u32, DependencyTree>,
    pub fragmented: Vec<u32>,
    pub forests: Vec<u32>,
}

fn frame<R: Rng>(rng: &mut R, verb: usize) -> DependencyTree {
    let subject = format!("agent{}", verb * 2 + rng.gen_range(0..2));
    let words = [
        (subject.as_str(), PosTag::N, 2, RelationLabel::SUBJ),
        (&format!("act{}", verb) as &str, PosTag::V, 0, RelationLabel::DIRECT),
        ("the", PosTag::DET, 4, RelationLabel::DIRECT),
        (&format!("thing{}", verb) as &str, PosTag::N, 2, RelationLabel::OBJ),
        (PREPS[verb % PREPS.len()], PosTag::PP, 6, RelationLabel::DIRECT),
        (
            &format!("place{}", verb) as &str,
            PosTag::N,
            2,
            RelationLabel::prep(PREPS[verb % PREPS.len()]),
        ),
    ];
    let tokens = words
        .iter()
        .enumerate()
        .map(|(i, (lemma, pos, _, _))| Token::new(i as u32 + 1, *lemma, lemma, *pos).unwrap())
        .collect();
    let edges = words
        .iter()
        .enumerate()
        .map(|(i, (_, _, head, rel))| DependencyEdge::new(i as u32 + 1, *head, rel.clone()))
        .collect();
    DependencyTree::validated(tokens, edges).unwrap()
}

/// Appends "of NOUN", ambiguously attached to the prepositional noun.
fn with_noise<R: Rng>(rng: &mut R, tree: &DependencyTree) -> DependencyTree {
    let noun = format!("noise{}", rng.gen_range(0..30));
    let mut tokens = tree.tokens().to_vec();
    let mut edges = tree.edges().to_vec();
    tokens.push(Token::new(7, "of", "of", PosTag::PP).unwrap());
    tokens.push(Token::new(8, noun.as_str(), &noun, PosTag::N).unwrap());
    edges.push(DependencyEdge::new(7, 8, RelationLabel::DIRECT));
    let mut edge = DependencyEdge::new(8, 6, RelationLabel::prep("of"));
    edge.ambiguous = true;
    edges.push(edge);
    DependencyTree::validated(tokens, edges).unwrap()
}

/// Cut points of the six-token frame; each piece is a gold subtree.
const SPLITS: [&[(u32, u32)]; 4] = [
    &[(1, 4), (5, 6)],
    &[(1, 1), (2, 4), (5, 6)],
    &[(1, 1), (2, 6)],
    &[(1, 2), (3, 4), (5, 6)],
];

fn piece(tree: &DependencyTree, start: u32, end: u32, mistag: bool) -> ParseFragment {
    let tokens = (start..=end)
        .map(|i| {
            let token = tree.token(i).unwrap();
            let pos = if mistag && i == 6 { PosTag::V } else { token.pos() };
            Token::new(i, token.surface(), token.lemma(), pos).unwrap()
        })
        .collect();
    let edges = (start..=end)
        .map(|i| {
            let edge = tree.edge(i).unwrap().clone();
            if edge.head < start || edge.head > end {
                DependencyEdge::new(i, 0, RelationLabel::DIRECT)
            } else {
                edge
            }
        })
        .collect();
    ParseFragment::new(DependencyTree::new(tokens, edges)).unwrap()
}

/// The wrong reading of a frame: the prepositional phrase on the object.
fn misattached(tree: &DependencyTree) -> DependencyTree {
    let mut edges = tree.edges().to_vec();
    let rel = edges[5].relation.clone();
    edges[5] = DependencyEdge::new(6, 4, rel);
    DependencyTree::validated(tree.tokens().to_vec(), edges).unwrap()
}

/// `sentences` records; every tenth is fragmented (up to `fragmented`),
/// every tenth offset by five is a two-candidate forest (up to `forests`).
pub fn synthetic_corpus(seed: u64, sentences: u32, fragmented: usize, forests: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    let mut gold = BTreeMap::new();
    let mut fragmented_ids = Vec::new();
    let mut forest_ids = Vec::new();
    for id in 1..=sentences {
        let verb = rng.gen_range(0..VERBS);
        let tree = frame(&mut rng, verb);
        let parse = if id % 10 == 0 && fragmented_ids.len() < fragmented {
            let split = SPLITS.choose(&mut rng).unwrap();
            let mistag = fragmented_ids.len() % 3 == 0;
            let pieces = split
                .iter()
                .map(|&(s, e)| piece(&tree, s, e, mistag))
                .collect();
            fragmented_ids.push(id);
            gold.insert(id, tree.clone());
            Parse::Incomplete(PartialParse::new(pieces).unwrap())
        } else if id % 10 == 5 && forest_ids.len() < forests {
            forest_ids.push(id);
            gold.insert(id, tree.clone());
            let mut candidates = vec![misattached(&tree), tree.clone()];
            if rng.gen_bool(0.5) {
                candidates.swap(0, 1);
            }
            Parse::Multiple(ParseForest::new(candidates).unwrap())
        } else if rng.gen_bool(0.3) {
            Parse::Complete(with_noise(&mut rng, &tree))
        } else {
            Parse::Complete(tree)
        };
        records.push(SentenceRecord::new(id, parse));
    }
    Synthetic {
        document: Document::new(records).unwrap(),
        gold,
        fragmented: fragmented_ids,
        forests: forest_ids,
    }
}

/// Edge lists compared as (dependent, head, relation).
pub fn edge_triples(tree: &DependencyTree) -> Vec<(u32, u32, RelationLabel)> {
    tree.edges()
        .iter()
        .map(|e| (e.dependent, e.head, e.relation.clone()))
        .collect()
}
