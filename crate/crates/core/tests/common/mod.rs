//! Shared fixture builders.
//!
//! Trees are written one token per word: `form[=lemma]/POS>head[:rel][?]`.
//! Heads are absolute indices (`0` for the root), the relation defaults to
//! DIRECT and a trailing `?` marks the edge ambiguous. Underscores in forms
//! and lemmas stand for spaces.

#![allow(dead_code)]

use discourse_core::model::{
    DependencyEdge, DependencyTree, Document, Parse, ParseFragment, PartialParse, PosTag,
    RelationLabel, SentenceRecord, Token,
};

pub fn tree_at(first: u32, notation: &str) -> DependencyTree {
    let mut tokens = Vec::new();
    let mut edges = Vec::new();
    for (offset, word) in notation.split_whitespace().enumerate() {
        let index = first + offset as u32;
        let (word, ambiguous) = match word.strip_suffix('?') {
            Some(w) => (w, true),
            None => (word, false),
        };
        let (left, attachment) = word.rsplit_once('>').expect("missing head");
        let (head, relation) = match attachment.split_once(':') {
            Some((h, r)) => (h, RelationLabel::parse_lenient(r)),
            None => (attachment, RelationLabel::DIRECT),
        };
        let (form, pos) = left.rsplit_once('/').expect("missing tag");
        let (form, lemma) = form.split_once('=').unwrap_or((form, form));
        let pos = PosTag::from_name(pos).expect("unknown tag");
        tokens.push(
            Token::new(index, form.replace('_', " "), &lemma.replace('_', " "), pos).unwrap(),
        );
        let mut edge = DependencyEdge::new(index, head.parse().expect("bad head"), relation);
        edge.ambiguous = ambiguous;
        edges.push(edge);
    }
    DependencyTree::new(tokens, edges)
}

pub fn tree(notation: &str) -> DependencyTree {
    let tree = tree_at(1, notation);
    tree.ensure_valid().unwrap();
    tree
}

pub fn fragment(first: u32, notation: &str) -> ParseFragment {
    ParseFragment::new(tree_at(first, notation)).unwrap()
}

pub fn partial(fragments: &[(u32, &str)]) -> PartialParse {
    PartialParse::new(fragments.iter().map(|(f, s)| fragment(*f, s)).collect()).unwrap()
}

pub fn complete(id: u32, notation: &str) -> SentenceRecord {
    SentenceRecord::new(id, Parse::Complete(tree(notation)))
}

/// The partial parse of "Fig. 3 is an isometric view of the magazine taken
/// from the operator 's side with one cartridge shown in an unprocessed
/// position and two cartridges shown in a processed position .", with
/// "side" mistagged as a verb and rooting the second fragment.
pub fn walkthrough_partial() -> PartialParse {
    partial(&[
        (
            1,
            "Fig.=fig/N>3:SUBJ 3/OTHER>1 is=be/V>0 an/DET>6 isometric/AJ>6 view/N>3:OBJ \
             of/PP>9 the/DET>9 magazine/N>6:of taken=take/V>9 from/PP>13 the/DET>13 \
             operator/N>10:from 's/OTHER>13",
        ),
        (
            15,
            "side/V>0 with/PP>18 one/OTHER>18 cartridge/N>15:with shown=show/V>18 in/PP>23 \
             an/DET>23 unprocessed/AJ>23 position/N>19:in and/CJ>26 two/OTHER>26 \
             cartridges=cartridge/N>18 shown=show/V>26 in/PP>31 a/DET>31 processed/AJ>31 \
             position/N>27:in ./PUNC>15",
        ),
    ])
}

pub const WALKTHROUGH_ID: u32 = 10;

/// Discourse around the walkthrough sentence: "side" as the noun object of
/// "from" modifying "take", "operator" modifying "side", and thirteen more
/// noun uses of "side".
pub fn walkthrough_document() -> Document {
    let mut records = vec![SentenceRecord::new(
        WALKTHROUGH_ID,
        Parse::Incomplete(walkthrough_partial()),
    )];
    records.push(complete(
        44,
        "Fig.=fig/N>3:SUBJ 4/OTHER>1 is=be/V>0 a/DET>5 view/N>3:OBJ of/PP>8 the/DET>8 \
         magazine/N>5:of taken=take/V>8 from/PP>12 the/DET>12 side/N>9:from with/PP>15 \
         one/OTHER>15 cartridge/N>12:with? shown=show/V>15 ./PUNC>3",
    ));
    records.push(complete(
        151,
        "Cartridges=cartridge/N>3:SUBJ are=be/V>3 loaded=load/V>0 from/PP>7 the/DET>7 \
         operator/N>7 side/N>3:from ./PUNC>3",
    ));
    for id in 200..213 {
        records.push(complete(id, "Check/V>0 the/DET>3 side/N>1:OBJ ./PUNC>1"));
    }
    Document::new(records).unwrap()
}

/// One sentence per cursor instance of the cursor table: eight where the
/// cursor is modified, eleven where it modifies a verb.
pub fn cursor_document() -> Document {
    let sentences = [
        "Display/N>2:of? cursor/N>0",
        "cursor/N>0 protected_area/N>1:in",
        "left/N>2:to? cursor/N>0",
        "right/N>2:to? cursor/N>0",
        "position/N>2 cursor/N>0",
        "line/AJ>2:up? cursor/N>0",
        "your/AJ>2 cursor/N>0",
        "your/AJ>2 cursor/N>0",
        "play/V>0 cursor/N>1:with?",
        "be/V>0 cursor/N>1:with?",
        "move/V>0 cursor/N>1:up",
        "cursor/N>2:SUBJ stop/V>0",
        "cursor/N>2:SUBJ reach/V>0",
        "cursor/N>2:SUBJ move/V>0",
        "move/V>0 cursor/N>1:OBJ",
        "move/V>0 cursor/N>1:OBJ",
        "move/V>0 cursor/N>1:OBJ",
        "confuse/V>0 cursor/N>1:OBJ",
        "move/V>0 cursor/N>1:RECIPIENT",
    ];
    let records = sentences
        .iter()
        .enumerate()
        .map(|(i, s)| complete(i as u32 + 1, s))
        .collect();
    Document::new(records).unwrap()
}

/// Expected cursor entries as (modifier, relation, modifiee, value).
pub const CURSOR_TABLE: [(&str, &str, &str, &str); 16] = [
    ("display/N", "of", "cursor/N", "0.1"),
    ("protected area/N", "in", "cursor/N", "1"),
    ("left/N", "to", "cursor/N", "0.1"),
    ("right/N", "to", "cursor/N", "0.1"),
    ("position/N", "DIRECT", "cursor/N", "1"),
    ("line/AJ", "up", "cursor/N", "0.1"),
    ("your/AJ", "DIRECT", "cursor/N", "2"),
    ("cursor/N", "with", "play/V", "0.1"),
    ("cursor/N", "with", "be/V", "0.1"),
    ("cursor/N", "up", "move/V", "1"),
    ("cursor/N", "SUBJ", "stop/V", "1"),
    ("cursor/N", "SUBJ", "reach/V", "1"),
    ("cursor/N", "SUBJ", "move/V", "1"),
    ("cursor/N", "OBJ", "move/V", "3"),
    ("cursor/N", "OBJ", "confuse/V", "1"),
    ("cursor/N", "RECIPIENT", "move/V", "1"),
];

pub mod oracle;
pub mod synthetic;
