//! Sentences, dependency trees, fragments, forests and documents.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Document-unique sentence ordinal.
pub type SentenceId = u32;

/// 1-based token position within a sentence. `0` denotes the artificial root.
pub type TokenIndex = u32;

/// Coarse part-of-speech tag set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosTag {
    N,
    PN,
    V,
    AJ,
    AV,
    CJ,
    PP,
    DET,
    PUNC,
    OTHER,
}

impl PosTag {
    pub const ALL: [PosTag; 10] = [
        PosTag::N,
        PosTag::PN,
        PosTag::V,
        PosTag::AJ,
        PosTag::AV,
        PosTag::CJ,
        PosTag::PP,
        PosTag::DET,
        PosTag::PUNC,
        PosTag::OTHER,
    ];

    /// Parses a tag name case-insensitively. Returns `None` for tags outside
    /// the enumerated set.
    pub fn from_name(name: &str) -> Option<PosTag> {
        let tag = match name.to_ascii_uppercase().as_str() {
            "N" => PosTag::N,
            "PN" => PosTag::PN,
            "V" => PosTag::V,
            "AJ" => PosTag::AJ,
            "AV" => PosTag::AV,
            "CJ" => PosTag::CJ,
            "PP" => PosTag::PP,
            "DET" => PosTag::DET,
            "PUNC" => PosTag::PUNC,
            "OTHER" => PosTag::OTHER,
            _ => return None,
        };
        Some(tag)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::N => "N",
            PosTag::PN => "PN",
            PosTag::V => "V",
            PosTag::AJ => "AJ",
            PosTag::AV => "AV",
            PosTag::CJ => "CJ",
            PosTag::PP => "PP",
            PosTag::DET => "DET",
            PosTag::PUNC => "PUNC",
            PosTag::OTHER => "OTHER",
        }
    }

    /// Whether tokens with this tag may be collocation endpoints.
    pub fn is_collocational(self) -> bool {
        !matches!(self, PosTag::PUNC | PosTag::OTHER)
    }

    pub fn is_nominal(self) -> bool {
        matches!(self, PosTag::N | PosTag::PN)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for PosTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for PosTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        PosTag::from_name(&name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown POS tag `{}`", name)))
    }
}

/// Grammatical relations that are not prepositional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GrammaticalRelation {
    Subj,
    Obj,
    Recipient,
    Direct,
}

/// Label of a modifier → modifiee edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationLabel {
    /// Attachment through a preposition (or particle), keyed by its lemma.
    Prep(String),
    Grammatical(GrammaticalRelation),
}

impl RelationLabel {
    pub const SUBJ: RelationLabel = RelationLabel::Grammatical(GrammaticalRelation::Subj);
    pub const OBJ: RelationLabel = RelationLabel::Grammatical(GrammaticalRelation::Obj);
    pub const RECIPIENT: RelationLabel =
        RelationLabel::Grammatical(GrammaticalRelation::Recipient);
    pub const DIRECT: RelationLabel = RelationLabel::Grammatical(GrammaticalRelation::Direct);

    pub fn prep(lemma: &str) -> RelationLabel {
        let lemma = lemma.trim().to_lowercase();
        assert!(!lemma.is_empty(), "empty preposition lemma");
        RelationLabel::Prep(lemma)
    }

    /// Parses a label, returning `None` when it is neither a known
    /// grammatical relation nor a plausible preposition lemma.
    ///
    /// Grammatical relations are upper case (`SUBJ`, `OBJ`, `RECIPIENT`,
    /// `DIRECT`); prepositions are written as their lower case lemma, with
    /// an optional `prep:` prefix.
    pub fn parse(label: &str) -> Option<RelationLabel> {
        let label = label.trim();
        match label {
            "SUBJ" => return Some(RelationLabel::SUBJ),
            "OBJ" => return Some(RelationLabel::OBJ),
            "RECIPIENT" => return Some(RelationLabel::RECIPIENT),
            "DIRECT" => return Some(RelationLabel::DIRECT),
            _ => {}
        }
        let lemma = label.strip_prefix("prep:").unwrap_or(label);
        let plausible = !lemma.is_empty()
            && lemma
                .chars()
                .all(|c| c.is_lowercase() || c == '-' || c == '\'' || c == '_');
        plausible.then(|| RelationLabel::Prep(lemma.to_owned()))
    }

    /// Parses a label, mapping anything unknown to `DIRECT` with a warning.
    pub fn parse_lenient(label: &str) -> RelationLabel {
        RelationLabel::parse(label).unwrap_or_else(|| {
            log::warn!("unknown relation label `{}`, using DIRECT", label);
            RelationLabel::DIRECT
        })
    }

    pub fn is_prep(&self) -> bool {
        matches!(self, RelationLabel::Prep(_))
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationLabel::Prep(lemma) => f.write_str(lemma),
            RelationLabel::Grammatical(g) => f.write_str(match g {
                GrammaticalRelation::Subj => "SUBJ",
                GrammaticalRelation::Obj => "OBJ",
                GrammaticalRelation::Recipient => "RECIPIENT",
                GrammaticalRelation::Direct => "DIRECT",
            }),
        }
    }
}

impl Serialize for RelationLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RelationLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let label = String::deserialize(d)?;
        Ok(RelationLabel::parse_lenient(&label))
    }
}

/// A pre-analyzed token.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TokenRepr", into = "TokenRepr")]
pub struct Token {
    index: TokenIndex,
    surface: String,
    lemma: String,
    pos: PosTag,
    /// Original tag when it fell outside the enumerated set.
    raw_pos: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TokenRepr {
    id: TokenIndex,
    form: String,
    lemma: String,
    pos: String,
}

impl TryFrom<TokenRepr> for Token {
    type Error = ModelError;

    fn try_from(repr: TokenRepr) -> Result<Self, ModelError> {
        let mut token = Token::new(repr.id, repr.form, &repr.lemma, PosTag::OTHER)?;
        token.set_pos_name(&repr.pos);
        Ok(token)
    }
}

impl From<Token> for TokenRepr {
    fn from(token: Token) -> Self {
        TokenRepr {
            id: token.index,
            pos: token.pos_name().to_owned(),
            form: token.surface,
            lemma: token.lemma,
        }
    }
}

impl Token {
    pub fn new(
        index: TokenIndex,
        surface: impl Into<String>,
        lemma: &str,
        pos: PosTag,
    ) -> Result<Token, ModelError> {
        if index == 0 {
            return Err(ModelError::ZeroTokenIndex);
        }
        let lemma = lemma.trim().to_lowercase();
        if lemma.is_empty() {
            return Err(ModelError::EmptyLemma(index));
        }
        Ok(Token {
            index,
            surface: surface.into(),
            lemma,
            pos,
            raw_pos: None,
        })
    }

    /// Sets the tag from its textual name; unknown names become `OTHER`
    /// and are kept verbatim.
    pub fn set_pos_name(&mut self, name: &str) {
        match PosTag::from_name(name) {
            Some(tag) => {
                self.pos = tag;
                self.raw_pos = None;
            }
            None => {
                self.pos = PosTag::OTHER;
                self.raw_pos = Some(name.to_owned());
            }
        }
    }

    pub fn index(&self) -> TokenIndex {
        self.index
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn lemma(&self) -> &str {
        &self.lemma
    }

    pub fn pos(&self) -> PosTag {
        self.pos
    }

    pub fn raw_pos(&self) -> Option<&str> {
        self.raw_pos.as_deref()
    }

    /// The tag as written in files.
    pub fn pos_name(&self) -> &str {
        self.raw_pos.as_deref().unwrap_or(self.pos.as_str())
    }

    pub fn lexeme(&self) -> Lexeme {
        Lexeme::new(&self.lemma, self.pos)
    }

    pub(crate) fn with_pos(&self, pos: PosTag) -> Token {
        Token {
            pos,
            raw_pos: None,
            ..self.clone()
        }
    }

    pub(crate) fn same_word(&self, other: &Token) -> bool {
        self.index == other.index && self.surface == other.surface && self.lemma == other.lemma
    }
}

/// A lemma in a given part of speech.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lexeme {
    pub lemma: String,
    pub pos: PosTag,
}

impl Lexeme {
    pub fn new(lemma: &str, pos: PosTag) -> Lexeme {
        Lexeme {
            lemma: lemma.to_lowercase(),
            pos,
        }
    }
}

impl fmt::Display for Lexeme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.lemma, self.pos)
    }
}

/// A (modifier, relation, modifiee) triple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Collocation {
    pub modifier: Lexeme,
    pub relation: RelationLabel,
    pub modifiee: Lexeme,
}

impl Collocation {
    pub fn new(modifier: Lexeme, relation: RelationLabel, modifiee: Lexeme) -> Collocation {
        Collocation {
            modifier,
            relation,
            modifiee,
        }
    }
}

impl fmt::Display for Collocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {}", self.modifier, self.relation, self.modifiee)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyEdge {
    #[serde(rename = "dep")]
    pub dependent: TokenIndex,
    pub head: TokenIndex,
    #[serde(rename = "rel")]
    pub relation: RelationLabel,
    #[serde(rename = "amb", default, skip_serializing_if = "std::ops::Not::not")]
    pub ambiguous: bool,
}

impl DependencyEdge {
    pub fn new(dependent: TokenIndex, head: TokenIndex, relation: RelationLabel) -> Self {
        DependencyEdge {
            dependent,
            head,
            relation,
            ambiguous: false,
        }
    }

    pub fn ambiguous(mut self) -> Self {
        self.ambiguous = true;
        self
    }
}

/// A single rule broken by a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyTree,
    /// Token at `position` (0-based) does not carry the expected index.
    TokenOrder { position: usize, expected: TokenIndex, found: TokenIndex },
    DependentOutOfRange { dependent: TokenIndex },
    HeadOutOfRange { dependent: TokenIndex, head: TokenIndex },
    SelfLoop { token: TokenIndex },
    NoRoot,
    MultipleRoots { roots: Vec<TokenIndex> },
    MissingHead { token: TokenIndex },
    MultipleHeads { token: TokenIndex, heads: Vec<TokenIndex> },
    Cycle { members: Vec<TokenIndex> },
}

impl Violation {
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::EmptyTree => "empty tree",
            Violation::TokenOrder { .. } => "token order",
            Violation::DependentOutOfRange { .. } => "dependent out of range",
            Violation::HeadOutOfRange { .. } => "head out of range",
            Violation::SelfLoop { .. } => "self loop",
            Violation::NoRoot => "no root",
            Violation::MultipleRoots { .. } => "multiple roots",
            Violation::MissingHead { .. } => "missing head",
            Violation::MultipleHeads { .. } => "multiple heads",
            Violation::Cycle { .. } => "cycle",
        }
    }

    /// Token indices involved in the violation.
    pub fn indices(&self) -> Vec<TokenIndex> {
        match self {
            Violation::EmptyTree | Violation::NoRoot => vec![],
            Violation::TokenOrder { found, .. } => vec![*found],
            Violation::DependentOutOfRange { dependent } => vec![*dependent],
            Violation::HeadOutOfRange { dependent, head } => vec![*dependent, *head],
            Violation::SelfLoop { token } | Violation::MissingHead { token } => vec![*token],
            Violation::MultipleRoots { roots } => roots.clone(),
            Violation::MultipleHeads { token, heads } => {
                let mut v = vec![*token];
                v.extend(heads);
                v
            }
            Violation::Cycle { members } => members.clone(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let indices = self.indices();
        if indices.is_empty() {
            f.write_str(self.rule())
        } else {
            let list: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
            write!(f, "{} ({})", self.rule(), list.join(", "))
        }
    }
}

/// Tokens plus labelled head attachments.
///
/// Token indices are positions in the enclosing sentence and must be
/// consecutive; a complete parse starts at 1, a fragment tree starts at its
/// span's first position. Edges are kept sorted by dependent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "TreeRepr")]
pub struct DependencyTree {
    tokens: Vec<Token>,
    edges: Vec<DependencyEdge>,
}

#[derive(Deserialize)]
struct TreeRepr {
    tokens: Vec<Token>,
    edges: Vec<DependencyEdge>,
}

impl From<TreeRepr> for DependencyTree {
    fn from(repr: TreeRepr) -> Self {
        DependencyTree::new(repr.tokens, repr.edges)
    }
}

impl DependencyTree {
    /// Builds a tree without checking it; see [`validate_tree`].
    pub fn new(tokens: Vec<Token>, mut edges: Vec<DependencyEdge>) -> DependencyTree {
        edges.sort_by_key(|e| (e.dependent, e.head));
        DependencyTree { tokens, edges }
    }

    /// Builds a tree and rejects it if any invariant is broken.
    pub fn validated(
        tokens: Vec<Token>,
        edges: Vec<DependencyEdge>,
    ) -> Result<DependencyTree, ModelError> {
        let tree = DependencyTree::new(tokens, edges);
        tree.ensure_valid()?;
        Ok(tree)
    }

    pub fn ensure_valid(&self) -> Result<(), ModelError> {
        let violations = validate_tree(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ModelError::InvalidTree(violations))
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn edges(&self) -> &[DependencyEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Index of the first token, or 0 for an empty tree.
    pub fn first_index(&self) -> TokenIndex {
        self.tokens.first().map_or(0, Token::index)
    }

    pub fn last_index(&self) -> TokenIndex {
        self.tokens.last().map_or(0, Token::index)
    }

    pub fn contains(&self, index: TokenIndex) -> bool {
        index >= self.first_index() && index <= self.last_index() && index != 0
    }

    pub fn token(&self, index: TokenIndex) -> Option<&Token> {
        if !self.contains(index) {
            return None;
        }
        self.tokens.get((index - self.first_index()) as usize)
    }

    /// Head of `dependent` (0 for the root). Assumes a valid tree.
    pub fn head(&self, dependent: TokenIndex) -> Option<TokenIndex> {
        self.edge(dependent).map(|e| e.head)
    }

    pub fn edge(&self, dependent: TokenIndex) -> Option<&DependencyEdge> {
        self.edges
            .binary_search_by_key(&dependent, |e| e.dependent)
            .ok()
            .map(|i| &self.edges[i])
    }

    /// The root token. Assumes a valid tree.
    pub fn root(&self) -> TokenIndex {
        self.edges
            .iter()
            .find(|e| e.head == 0)
            .map(|e| e.dependent)
            .expect("tree without root")
    }

    pub fn children(&self, head: TokenIndex) -> impl Iterator<Item = TokenIndex> + '_ {
        self.edges
            .iter()
            .filter(move |e| e.head == head)
            .map(|e| e.dependent)
    }

    /// Whether `ancestor` dominates `node` (reflexively). Assumes a valid tree.
    pub fn dominates(&self, ancestor: TokenIndex, node: TokenIndex) -> bool {
        let mut current = node;
        for _ in 0..=self.tokens.len() {
            if current == ancestor {
                return true;
            }
            match self.head(current) {
                Some(0) | None => return false,
                Some(h) => current = h,
            }
        }
        false
    }

    /// Chain from the root down to `node`, root first.
    fn path_from_root(&self, node: TokenIndex) -> Vec<TokenIndex> {
        let mut path = vec![node];
        let mut current = node;
        while let Some(h) = self.head(current) {
            if h == 0 || path.len() > self.tokens.len() {
                break;
            }
            path.push(h);
            current = h;
        }
        path.reverse();
        path
    }

    /// Nodes from the root to the last token: the attachment sites that keep
    /// a new rightmost dependent projective.
    pub fn right_spine(&self) -> Vec<TokenIndex> {
        self.path_from_root(self.last_index())
    }

    /// Nodes from the root to the first token.
    pub fn left_spine(&self) -> Vec<TokenIndex> {
        self.path_from_root(self.first_index())
    }

    pub(crate) fn set_token(&mut self, token: Token) {
        let offset = (token.index() - self.first_index()) as usize;
        self.tokens[offset] = token;
    }

    pub(crate) fn replace_edge(&mut self, edge: DependencyEdge) {
        let pos = self
            .edges
            .binary_search_by_key(&edge.dependent, |e| e.dependent)
            .expect("edge for unknown dependent");
        self.edges[pos] = edge;
    }
}

/// Reports every invariant a tree breaks. Total over arbitrary edge lists.
pub fn validate_tree(tree: &DependencyTree) -> Vec<Violation> {
    let mut violations = Vec::new();
    let tokens = tree.tokens();
    if tokens.is_empty() {
        violations.push(Violation::EmptyTree);
    }
    let first = tree.first_index();
    for (position, token) in tokens.iter().enumerate() {
        let expected = first + position as TokenIndex;
        if token.index() != expected {
            violations.push(Violation::TokenOrder {
                position,
                expected,
                found: token.index(),
            });
        }
    }
    let in_range = |i: TokenIndex| tokens.iter().any(|t| t.index() == i);

    let mut heads: BTreeMap<TokenIndex, Vec<TokenIndex>> = BTreeMap::new();
    let mut roots = Vec::new();
    for edge in tree.edges() {
        if !in_range(edge.dependent) {
            violations.push(Violation::DependentOutOfRange {
                dependent: edge.dependent,
            });
            continue;
        }
        if edge.head == edge.dependent {
            violations.push(Violation::SelfLoop {
                token: edge.dependent,
            });
        } else if edge.head != 0 && !in_range(edge.head) {
            violations.push(Violation::HeadOutOfRange {
                dependent: edge.dependent,
                head: edge.head,
            });
        }
        if edge.head == 0 {
            roots.push(edge.dependent);
        }
        heads.entry(edge.dependent).or_default().push(edge.head);
    }

    if !tokens.is_empty() {
        match roots.len() {
            0 => violations.push(Violation::NoRoot),
            1 => {}
            _ => violations.push(Violation::MultipleRoots { roots }),
        }
    }
    for token in tokens {
        match heads.get(&token.index()) {
            None => violations.push(Violation::MissingHead {
                token: token.index(),
            }),
            Some(h) if h.len() > 1 => violations.push(Violation::MultipleHeads {
                token: token.index(),
                heads: h.clone(),
            }),
            Some(_) => {}
        }
    }

    for members in cycles(&heads) {
        violations.push(Violation::Cycle { members });
    }
    violations
}

/// Strongly connected components of size > 1 in the dependent → head graph
/// (Tarjan). Self loops are reported separately.
fn cycles(heads: &BTreeMap<TokenIndex, Vec<TokenIndex>>) -> Vec<Vec<TokenIndex>> {
    struct State<'a> {
        heads: &'a BTreeMap<TokenIndex, Vec<TokenIndex>>,
        counter: usize,
        index: BTreeMap<TokenIndex, usize>,
        low: BTreeMap<TokenIndex, usize>,
        stack: Vec<TokenIndex>,
        on_stack: BTreeSet<TokenIndex>,
        found: Vec<Vec<TokenIndex>>,
    }

    fn visit(state: &mut State, node: TokenIndex) {
        state.index.insert(node, state.counter);
        state.low.insert(node, state.counter);
        state.counter += 1;
        state.stack.push(node);
        state.on_stack.insert(node);

        let successors = state.heads.get(&node).cloned().unwrap_or_default();
        for next in successors {
            if next == 0 || next == node {
                continue;
            }
            if !state.index.contains_key(&next) {
                visit(state, next);
                let low = state.low[&node].min(state.low[&next]);
                state.low.insert(node, low);
            } else if state.on_stack.contains(&next) {
                let low = state.low[&node].min(state.index[&next]);
                state.low.insert(node, low);
            }
        }

        if state.low[&node] == state.index[&node] {
            let mut component = Vec::new();
            while let Some(top) = state.stack.pop() {
                state.on_stack.remove(&top);
                component.push(top);
                if top == node {
                    break;
                }
            }
            if component.len() > 1 {
                component.sort_unstable();
                state.found.push(component);
            }
        }
    }

    let mut state = State {
        heads,
        counter: 0,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        on_stack: BTreeSet::new(),
        found: Vec::new(),
    };
    for &node in heads.keys() {
        if !state.index.contains_key(&node) {
            visit(&mut state, node);
        }
    }
    state.found.sort();
    state.found
}

/// Whether a valid tree has no crossing edges.
///
/// A tree is projective iff every token strictly between a head and its
/// dependent is dominated by that head.
pub fn is_projective(tree: &DependencyTree) -> Result<bool, ModelError> {
    tree.ensure_valid()?;
    Ok(projective_unchecked(tree))
}

pub(crate) fn projective_unchecked(tree: &DependencyTree) -> bool {
    tree.edges().iter().filter(|e| e.head != 0).all(|e| {
        let (lo, hi) = (e.head.min(e.dependent), e.head.max(e.dependent));
        (lo + 1..hi).all(|k| tree.dominates(e.head, k))
    })
}

/// Inclusive interval of token positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(TokenIndex, TokenIndex)", into = "(TokenIndex, TokenIndex)")]
pub struct Span {
    pub start: TokenIndex,
    pub end: TokenIndex,
}

impl From<(TokenIndex, TokenIndex)> for Span {
    fn from((start, end): (TokenIndex, TokenIndex)) -> Self {
        Span { start, end }
    }
}

impl From<Span> for (TokenIndex, TokenIndex) {
    fn from(span: Span) -> Self {
        (span.start, span.end)
    }
}

impl Span {
    pub fn new(start: TokenIndex, end: TokenIndex) -> Span {
        Span { start, end }
    }

    pub fn len(&self) -> usize {
        if self.end < self.start {
            0
        } else {
            (self.end - self.start + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, index: TokenIndex) -> bool {
        index >= self.start && index <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// A tree over a contiguous slice of a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFragment {
    pub(crate) span: Span,
    pub(crate) tree: DependencyTree,
}

impl ParseFragment {
    pub fn new(tree: DependencyTree) -> Result<ParseFragment, ModelError> {
        tree.ensure_valid()?;
        let span = Span::new(tree.first_index(), tree.last_index());
        Ok(ParseFragment { span, tree })
    }

    /// Builds a fragment with an explicitly stated span, checking that the
    /// tree covers exactly that span.
    pub fn with_span(span: Span, tree: DependencyTree) -> Result<ParseFragment, ModelError> {
        let fragment = ParseFragment { span, tree };
        fragment.validate()?;
        Ok(fragment)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.span.is_empty()
            || self.span.start == 0
            || self.tree.len() != self.span.len()
            || self.tree.first_index() != self.span.start
        {
            return Err(ModelError::FragmentSpan {
                span: self.span,
                tokens: self.tree.len(),
            });
        }
        self.tree.ensure_valid()
    }

    pub fn span(&self) -> Span {
        self.span
    }

    pub fn tree(&self) -> &DependencyTree {
        &self.tree
    }

    pub fn into_tree(self) -> DependencyTree {
        self.tree
    }
}

/// Ordered fragments jointly covering a sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialParse {
    fragments: Vec<ParseFragment>,
}

impl PartialParse {
    pub fn new(fragments: Vec<ParseFragment>) -> Result<PartialParse, ModelError> {
        let partial = PartialParse { fragments };
        partial.validate()?;
        Ok(partial)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.fragments.len() < 2 {
            return Err(ModelError::TooFewFragments(self.fragments.len()));
        }
        check_coverage(&self.fragments)
    }

    pub fn fragments(&self) -> &[ParseFragment] {
        &self.fragments
    }

    pub fn into_fragments(self) -> Vec<ParseFragment> {
        self.fragments
    }

    pub fn token_count(&self) -> usize {
        self.fragments.iter().map(|f| f.span.len()).sum()
    }

    /// All tokens in sentence order.
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.fragments.iter().flat_map(|f| f.tree.tokens())
    }
}

/// Checks that fragments are individually valid, sorted, disjoint and cover
/// `1..=n` without gaps.
pub(crate) fn check_coverage(fragments: &[ParseFragment]) -> Result<(), ModelError> {
    let mut next = 1;
    for fragment in fragments {
        fragment.validate()?;
        let span = fragment.span;
        if span.start > next {
            return Err(ModelError::CoverageGap(Span::new(next, span.start - 1)));
        }
        if span.start < next {
            return Err(ModelError::FragmentOverlap(span));
        }
        next = span.end + 1;
    }
    Ok(())
}

/// Competing complete parses of one sentence, in parser emission order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParseForest {
    candidates: Vec<DependencyTree>,
}

impl ParseForest {
    pub fn new(candidates: Vec<DependencyTree>) -> Result<ParseForest, ModelError> {
        let forest = ParseForest { candidates };
        forest.validate()?;
        Ok(forest)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.candidates.len() < 2 {
            return Err(ModelError::ForestSize(self.candidates.len()));
        }
        let first = &self.candidates[0];
        for (i, candidate) in self.candidates.iter().enumerate() {
            candidate
                .ensure_valid()
                .map_err(|e| ModelError::Candidate(i, Box::new(e)))?;
            if candidate.first_index() != 1 {
                return Err(ModelError::NotSentenceInitial(candidate.first_index()));
            }
            let same = candidate.len() == first.len()
                && candidate
                    .tokens()
                    .iter()
                    .zip(first.tokens())
                    .all(|(a, b)| a.same_word(b));
            if !same {
                return Err(ModelError::ForestTokens(i));
            }
        }
        Ok(())
    }

    pub fn candidates(&self) -> &[DependencyTree] {
        &self.candidates
    }

    pub fn into_candidates(self) -> Vec<DependencyTree> {
        self.candidates
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parse {
    Complete(DependencyTree),
    Multiple(ParseForest),
    Incomplete(PartialParse),
}

impl Parse {
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            Parse::Complete(tree) => {
                tree.ensure_valid()?;
                if tree.first_index() != 1 {
                    return Err(ModelError::NotSentenceInitial(tree.first_index()));
                }
                Ok(())
            }
            Parse::Multiple(forest) => forest.validate(),
            Parse::Incomplete(partial) => partial.validate(),
        }
    }

    /// Tokens of the sentence (the first candidate's for forests).
    pub fn tokens(&self) -> Vec<&Token> {
        match self {
            Parse::Complete(tree) => tree.tokens().iter().collect(),
            Parse::Multiple(forest) => forest.candidates()[0].tokens().iter().collect(),
            Parse::Incomplete(partial) => partial.tokens().collect(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Parse::Complete(_) => "complete",
            Parse::Multiple(_) => "multiple",
            Parse::Incomplete(_) => "incomplete",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub id: SentenceId,
    #[serde(flatten)]
    pub parse: Parse,
}

impl SentenceRecord {
    pub fn new(id: SentenceId, parse: Parse) -> SentenceRecord {
        SentenceRecord { id, parse }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub records: Vec<SentenceRecord>,
    pub metadata: BTreeMap<String, String>,
}

impl Document {
    pub fn new(records: Vec<SentenceRecord>) -> Result<Document, ModelError> {
        let document = Document {
            records,
            metadata: BTreeMap::new(),
        };
        document.validate()?;
        Ok(document)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.records.is_empty() {
            return Err(ModelError::EmptyDocument);
        }
        let mut previous: Option<SentenceId> = None;
        for record in &self.records {
            if let Some(prev) = previous {
                if record.id <= prev {
                    return Err(ModelError::NonIncreasingId {
                        previous: prev,
                        found: record.id,
                    });
                }
            }
            previous = Some(record.id);
            record.parse.validate().map_err(|e| ModelError::Sentence {
                id: record.id,
                source: Box::new(e),
            })?;
        }
        Ok(())
    }

    pub fn record(&self, id: SentenceId) -> Option<&SentenceRecord> {
        self.records
            .binary_search_by_key(&id, |r| r.id)
            .ok()
            .map(|i| &self.records[i])
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid tree: {}", join_violations(.0))]
    InvalidTree(Vec<Violation>),
    #[error("token index must be at least 1")]
    ZeroTokenIndex,
    #[error("token {0} has an empty lemma")]
    EmptyLemma(TokenIndex),
    #[error("fragment span {span} does not match its {tokens} tokens")]
    FragmentSpan { span: Span, tokens: usize },
    #[error("fragments leave a gap at {0}")]
    CoverageGap(Span),
    #[error("fragment {0} overlaps or precedes the previous fragment")]
    FragmentOverlap(Span),
    #[error("a partial parse needs at least 2 fragments, found {0}")]
    TooFewFragments(usize),
    #[error("a parse forest needs at least 2 candidates, found {0}")]
    ForestSize(usize),
    #[error("candidate {0} has a different token sequence")]
    ForestTokens(usize),
    #[error("candidate {0}: {1}")]
    Candidate(usize, Box<ModelError>),
    #[error("sentence tree must start at token 1, starts at {0}")]
    NotSentenceInitial(TokenIndex),
    #[error("document has no sentences")]
    EmptyDocument,
    #[error("sentence ids must increase: {found} follows {previous}")]
    NonIncreasingId {
        previous: SentenceId,
        found: SentenceId,
    },
    #[error("sentence {id}: {source}")]
    Sentence {
        id: SentenceId,
        source: Box<ModelError>,
    },
}

fn join_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn tok(index: TokenIndex, lemma: &str, pos: PosTag) -> Token {
        Token::new(index, lemma, lemma, pos).unwrap()
    }

    fn chain3() -> DependencyTree {
        // 1 <- 2 <- 3 (3 is the root)
        DependencyTree::new(
            vec![tok(1, "a", PosTag::N), tok(2, "b", PosTag::N), tok(3, "c", PosTag::V)],
            vec![
                DependencyEdge::new(1, 2, RelationLabel::DIRECT),
                DependencyEdge::new(2, 3, RelationLabel::OBJ),
                DependencyEdge::new(3, 0, RelationLabel::DIRECT),
            ],
        )
    }

    #[test]
    fn chain_is_valid_and_projective() {
        let tree = chain3();
        assert!(validate_tree(&tree).is_empty());
        assert!(is_projective(&tree).unwrap());
        assert_eq!(tree.root(), 3);
        assert_eq!(tree.right_spine(), vec![3]);
        assert_eq!(tree.left_spine(), vec![3, 2, 1]);
    }

    #[test]
    fn two_roots_reported() {
        let tree = DependencyTree::new(
            vec![tok(1, "a", PosTag::N), tok(2, "b", PosTag::V)],
            vec![
                DependencyEdge::new(1, 0, RelationLabel::DIRECT),
                DependencyEdge::new(2, 0, RelationLabel::DIRECT),
            ],
        );
        let report = validate_tree(&tree);
        assert_eq!(report, vec![Violation::MultipleRoots { roots: vec![1, 2] }]);
        assert_eq!(report[0].rule(), "multiple roots");
    }

    #[test]
    fn cycle_names_members() {
        let tree = DependencyTree::new(
            vec![tok(1, "a", PosTag::N), tok(2, "b", PosTag::V), tok(3, "c", PosTag::V)],
            vec![
                DependencyEdge::new(1, 2, RelationLabel::DIRECT),
                DependencyEdge::new(2, 1, RelationLabel::DIRECT),
                DependencyEdge::new(3, 0, RelationLabel::DIRECT),
            ],
        );
        let report = validate_tree(&tree);
        assert!(report.contains(&Violation::Cycle { members: vec![1, 2] }));
        assert!(report.iter().any(|v| v.rule() == "cycle"));
    }

    #[test]
    fn crossing_edges_are_not_projective() {
        // (head 1, dep 3), (head 2, dep 4) cross.
        let tree = DependencyTree::new(
            (1..=4).map(|i| tok(i, "w", PosTag::N)).collect(),
            vec![
                DependencyEdge::new(1, 0, RelationLabel::DIRECT),
                DependencyEdge::new(2, 1, RelationLabel::DIRECT),
                DependencyEdge::new(3, 1, RelationLabel::DIRECT),
                DependencyEdge::new(4, 2, RelationLabel::DIRECT),
            ],
        );
        assert!(validate_tree(&tree).is_empty());
        assert!(!is_projective(&tree).unwrap());
    }

    #[test]
    fn projectivity_rejects_invalid_tree() {
        let tree = DependencyTree::new(vec![tok(1, "a", PosTag::N)], vec![]);
        assert!(matches!(is_projective(&tree), Err(ModelError::InvalidTree(_))));
    }

    #[test]
    fn out_of_range_and_self_loop() {
        let tree = DependencyTree::new(
            vec![tok(1, "a", PosTag::N), tok(2, "b", PosTag::V)],
            vec![
                DependencyEdge::new(1, 1, RelationLabel::DIRECT),
                DependencyEdge::new(2, 7, RelationLabel::DIRECT),
                DependencyEdge::new(9, 0, RelationLabel::DIRECT),
            ],
        );
        let rules: Vec<&str> = validate_tree(&tree).iter().map(Violation::rule).collect();
        assert!(rules.contains(&"self loop"));
        assert!(rules.contains(&"head out of range"));
        assert!(rules.contains(&"dependent out of range"));
        assert!(rules.contains(&"no root"));
    }

    #[test]
    fn unknown_pos_is_preserved() {
        let mut token = tok(1, "x", PosTag::N);
        token.set_pos_name("SYM");
        assert_eq!(token.pos(), PosTag::OTHER);
        assert_eq!(token.pos_name(), "SYM");
        let json = serde_json::to_string(&token).unwrap();
        let back: Token = serde_json::from_str(&json).unwrap();
        assert_eq!(back, token);
    }

    #[test]
    fn relation_labels() {
        assert_eq!(RelationLabel::parse("of"), Some(RelationLabel::prep("of")));
        assert_eq!(RelationLabel::parse("prep:from"), Some(RelationLabel::prep("from")));
        assert_eq!(RelationLabel::parse("SUBJ"), Some(RelationLabel::SUBJ));
        assert_eq!(RelationLabel::parse("NMOD"), None);
        assert_eq!(RelationLabel::parse_lenient("NMOD"), RelationLabel::DIRECT);
        assert_eq!(RelationLabel::prep("up").to_string(), "up");
    }

    #[test]
    fn partial_parse_gap_is_reported() {
        let f1 = ParseFragment::new(DependencyTree::new(
            vec![tok(1, "a", PosTag::N)],
            vec![DependencyEdge::new(1, 0, RelationLabel::DIRECT)],
        ))
        .unwrap();
        let f3 = ParseFragment::new(DependencyTree::new(
            vec![tok(3, "c", PosTag::N)],
            vec![DependencyEdge::new(3, 0, RelationLabel::DIRECT)],
        ))
        .unwrap();
        assert_eq!(
            PartialParse::new(vec![f1.clone(), f3]),
            Err(ModelError::CoverageGap(Span::new(2, 2)))
        );
        assert_eq!(
            PartialParse::new(vec![f1]),
            Err(ModelError::TooFewFragments(1))
        );
    }
}
