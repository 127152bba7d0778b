//! Discourse-consistency toolkit for dependency parses.
//!
//! Complete parses of a document are pooled into a [`DiscourseStore`] of
//! part-of-speech profiles and collocations. That store then drives the
//! choice among multiple parses of a sentence ([`Disambiguator`]) and the
//! repair and joining of fragmentary parses ([`Completer`]).

pub mod analysis;
pub mod complete;
pub mod config;
pub mod conll;
pub mod disambiguate;
pub mod io;
pub mod lexicon;
pub mod matcher;
pub mod model;
pub mod pipeline;
pub mod score;
pub mod store;

pub use complete::{Completer, CompletionConfig, CompletionResult, CompletionStatus};
pub use config::PipelineConfig;
pub use disambiguate::{Disambiguator, Selection};
pub use lexicon::SynonymLexicon;
pub use matcher::{MatchLevel, MatchResult, Matcher};
pub use model::{
    Collocation, DependencyEdge, DependencyTree, Document, Lexeme, Parse, ParseForest,
    ParseFragment, PartialParse, PosTag, RelationLabel, SentenceRecord, Token,
};
pub use pipeline::{run_pipeline, PipelineOutput};
pub use score::Score;
pub use store::{DiscourseStore, Scope};
