//! Choosing among multiple parses of a sentence by the collocations they
//! share with the rest of the discourse.

use serde::Serialize;

use crate::lexicon::SynonymLexicon;
use crate::matcher::{MatchLevel, MatchResult, Matcher};
use crate::model::{Collocation, DependencyTree, ModelError, ParseForest};
use crate::score::Score;
use crate::store::{edge_collocation, DiscourseStore, Scope, StoreError};

/// One supported (or unsupported) collocation of a candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoredCollocation {
    pub collocation: Collocation,
    pub result: MatchResult,
    /// What this collocation adds to the candidate total.
    pub contribution: Score,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateScore {
    pub candidate_index: usize,
    pub total: Score,
    pub per_collocation: Vec<ScoredCollocation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub chosen: usize,
    pub scores: Vec<CandidateScore>,
    /// Whether the chosen candidate strictly beat every other one.
    pub decided: bool,
}

/// Summary line data for audit logs and CLI output.
#[derive(Clone, Debug, Serialize)]
pub struct SelectionSummary {
    pub chosen: usize,
    pub decided: bool,
    pub totals: Vec<Score>,
}

impl Selection {
    pub fn summary(&self) -> SelectionSummary {
        SelectionSummary {
            chosen: self.chosen,
            decided: self.decided,
            totals: self.scores.iter().map(|s| s.total).collect(),
        }
    }
}

/// Collocations of every edge whose endpoints are both content tokens, in
/// dependent order.
pub fn extract_collocations(tree: &DependencyTree) -> Result<Vec<Collocation>, ModelError> {
    tree.ensure_valid()?;
    Ok(tree
        .edges()
        .iter()
        .filter_map(|edge| edge_collocation(tree, edge))
        .collect())
}

pub struct Disambiguator<'a> {
    matcher: Matcher<'a>,
    similar_discount: Score,
}

impl<'a> Disambiguator<'a> {
    pub fn new(
        store: &'a DiscourseStore,
        lexicon: &'a SynonymLexicon,
        similar_discount: Score,
    ) -> Result<Self, StoreError> {
        Ok(Disambiguator {
            matcher: Matcher::new(store, lexicon)?,
            similar_discount,
        })
    }

    pub fn from_matcher(matcher: Matcher<'a>, similar_discount: Score) -> Self {
        Disambiguator {
            matcher,
            similar_discount,
        }
    }

    /// Scores on behalf of `scope`; a sentence scope excludes the
    /// sentence's own instances from the evidence.
    pub fn scoped(mut self, scope: Scope) -> Self {
        self.matcher = self.matcher.scoped(scope);
        self
    }

    pub fn score_candidate(
        &self,
        candidate_index: usize,
        tree: &DependencyTree,
    ) -> Result<CandidateScore, ModelError> {
        let per_collocation: Vec<ScoredCollocation> = extract_collocations(tree)?
            .into_iter()
            .map(|collocation| {
                let result = self.matcher.match_collocation(&collocation);
                let contribution = match result.level() {
                    MatchLevel::Identical => result.score(),
                    MatchLevel::Synonym => result.score() * self.similar_discount,
                    MatchLevel::PosBackoff | MatchLevel::None => Score::ZERO,
                };
                ScoredCollocation {
                    collocation,
                    result,
                    contribution,
                }
            })
            .collect();
        Ok(CandidateScore {
            candidate_index,
            total: per_collocation.iter().map(|c| c.contribution).sum(),
            per_collocation,
        })
    }

    /// Picks the highest-scoring candidate; among tied best candidates the
    /// earliest in emission order wins.
    pub fn select_parse(&self, forest: &ParseForest) -> Result<Selection, ModelError> {
        let scores = forest
            .candidates()
            .iter()
            .enumerate()
            .map(|(i, tree)| self.score_candidate(i, tree))
            .collect::<Result<Vec<_>, _>>()?;
        let best = scores.iter().map(|s| s.total).max().unwrap_or(Score::ZERO);
        let winners: Vec<usize> = scores
            .iter()
            .filter(|s| s.total == best)
            .map(|s| s.candidate_index)
            .collect();
        let decided = winners.len() == 1;
        let chosen = winners.first().copied().unwrap_or(0);
        Ok(Selection {
            chosen,
            scores,
            decided,
        })
    }
}
