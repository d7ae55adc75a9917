//! Grading of submissions against an expanded dependency graph.
//!
//! Partial credit uses the insert/delete edit distance from the submission to
//! the nearest accepted ordering: `d = |seq| + n - 2L`, where `L` is the best
//! LCS between the submission and any accepted ordering. Distractors and
//! unknown tags never match, so they always cost one deletion each. Score is
//! `max(0, (n - d) / n)`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Result;
use crate::exec::Exec;
use crate::graph::{expand, is_valid_ordering, ExpandedGraph, Placer};
use crate::model::{FeedbackMode, GradingOptions, Question, ScoringMode, Submission};
use crate::subset::{SubsetSpace, DP_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Correct,
    WrongAtLine,
    Incomplete,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Correct => "correct",
            Status::WrongAtLine => "wrong_at_line",
            Status::Incomplete => "incomplete",
        })
    }
}

/// Exact score in `[0, 1]`. Serializes as numerator, denominator and a
/// six-decimal convenience value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Score(Ratio<u64>);

impl Score {
    pub const ZERO: Score = Score(Ratio::new_raw(0, 1));
    pub const ONE: Score = Score(Ratio::new_raw(1, 1));

    /// `numer / denom`, reduced. Panics if `denom` is zero or the value
    /// exceeds one.
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom > 0 && numer <= denom, "score {numer}/{denom} out of range");
        Score(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn is_one(&self) -> bool {
        self.numer() == self.denom()
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScoreDoc {
    numerator: u64,
    denominator: u64,
    value: f64,
}

impl Serialize for Score {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ScoreDoc {
            numerator: self.numer(),
            denominator: self.denom(),
            value: (self.to_f64() * 1e6).round() / 1e6,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Score {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = ScoreDoc::deserialize(deserializer)?;
        if doc.denominator == 0 || doc.numerator > doc.denominator {
            return Err(serde::de::Error::custom("score must be a fraction in [0, 1]"));
        }
        Ok(Score::new(doc.numerator, doc.denominator))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradeOutcome {
    pub status: Status,
    /// 1-based line of the first unplaceable block.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_failure: Option<usize>,
    pub edit_distance: usize,
    pub score: Score,
}

/// 1-based index of the first line that cannot be placed given the lines
/// before it, or `None` if every line is placeable (the sequence may still be
/// incomplete).
///
/// Placeability is local: a line fails if it is not a required block, is a
/// repeat, has an unplaced predecessor, or leaves an unfinished group.
pub fn first_failure<S: AsRef<str>>(graph: &ExpandedGraph, seq: &[S]) -> Option<usize> {
    let mut placer = Placer::new(graph);
    for (line, tag) in seq.iter().enumerate() {
        match graph.index_of(tag.as_ref()) {
            Some(i) if placer.can_place(i) => {
                placer.place(i);
            }
            _ => return Some(line + 1),
        }
    }
    None
}

/// Required tags of `seq` as node indices. Adjacent repeats are collapsed;
/// an accepted ordering can match at most one of them.
fn matchable_lines<S: AsRef<str>>(graph: &ExpandedGraph, seq: &[S]) -> Vec<usize> {
    let mut lines: Vec<usize> = seq.iter().filter_map(|t| graph.index_of(t.as_ref())).collect();
    lines.dedup();
    lines
}

/// Minimum number of single-block deletions plus insertions turning `seq`
/// into some accepted ordering. Limited to [`DP_GUARD`] required blocks.
pub fn edit_distance<S: AsRef<str>>(graph: &ExpandedGraph, seq: &[S]) -> Result<usize> {
    edit_distance_with(graph, seq, Exec::default())
}

pub fn edit_distance_with<S: AsRef<str>>(
    graph: &ExpandedGraph,
    seq: &[S],
    exec: Exec,
) -> Result<usize> {
    let space = SubsetSpace::new(graph)?;
    if is_valid_ordering(graph, seq) {
        return Ok(0);
    }
    let lcs = space.best_lcs(&matchable_lines(graph, seq), exec)?;
    Ok(seq.len() + graph.len() - 2 * lcs)
}

/// `max(0, (n - d) / n)` for an edit distance `d` over `n` required blocks.
pub fn score_for_distance(nodes: usize, distance: usize) -> Score {
    if nodes == 0 {
        return if distance == 0 { Score::ONE } else { Score::ZERO };
    }
    Score::new(nodes.saturating_sub(distance) as u64, nodes as u64)
}

pub fn score<S: AsRef<str>>(graph: &ExpandedGraph, seq: &[S]) -> Result<Score> {
    Ok(score_for_distance(graph.len(), edit_distance(graph, seq)?))
}

/// Exact number of accepted orderings. Limited to [`DP_GUARD`] blocks.
pub fn count_orderings(graph: &ExpandedGraph) -> Result<u64> {
    count_orderings_with(graph, Exec::default())
}

pub fn count_orderings_with(graph: &ExpandedGraph, exec: Exec) -> Result<u64> {
    Ok(SubsetSpace::new(graph)?.count(exec))
}

/// Grades one ordering against an already expanded graph.
///
/// With binary scoring on a graph above [`DP_GUARD`] blocks the distance of
/// a wrong answer is not computed exactly; the trivial upper bound
/// `|seq| + n` (delete everything, insert everything) is reported instead.
pub fn grade_ordering<S: AsRef<str>>(
    graph: &ExpandedGraph,
    options: GradingOptions,
    seq: &[S],
    exec: Exec,
) -> Result<GradeOutcome> {
    let n = graph.len();
    let correct = is_valid_ordering(graph, seq);
    let failure = if correct { None } else { first_failure(graph, seq) };
    let status = match (correct, failure) {
        (true, _) => Status::Correct,
        (false, Some(_)) => Status::WrongAtLine,
        (false, None) => Status::Incomplete,
    };

    let distance = if correct {
        0
    } else if options.scoring_mode == ScoringMode::Binary && n > DP_GUARD {
        seq.len() + n
    } else {
        edit_distance_with(graph, seq, exec)?
    };
    let score = match options.scoring_mode {
        ScoringMode::EditDistance => score_for_distance(n, distance),
        ScoringMode::Binary if correct => Score::ONE,
        ScoringMode::Binary => Score::ZERO,
    };
    let first_failure = match options.feedback_mode {
        FeedbackMode::FirstFailure => failure,
        FeedbackMode::None => None,
    };
    Ok(GradeOutcome {
        status,
        first_failure,
        edit_distance: distance,
        score,
    })
}

pub fn grade(question: &Question, submission: &Submission) -> Result<GradeOutcome> {
    let graph = expand(question)?;
    grade_ordering(&graph, question.options, &submission.ordering, Exec::default())
}

/// Grades many submissions for one question, expanding its graph once.
pub fn grade_batch(
    question: &Question,
    submissions: &[Submission],
    exec: Exec,
) -> Result<Vec<GradeOutcome>> {
    let graph = expand(question)?;
    // Each submission's DP runs sequentially; the batch is the parallel axis.
    exec.map(submissions, |s| {
        grade_ordering(&graph, question.options, &s.ordering, Exec::Sequential)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::{chain, fig1, induction};

    fn fig1_graph() -> ExpandedGraph {
        expand(&fig1()).unwrap()
    }

    #[test]
    fn first_failure_examples() {
        let g = fig1_graph();
        assert_eq!(first_failure(&g, &["1", "2", "7", "3", "4", "5", "6"]), Some(3));
        assert_eq!(first_failure(&g, &["1", "2", "3"]), None);
        assert_eq!(first_failure(&g, &["2", "1"]), Some(1));
        assert_eq!(first_failure(&g, &["1", "1"]), Some(2));
        assert_eq!(first_failure(&g, &["1", "zzz"]), Some(2));
        assert_eq!(first_failure::<&str>(&g, &[]), None);

        let g = expand(&induction()).unwrap();
        assert_eq!(first_failure(&g, &["n1", "b1", "i1", "b2", "i2", "c"]), Some(3));
    }

    // Distances below were frozen from the brute-force oracle: minimum of
    // (deletions + insertions) over all 20 accepted orderings, using a plain
    // LCS table for each candidate.
    #[test]
    fn edit_distance_examples() {
        let g = fig1_graph();
        assert_eq!(edit_distance(&g, &["1", "2", "3", "4", "5", "6", "7"]).unwrap(), 0);
        assert_eq!(edit_distance(&g, &["2", "1", "3", "4", "5", "6", "7"]).unwrap(), 2);
        assert_eq!(edit_distance(&g, &["1", "2", "3"]).unwrap(), 4);
        let junk: Vec<String> = (0..7).map(|i| format!("x{i}")).collect();
        assert_eq!(edit_distance(&g, &junk).unwrap(), 14);
        assert_eq!(edit_distance::<&str>(&g, &[]).unwrap(), 7);
        // Only the second 1 can be kept: delete the first 1 and move 7.
        assert_eq!(
            edit_distance(&g, &["1", "7", "1", "2", "3", "4", "5", "6"]).unwrap(),
            3
        );
        // Keeping the later copy of 1 beats keeping the first one.
        assert_eq!(
            edit_distance(&g, &["4", "1", "5", "6", "1", "2", "3", "7"]).unwrap(),
            1
        );
    }

    #[test]
    fn scores() {
        let g = fig1_graph();
        assert_eq!(score(&g, &["4", "5", "6", "1", "2", "3", "7"]).unwrap(), Score::ONE);
        assert_eq!(score(&g, &["2", "1", "3", "4", "5", "6", "7"]).unwrap(), Score::new(5, 7));
        assert_eq!(score::<&str>(&g, &[]).unwrap(), Score::ZERO);
        assert_eq!(score_for_distance(7, 30), Score::ZERO);
        assert_eq!(score_for_distance(0, 0), Score::ONE);
    }

    #[test]
    fn counts() {
        assert_eq!(count_orderings(&fig1_graph()).unwrap(), 20);
        assert_eq!(count_orderings(&expand(&chain(4)).unwrap()).unwrap(), 1);
        assert_eq!(count_orderings(&expand(&induction()).unwrap()).unwrap(), 2);
        let empty = ExpandedGraph::from_parts(vec![], [], vec![]).unwrap();
        assert_eq!(count_orderings(&empty).unwrap(), 1);
        let free = ExpandedGraph::from_parts((0..6).map(|i| i.to_string()).collect(), [], vec![]).unwrap();
        assert_eq!(count_orderings(&free).unwrap(), 720);
    }

    #[test]
    fn guards() {
        let big = ExpandedGraph::from_parts((0..21).map(|i| i.to_string()).collect(), [], vec![]).unwrap();
        assert!(count_orderings(&big).is_err());
        assert!(edit_distance(&big, &["0"]).is_err());
    }

    #[test]
    fn unsatisfiable_graph() {
        // b2 needs x, x needs b1: the group {b1, b2} can never be closed.
        let g = ExpandedGraph::from_parts(
            vec!["b1".into(), "b2".into(), "x".into()],
            [(0, 2), (2, 1)],
            vec![vec![0, 1]],
        )
        .unwrap();
        assert_eq!(count_orderings(&g).unwrap(), 0);
        assert!(edit_distance(&g, &["b1"]).is_err());
    }

    #[test]
    fn grade_examples() {
        let q = fig1();
        let ok = grade(&q, &Submission::new(["1", "4", "2", "3", "5", "6", "7"])).unwrap();
        assert_eq!(ok.status, Status::Correct);
        assert_eq!(ok.score, Score::ONE);
        assert_eq!(ok.first_failure, None);

        let empty = grade(&q, &Submission::default()).unwrap();
        assert_eq!(empty.status, Status::Incomplete);
        assert_eq!(empty.edit_distance, 7);
        assert_eq!(empty.score, Score::ZERO);

        let swapped = grade(&q, &Submission::new(["2", "1", "3", "4", "5", "6", "7"])).unwrap();
        assert_eq!(swapped.status, Status::WrongAtLine);
        assert_eq!(swapped.first_failure, Some(1));
        assert_eq!(swapped.edit_distance, 2);
        assert_eq!(swapped.score, Score::new(5, 7));

        let partial = grade(&q, &Submission::new(["1", "2", "3"])).unwrap();
        assert_eq!(partial.status, Status::Incomplete);
        assert_eq!(partial.edit_distance, 4);
        assert_eq!(partial.score, Score::new(3, 7));
    }

    #[test]
    fn grading_options() {
        let q = fig1().with_options(GradingOptions {
            feedback_mode: FeedbackMode::None,
            scoring_mode: ScoringMode::Binary,
        });
        let out = grade(&q, &Submission::new(["2", "1", "3", "4", "5", "6", "7"])).unwrap();
        assert_eq!(out.status, Status::WrongAtLine);
        assert_eq!(out.first_failure, None);
        assert_eq!(out.score, Score::ZERO);
        assert_eq!(out.edit_distance, 2);
    }

    #[test]
    fn batch_matches_single() {
        let q = fig1();
        let subs: Vec<Submission> = [
            vec!["1", "2", "3", "4", "5", "6", "7"],
            vec!["7"],
            vec![],
            vec!["4", "1", "5", "2", "6", "3", "7"],
        ]
        .into_iter()
        .map(Submission::new)
        .collect();
        let single: Vec<_> = subs.iter().map(|s| grade(&q, s).unwrap()).collect();
        assert_eq!(grade_batch(&q, &subs, Exec::Parallel).unwrap(), single);
        assert_eq!(grade_batch(&q, &subs, Exec::Sequential).unwrap(), single);
    }

    #[test]
    fn score_json_shape() {
        let json = serde_json::to_value(Score::new(5, 7)).unwrap();
        assert_eq!(json["numerator"], 5);
        assert_eq!(json["denominator"], 7);
        assert_eq!(json["value"], 0.714286);
        let back: Score = serde_json::from_value(json).unwrap();
        assert_eq!(back, Score::new(5, 7));
    }
}
