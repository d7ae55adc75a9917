//! Dependency-graph grading for scrambled-proof questions.
//!
//! An instructor writes each proof line as a block and declares which lines
//! must come before it. Any ordering consistent with those declarations (and
//! with subproof groups being listed contiguously) is accepted. Wrong answers
//! get first-failing-line feedback and edit-distance partial credit.

pub mod error;
pub mod exec;
pub mod grader;
pub mod graph;
pub mod linter;
pub mod model;
pub mod qformat;
mod subset;

#[cfg(test)]
mod test_fixtures;

pub use error::{Error, Result};
pub use exec::Exec;
pub use grader::{
    count_orderings, count_orderings_with, edit_distance, edit_distance_with, first_failure, grade,
    grade_batch, grade_ordering, score, score_for_distance, GradeOutcome, Score, Status,
};
pub use graph::{expand, is_valid_ordering, valid_orderings, ExpandedGraph, ENUMERATION_GUARD};
pub use linter::{lint, LintFinding, LintSeverity};
pub use model::{
    Block, FeedbackMode, GradingOptions, Group, Question, ScoringMode, Submission, UNKNOWN_TAG,
};
pub use qformat::{
    parse_question, parse_question_with_id, parse_submission, render_student_view,
    resolve_ordering, to_markup, ParseFinding, ParseSeverity, StudentBlock, StudentView,
};
pub use subset::DP_GUARD;
