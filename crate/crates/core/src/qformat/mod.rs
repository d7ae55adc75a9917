//! Question markup, submissions and student views.
//!
//! Questions are written as `.pb.html` files using four elements:
//! `pl-question-panel`, `pl-order-blocks`, `pl-block-group` and `pl-answer`.
//! Everything else in the file is left alone.

mod emit;
mod markup;
mod view;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Submission;

pub use emit::to_markup;
pub use markup::{parse_question, parse_question_with_id, ParsedQuestion};
pub use view::{render_student_view, resolve_ordering, StudentBlock, StudentView};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseSeverity {
    Error,
    Warning,
}

/// A problem found while reading question markup.
///
/// Error codes: `E01` unknown tag in depends, `E02` duplicate tag, `E03`
/// dependency cycle, `E04` depends on a distractor, `E05` nested
/// `pl-block-group`, `E06` malformed markup, `E07` no `pl-order-blocks` or no
/// required blocks. Warnings (`P01`..) flag input that was accepted but
/// ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseFinding {
    pub severity: ParseSeverity,
    pub code: String,
    pub line: usize,
    pub message: String,
}

impl ParseFinding {
    pub(crate) fn error(code: &str, line: usize, message: impl Into<String>) -> Self {
        ParseFinding {
            severity: ParseSeverity::Error,
            code: code.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn warning(code: &str, line: usize, message: impl Into<String>) -> Self {
        ParseFinding {
            severity: ParseSeverity::Warning,
            code: code.to_string(),
            line,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == ParseSeverity::Error
    }
}

impl fmt::Display for ParseFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            ParseSeverity::Error => "error",
            ParseSeverity::Warning => "warning",
        };
        write!(f, "line {}: {sev} {}: {}", self.line, self.code, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed submission at line {line}, column {column}: {message}")]
pub struct SubmissionError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Deserialize)]
struct SubmissionDoc {
    question_id: String,
    ordering: Vec<String>,
}

/// Reads a `{"question_id": ..., "ordering": [...]}` document. The ordering
/// is passed through as-is.
pub fn parse_submission(text: &str) -> Result<Submission, SubmissionError> {
    let doc: SubmissionDoc = serde_json::from_str(text).map_err(|e| SubmissionError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(Submission {
        question_id: doc.question_id,
        ordering: doc.ordering,
    })
}
