//! Stateless HTTP API over a directory of question files.
//!
//! The seed carried in each request is the whole session: a view is rendered
//! from `(question, seed)` and a grade request re-derives the same shuffle to
//! map render ids back to tags. Responses never carry tags, dependencies,
//! groups or distractor flags.

mod api;
mod store;

pub use api::{router, serve, GradeRequest, GradeResponse, QuestionSummary, ServiceConfig};
pub use store::{title_of, LoadError, QuestionStore};
