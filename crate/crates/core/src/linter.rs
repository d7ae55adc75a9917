//! Static checks for question authoring mistakes.
//!
//! | code | severity | meaning |
//! |------|----------|---------|
//! | `E01` | error | depends names an unknown tag |
//! | `E02` | error | duplicate tag |
//! | `E03` | error | dependency cycle |
//! | `E04` | error | depends names a distractor |
//! | `E05` | error | nested group |
//! | `E07` | error | no required blocks |
//! | `E08` | error | no ordering satisfies the dependencies and groups |
//! | `E09` | error | group membership is inconsistent |
//! | `W01` | warning | only one accepted ordering (4+ blocks) |
//! | `W02` | warning | dependency already implied by others |
//! | `W03` | warning | group member waits on a block outside the group |
//! | `W04` | warning | distractor text duplicates a required block |
//! | `I01` | info | number of accepted orderings |
//! | `I02` | info | too many blocks to count orderings |

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grader::count_orderings;
use crate::graph::{expand, ExpandedGraph};
use crate::model::Question;
use crate::subset::DP_GUARD;

/// Smallest question for which a single accepted ordering is suspicious.
pub const OVER_CONSTRAINED_MIN_BLOCKS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LintSeverity {
    Error,
    Warning,
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LintFinding {
    pub severity: LintSeverity,
    pub code: String,
    /// Tag the finding is about, or `"question"`.
    pub subject: String,
    pub message: String,
}

impl LintFinding {
    fn new(severity: LintSeverity, code: &str, subject: impl Into<String>, message: impl Into<String>) -> Self {
        LintFinding {
            severity,
            code: code.to_string(),
            subject: subject.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == LintSeverity::Error
    }
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            LintSeverity::Error => "error",
            LintSeverity::Warning => "warning",
            LintSeverity::Info => "info",
        };
        write!(f, "{sev} {} [{}]: {}", self.code, self.subject, self.message)
    }
}

const QUESTION: &str = "question";

pub fn lint(question: &Question) -> Vec<LintFinding> {
    let graph = match expand(question) {
        Ok(g) => g,
        Err(err) => return vec![expand_error(err)],
    };
    let mut findings = Vec::new();
    let n = graph.len();

    match count_orderings(&graph) {
        Ok(0) => findings.push(LintFinding::new(
            LintSeverity::Error,
            "E08",
            QUESTION,
            "no ordering satisfies the dependencies and groups; every submission will be marked wrong",
        )),
        Ok(count) => {
            if count == 1 && n >= OVER_CONSTRAINED_MIN_BLOCKS {
                findings.push(LintFinding::new(
                    LintSeverity::Warning,
                    "W01",
                    QUESTION,
                    format!(
                        "only the authored order of all {n} blocks is accepted; check each dependency in isolation"
                    ),
                ));
            }
            findings.push(LintFinding::new(
                LintSeverity::Info,
                "I01",
                QUESTION,
                format!("{count} accepted ordering{}", if count == 1 { "" } else { "s" }),
            ));
        }
        Err(_) => findings.push(LintFinding::new(
            LintSeverity::Info,
            "I02",
            QUESTION,
            format!("{n} required blocks is above {DP_GUARD}; accepted orderings were not counted"),
        )),
    }

    findings.extend(redundant_dependencies(question, &graph));
    findings.extend(dead_end_groups(question, &graph));
    findings.extend(duplicate_distractor_text(question));
    findings
}

fn expand_error(err: Error) -> LintFinding {
    let (code, subject) = match &err {
        Error::UnknownReference { from, .. } => ("E01", from.clone()),
        Error::DuplicateTag(tag) => ("E02", tag.clone()),
        Error::Cycle(cycle) => ("E03", cycle.first().cloned().unwrap_or_default()),
        Error::DistractorDependency { from, .. } => ("E04", from.clone()),
        Error::NestedGroup(tag) => ("E05", tag.clone()),
        Error::NoRequiredBlocks => ("E07", QUESTION.to_string()),
        Error::GroupMembership(tag) | Error::OverlappingGroups(tag) => ("E09", tag.clone()),
        _ => ("E09", QUESTION.to_string()),
    };
    LintFinding::new(LintSeverity::Error, code, subject, err.to_string())
}

/// Owners of depends lists: every block, then every group.
fn depends_lists(question: &Question) -> Vec<(&str, &[String])> {
    question
        .blocks
        .iter()
        .filter(|b| !b.is_distractor)
        .map(|b| (b.tag.as_str(), b.depends.as_slice()))
        .chain(question.groups.iter().map(|g| (g.tag.as_str(), g.depends.as_slice())))
        .collect()
}

/// Copy of `question` without the depends entry `dep` of `owner` (all
/// repeats of it).
fn without_dependency(question: &Question, owner: &str, dep: &str) -> Question {
    let mut q = question.clone();
    if let Some(b) = q.blocks.iter_mut().find(|b| b.tag == owner) {
        b.depends.retain(|d| d != dep);
    } else if let Some(g) = q.groups.iter_mut().find(|g| g.tag == owner) {
        g.depends.retain(|d| d != dep);
    }
    q
}

/// W02: a depends entry whose edges are all implied by the remaining
/// entries. Dropping such an entry leaves the transitive closure, and so the
/// accepted orderings, unchanged.
fn redundant_dependencies(question: &Question, graph: &ExpandedGraph) -> Vec<LintFinding> {
    let mut findings = Vec::new();
    for (owner, deps) in depends_lists(question) {
        let mut seen = HashSet::new();
        for dep in deps {
            if !seen.insert(dep.as_str()) {
                findings.push(LintFinding::new(
                    LintSeverity::Warning,
                    "W02",
                    owner,
                    format!("`{owner}` lists `{dep}` more than once"),
                ));
                continue;
            }
            let Ok(reduced) = expand(&without_dependency(question, owner, dep)) else {
                continue;
            };
            let reach = reduced.reachability();
            let implied = graph
                .edge_indices()
                .filter(|&(u, v)| !reduced.edge_indices().any(|e| e == (u, v)))
                .all(|(u, v)| reach[u][v]);
            if implied {
                findings.push(LintFinding::new(
                    LintSeverity::Warning,
                    "W02",
                    owner,
                    format!("`{owner}` depending on `{dep}` is already implied by other dependencies"),
                ));
            }
        }
    }
    findings
}

/// W03: a group member has a predecessor outside the group that some other
/// member does not (transitively) wait for. Starting the group with that
/// other member leaves the student stuck: the outside block cannot be placed
/// until the group is finished, and the group cannot be finished without it.
fn dead_end_groups(question: &Question, graph: &ExpandedGraph) -> Vec<LintFinding> {
    let reach = graph.reachability();
    let mut findings = Vec::new();
    for (gi, set) in graph.contiguity_sets().iter().enumerate() {
        let group_tag = question
            .groups
            .iter()
            .find(|g| g.members.iter().any(|m| graph.index_of(m) == Some(set[0])))
            .map_or_else(|| format!("#{gi}"), |g| g.tag.clone());
        let mut reported = HashSet::new();
        for &member in set {
            for &outside in graph.preds(member) {
                if set.contains(&outside) || !reported.insert(outside) {
                    continue;
                }
                if let Some(&other) = set.iter().find(|&&a| a != member && !reach[outside][a]) {
                    findings.push(LintFinding::new(
                        LintSeverity::Warning,
                        "W03",
                        graph.nodes()[member].clone(),
                        format!(
                            "`{}` in group `{group_tag}` needs `{}`, which is outside the group; \
                             starting the group with `{}` is a dead end. Make the whole group depend on `{}`",
                            graph.nodes()[member],
                            graph.nodes()[outside],
                            graph.nodes()[other],
                            graph.nodes()[outside],
                        ),
                    ));
                }
            }
        }
    }
    findings
}

fn normalize(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// W04: a distractor whose text matches a required block.
fn duplicate_distractor_text(question: &Question) -> Vec<LintFinding> {
    question
        .distractors()
        .filter_map(|d| {
            let text = normalize(&d.text);
            question
                .required_blocks()
                .find(|r| normalize(&r.text) == text)
                .map(|r| {
                    LintFinding::new(
                        LintSeverity::Warning,
                        "W04",
                        d.tag.clone(),
                        format!("distractor `{}` has the same text as required block `{}`", d.tag, r.tag),
                    )
                })
        })
        .collect()
}
