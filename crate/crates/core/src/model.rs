//! Authoring-side types: a question is an ordered list of blocks (draggable
//! proof lines), optional subproof groups, and grading options.

use serde::{Deserialize, Serialize};

/// Identifier that can never be produced by the markup parser. Render ids
/// that do not resolve map to this tag, so the grader always rejects them.
pub const UNKNOWN_TAG: &str = "<unknown>";

/// One draggable line of proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub tag: String,
    pub text: String,
    pub is_distractor: bool,
    /// Block or group tags that must come before this block.
    pub depends: Vec<String>,
    pub group: Option<String>,
}

impl Block {
    pub fn required(tag: impl Into<String>, text: impl Into<String>) -> Self {
        Block {
            tag: tag.into(),
            text: text.into(),
            is_distractor: false,
            depends: Vec::new(),
            group: None,
        }
    }

    pub fn distractor(tag: impl Into<String>, text: impl Into<String>) -> Self {
        Block {
            is_distractor: true,
            ..Block::required(tag, text)
        }
    }

    pub fn depends_on<I, S>(mut self, deps: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.depends = deps.into_iter().map(Into::into).collect();
        self
    }

    pub fn in_group(mut self, group: impl Into<String>) -> Self {
        self.group = Some(group.into());
        self
    }
}

/// A subproof. Its members must appear contiguously in any accepted answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub tag: String,
    pub depends: Vec<String>,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackMode {
    #[default]
    FirstFailure,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoringMode {
    Binary,
    #[default]
    EditDistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradingOptions {
    pub feedback_mode: FeedbackMode,
    pub scoring_mode: ScoringMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub prompt: String,
    /// Blocks in author order. Enumeration and tie-breaking follow this order.
    pub blocks: Vec<Block>,
    pub groups: Vec<Group>,
    pub options: GradingOptions,
}

impl Question {
    pub fn new(id: impl Into<String>, prompt: impl Into<String>) -> Self {
        Question {
            id: id.into(),
            prompt: prompt.into(),
            blocks: Vec::new(),
            groups: Vec::new(),
            options: GradingOptions::default(),
        }
    }

    pub fn with_block(mut self, block: Block) -> Self {
        self.blocks.push(block);
        self
    }

    /// Adds a group and stamps `group` on each member block that already
    /// exists.
    pub fn with_group<I, S>(mut self, tag: &str, depends: I, members: &[&str]) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        for block in &mut self.blocks {
            if members.contains(&block.tag.as_str()) {
                block.group = Some(tag.to_string());
            }
        }
        self.groups.push(Group {
            tag: tag.to_string(),
            depends: depends.into_iter().map(Into::into).collect(),
            members: members.iter().map(|m| m.to_string()).collect(),
        });
        self
    }

    pub fn with_options(mut self, options: GradingOptions) -> Self {
        self.options = options;
        self
    }

    pub fn block(&self, tag: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.tag == tag)
    }

    pub fn group(&self, tag: &str) -> Option<&Group> {
        self.groups.iter().find(|g| g.tag == tag)
    }

    pub fn required_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| !b.is_distractor)
    }

    pub fn distractors(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.is_distractor)
    }
}

/// An ordered list of block references claimed as a proof. Nothing about it
/// is validated; unknown, duplicate and distractor tags are all allowed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Submission {
    #[serde(default)]
    pub question_id: String,
    pub ordering: Vec<String>,
}

impl Submission {
    pub fn new<I, S>(ordering: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Submission {
            question_id: String::new(),
            ordering: ordering.into_iter().map(Into::into).collect(),
        }
    }
}
